//! Computer algebra for two-generator potential algebras.
//!
//! The crate covers noncommutative polynomials truncated at a degree cap,
//! potentials and their cyclic derivatives, truncated standard bases in the
//! free power-series algebra, Hilbert functions and multiplication tables of
//! the quotients, potential canonicalization, isomorphism tests, and finite
//! braces/trusses with their associated graded pre-Lie structures.

pub mod brace;
pub mod classify;
pub mod error;
pub mod field;
pub mod isotest;
pub mod linalg;
pub mod par;
pub mod parse;
pub mod poly;
pub mod potential;
pub mod quotient;
pub mod reproduce;
pub mod rewrite;
pub mod subst;
pub mod word;

pub use classify::{classify_potential, cubic_class, ClassificationReport, CubicLabel};
pub use error::{AlgebraError, Result};
pub use field::{FieldSpec, Scalar};
pub use isotest::{distinguish, FiniteAlgebra, IsoVerdict};
pub use parse::parse_poly;
pub use poly::FreePoly;
pub use potential::{cyclicize, derive_ginzburg, derive_simple, syzygy_residual, DerivativeMode, Potential};
pub use quotient::{hilbert, invariant_profile, mult_table, InvariantProfile, MultTable, QuotientAlgebra};
pub use rewrite::{complete, normal_form, oracle_dimension, RewriteSystem};
pub use subst::{abelianize_cubic, invert_substitution, substitute, Substitution};
pub use word::{compare_words, MonomialOrder, OrderMode, Variable, Word};
