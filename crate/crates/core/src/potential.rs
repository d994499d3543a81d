//! Cyclic potentials and their derivatives.
//!
//! Two derivative conventions are supported. The simple derivative drops a
//! leading letter and is meant for cyclically invariant inputs; the cyclic
//! (Ginzburg) derivative sums the rotations following each occurrence of the
//! variable and works on any representative of a cyclic class. For every word
//! `w`, `derive_ginzburg(w, v) == derive_simple(cyclicize(w), v)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::Scalar;
use crate::poly::FreePoly;
use crate::word::{MonomialOrder, Variable, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivativeMode {
    #[default]
    Simple,
    Ginzburg,
}

/// Sum of all `|w|` rotations of each word, duplicates included.
pub fn cyclicize(f: &FreePoly) -> FreePoly {
    f.map_words(|w| {
        let n = w.degree().max(1);
        (0..n).map(|k| (w.rotate(k), Scalar::one())).collect::<Vec<_>>()
    })
}

pub fn is_cyclically_invariant(f: &FreePoly) -> bool {
    f.terms().all(|(w, c)| (1..w.degree()).all(|k| &f.coeff(&w.rotate(k)) == c))
}

/// Coefficient sums per rotation class, keyed by the class necklace. Two
/// polynomials are cyclically equivalent iff their class vectors agree.
pub fn cyclic_classes(f: &FreePoly) -> BTreeMap<Word, Scalar> {
    let field = f.field();
    let mut out: BTreeMap<Word, Scalar> = BTreeMap::new();
    for (w, c) in f.terms() {
        let e = out.entry(w.necklace()).or_insert_with(Scalar::zero);
        *e = field.add(e, c);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The cyclically invariant representative `Σ c_w · cyclicize(w) / |w|` of
/// the cyclic class of `f`.
pub fn cyclic_symmetrize(f: &FreePoly) -> Result<FreePoly> {
    let field = f.field();
    let mut out = FreePoly::zero(field, f.cap());
    for (w, c) in f.terms() {
        let n = w.degree().max(1);
        let share = field.div_int(c, n as i64)?;
        for k in 0..n {
            out.add_term(w.rotate(k), &share);
        }
    }
    Ok(out)
}

pub fn derive_simple(f: &FreePoly, v: Variable) -> FreePoly {
    f.map_words(|w| w.strip_first(v).map(|u| (u, Scalar::one())))
}

pub fn derive_ginzburg(f: &FreePoly, v: Variable) -> FreePoly {
    f.map_words(|w| {
        let n = w.degree();
        (0..n)
            .filter(|&s| w.at(s) == v)
            .map(|s| {
                // rotation starting just after position s, with the v dropped
                let after = w.suffix(n - s - 1);
                let before = w.prefix(s);
                (after.concat(&before), Scalar::one())
            })
            .collect::<Vec<_>>()
    })
}

pub fn derive(f: &FreePoly, v: Variable, mode: DerivativeMode) -> FreePoly {
    match mode {
        DerivativeMode::Simple => derive_simple(f, v),
        DerivativeMode::Ginzburg => derive_ginzburg(f, v),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Potential {
    pub body: FreePoly,
    pub mode: DerivativeMode,
}

impl Potential {
    pub fn new(body: FreePoly, mode: DerivativeMode) -> Self {
        if !body.constant_term().is_zero() {
            log::warn!("potential has a constant term; it does not affect the relations");
        }
        if mode == DerivativeMode::Simple && !is_cyclically_invariant(&body) {
            log::warn!("simple derivatives of a non-cyclic potential: {}", body.render());
        }
        Potential { body, mode }
    }

    pub fn simple(body: FreePoly) -> Self {
        Self::new(body, DerivativeMode::Simple)
    }

    pub fn part(&self, d: u32) -> FreePoly {
        self.body.homogeneous_part(d)
    }

    /// `(∂F/∂x, ∂F/∂y)` in the potential's derivative mode.
    pub fn relations(&self) -> (FreePoly, FreePoly) {
        if self.body.is_zero() {
            log::warn!("zero potential: both relations vanish");
        }
        (derive(&self.body, Variable::X, self.mode), derive(&self.body, Variable::Y, self.mode))
    }

    /// Relations scaled so the leading coefficient of each is 1 (rationals
    /// only; prime-field relations are returned as is).
    pub fn normalized_relations(&self, order: &MonomialOrder) -> Result<(FreePoly, FreePoly)> {
        let (a, b) = self.relations();
        if self.body.field().characteristic() != 0 {
            return Ok((a, b));
        }
        Ok((a.monic(order)?, b.monic(order)?))
    }

    /// The same cyclic class rewritten for the other derivative mode so that
    /// both give identical relations.
    pub fn convert(&self, mode: DerivativeMode) -> Result<Potential> {
        let field = self.body.field();
        let body = match (self.mode, mode) {
            (a, b) if a == b => self.body.clone(),
            // simple on cyclic F == ginzburg on Σ F_d / d
            (DerivativeMode::Simple, DerivativeMode::Ginzburg) => {
                let sym = cyclic_symmetrize(&self.body)?;
                sym.map_words(|w| {
                    let d = w.degree().max(1) as i64;
                    [(*w, field.div_int(&field.one(), d).expect("nonzero degree"))]
                })
            }
            _ => {
                let sym = cyclic_symmetrize(&self.body)?;
                sym.map_words(|w| [(*w, field.from_int(w.degree() as i64))])
            }
        };
        Ok(Potential { body, mode })
    }
}

pub fn relations_of(f: &Potential) -> (FreePoly, FreePoly) {
    f.relations()
}

/// `(F − x∂ₓF − y∂ᵧF, [x,∂ₓF] + [y,∂ᵧF])` with simple derivatives. The first
/// always vanishes for `F` without constant term; the second vanishes iff `F`
/// is cyclically invariant.
pub fn syzygy_residual(f: &FreePoly) -> (FreePoly, FreePoly) {
    let field = f.field();
    let x = FreePoly::var(field, f.cap(), Variable::X);
    let y = FreePoly::var(field, f.cap(), Variable::Y);
    let dx = derive_simple(f, Variable::X);
    let dy = derive_simple(f, Variable::Y);
    let f0 = f.filter(|w| !w.is_empty());
    let r1 = &(&f0 - &(&x * &dx)) - &(&y * &dy);
    let comm = |a: &FreePoly, b: &FreePoly| &(a * b) - &(b * a);
    let r2 = &comm(&x, &dx) + &comm(&y, &dy);
    (r1, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn p(terms: &[(&str, i64)]) -> FreePoly {
        FreePoly::from_ints(Q, None, terms)
    }

    fn cyc(s: &str) -> FreePoly {
        cyclicize(&p(&[(s, 1)]))
    }

    #[test]
    fn cyclicize_examples() {
        assert_eq!(cyc("xxy"), p(&[("xxy", 1), ("xyx", 1), ("yxx", 1)]));
        assert_eq!(cyc("xxx"), p(&[("xxx", 3)]));
        assert_eq!(cyc("xyxy"), p(&[("xyxy", 2), ("yxyx", 2)]));
    }

    #[test]
    fn simple_derivative_examples() {
        assert_eq!(derive_simple(&cyc("xxy"), Variable::X), p(&[("xy", 1), ("yx", 1)]));
        assert_eq!(derive_simple(&cyc("xxy"), Variable::Y), p(&[("xx", 1)]));
        assert_eq!(derive_simple(&p(&[("xxy", 1)]), Variable::X), p(&[("xy", 1)]));
    }

    #[test]
    fn ginzburg_examples() {
        assert_eq!(derive_ginzburg(&p(&[("xyxy", 1)]), Variable::X), p(&[("yxy", 2)]));
        assert_eq!(derive_ginzburg(&p(&[("xxx", 1)]), Variable::X), p(&[("xx", 3)]));
        assert_eq!(derive_ginzburg(&p(&[("y", 1)]), Variable::Y), p(&[("1", 1)]));
    }

    #[test]
    fn relation_examples() {
        let f = Potential::simple(&cyc("xxy") + &p(&[("yyyy", 1)]));
        assert_eq!(f.relations(), (p(&[("xy", 1), ("yx", 1)]), p(&[("xx", 1), ("yyy", 1)])));

        let f = Potential::simple(&p(&[("xxx", 1), ("yyy", 1)]) + &cyc("xyxy"));
        assert_eq!(f.relations(), (p(&[("xx", 1), ("yxy", 2)]), p(&[("yy", 1), ("xyx", 2)])));
        // the cyclic-derivative convention scales degree-d parts by d
        let g = Potential::new(f.body.clone(), DerivativeMode::Ginzburg);
        assert_eq!(g.relations(), (p(&[("xx", 3), ("yxy", 8)]), p(&[("yy", 3), ("xyx", 8)])));
        assert_eq!(f.convert(DerivativeMode::Ginzburg).unwrap().relations(), f.relations());

        let z = Potential::simple(p(&[]));
        assert_eq!(z.relations(), (p(&[]), p(&[])));
    }

    #[test]
    fn syzygy_examples() {
        assert_eq!(syzygy_residual(&cyc("xxy")), (p(&[]), p(&[])));
        // x·xy − xy·x + y·0 ... expanded: [x, xy] + [y, 0]
        assert_eq!(syzygy_residual(&p(&[("xxy", 1)])), (p(&[]), p(&[("xxy", 1), ("xyx", -1)])));
        assert_eq!(syzygy_residual(&p(&[("yyyyy", 1)])), (p(&[]), p(&[])));
    }

    #[test]
    fn symmetrize_is_cyclic_and_class_preserving() {
        let f = p(&[("xxy", 3), ("xyxy", 1), ("yyx", -2)]);
        let s = cyclic_symmetrize(&f).unwrap();
        assert!(is_cyclically_invariant(&s));
        assert_eq!(cyclic_classes(&s), cyclic_classes(&f));
        assert!(!is_cyclically_invariant(&f));
    }
}
