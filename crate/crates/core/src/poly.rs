//! Sparse noncommutative polynomials over an exact field, truncated at a
//! degree cap.
//!
//! Each [`FreePoly`] carries its cap; words above it are dropped on
//! construction and by every operation. Mixed-cap arithmetic takes the minimum
//! cap, so a result is exact through the smaller of its inputs' caps.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, Result};
use crate::field::{format_scalar, FieldSpec, Scalar};
use crate::word::{MonomialOrder, Variable, Word};

/// Equality compares field and terms; the cap is bookkeeping and is ignored.
#[derive(Clone)]
pub struct FreePoly {
    terms: BTreeMap<Word, Scalar>,
    field: FieldSpec,
    cap: Option<u32>,
}

pub fn min_cap(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

#[inline]
fn within(cap: Option<u32>, d: u32) -> bool {
    cap.is_none_or(|c| d <= c)
}

impl FreePoly {
    pub fn zero(field: FieldSpec, cap: Option<u32>) -> Self {
        FreePoly { terms: BTreeMap::new(), field, cap }
    }

    pub fn one(field: FieldSpec, cap: Option<u32>) -> Self {
        Self::monomial(field, cap, Word::EMPTY, field.one())
    }

    pub fn var(field: FieldSpec, cap: Option<u32>, v: Variable) -> Self {
        Self::monomial(field, cap, Word::letter(v), field.one())
    }

    pub fn word(field: FieldSpec, cap: Option<u32>, w: Word) -> Self {
        Self::monomial(field, cap, w, field.one())
    }

    pub fn monomial(field: FieldSpec, cap: Option<u32>, w: Word, c: Scalar) -> Self {
        let mut p = Self::zero(field, cap);
        p.add_term(w, &c);
        p
    }

    /// Builds from `(word, coefficient)` pairs; coefficients are mapped into
    /// the field (so rationals become residues over a prime field).
    pub fn from_terms<I>(field: FieldSpec, cap: Option<u32>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Scalar)>,
    {
        let mut p = Self::zero(field, cap);
        for (w, c) in terms {
            let c = field.element(&c)?;
            p.add_term(w, &c);
        }
        Ok(p)
    }

    /// Shorthand for tests and fixtures: `[("xy", 1), ("yx", -1)]`.
    pub fn from_ints(field: FieldSpec, cap: Option<u32>, terms: &[(&str, i64)]) -> Self {
        let mut p = Self::zero(field, cap);
        for (s, c) in terms {
            let w = if *s == "1" { Word::EMPTY } else { Word::parse(s).expect("word literal") };
            p.add_term(w, &field.from_int(*c));
        }
        p
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn cap(&self) -> Option<u32> {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Adds `c * w` in place, dropping words above the cap and zero sums.
    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() || !within(self.cap, w.degree()) {
            return;
        }
        let field = self.field;
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(e.get(), c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Adds `c * u * self * v` into `acc`.
    pub fn add_scaled_sandwich_into(&self, acc: &mut FreePoly, c: &Scalar, u: &Word, v: &Word) {
        let extra = u.degree() + v.degree();
        for (w, a) in &self.terms {
            if !within(acc.cap, w.degree() + extra) {
                continue;
            }
            acc.add_term(u.concat(w).concat(v), &self.field.mul(a, c));
        }
    }

    pub fn with_cap(&self, cap: Option<u32>) -> Self {
        let mut p = Self::zero(self.field, cap);
        for (w, c) in &self.terms {
            p.add_term(*w, c);
        }
        p
    }

    pub fn truncate(&self, cap: u32) -> Self {
        self.with_cap(min_cap(self.cap, Some(cap)))
    }

    pub fn low_degree(&self) -> Option<u32> {
        self.terms.keys().map(Word::degree).min()
    }

    pub fn high_degree(&self) -> Option<u32> {
        self.terms.keys().map(Word::degree).max()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Word::EMPTY)
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.filter(|w| w.degree() == d)
    }

    pub fn lowest_part(&self) -> Self {
        match self.low_degree() {
            Some(d) => self.homogeneous_part(d),
            None => self.clone(),
        }
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|w| w.degree() == d)
    }

    pub fn filter(&self, keep: impl Fn(&Word) -> bool) -> Self {
        FreePoly {
            terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (*w, c.clone())).collect(),
            field: self.field,
            cap: self.cap,
        }
    }

    /// Applies a word map linearly (`w ↦ Σ c·w'`).
    pub fn map_words<F, I>(&self, f: F) -> Self
    where
        F: Fn(&Word) -> I,
        I: IntoIterator<Item = (Word, Scalar)>,
    {
        let mut out = Self::zero(self.field, self.cap);
        for (w, c) in &self.terms {
            for (w2, c2) in f(w) {
                out.add_term(w2, &self.field.mul(c, &c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.field, self.cap);
        if c.is_zero() {
            return out;
        }
        for (w, a) in &self.terms {
            out.add_term(*w, &self.field.mul(a, c));
        }
        out
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let mut out = self.with_cap(min_cap(self.cap, other.cap));
        for (w, c) in &other.terms {
            out.add_term(*w, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    /// Concatenation product truncated at `min(cap, self.cap, other.cap)`.
    pub fn checked_mul(&self, other: &Self, cap: Option<u32>) -> Result<Self> {
        self.check_field(other)?;
        let cap = min_cap(min_cap(self.cap, other.cap), cap);
        let mut out = Self::zero(self.field, cap);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if within(cap, u.degree() + v.degree()) {
                    out.add_term(u.concat(v), &self.field.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.field, self.cap);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Most significant word under the order's mode (see
    /// [`MonomialOrder::significance`]).
    pub fn leading_word(&self, order: &MonomialOrder) -> Option<Word> {
        self.terms.keys().copied().max_by(|a, b| order.significance(a, b))
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(Word, Scalar)> {
        self.leading_word(order).map(|w| (w, self.coeff(&w)))
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self, order: &MonomialOrder) -> Result<Self> {
        match self.leading_term(order) {
            None => Ok(self.clone()),
            Some((_, c)) => {
                let inv = self.field.inv(&c).map_err(|_| AlgebraError::NotInvertible(format_scalar(&c)))?;
                Ok(self.scale(&inv))
            }
        }
    }

    pub fn swap_variables(&self) -> Self {
        self.map_words(|w| [(w.swap_letters(), Scalar::one())])
    }

    /// Renders with the default precedence (x > y).
    pub fn render(&self) -> String {
        self.render_with(Variable::X)
    }

    /// Terms sorted by degree ascending, then lex descending under the
    /// precedence; coefficients as integers or `a/b`.
    pub fn render_with(&self, greater: Variable) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let order = MonomialOrder::local(greater);
        let mut ts: Vec<(&Word, &Scalar)> = self.terms.iter().collect();
        ts.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| order.lex(b.0, a.0)));
        let mut out = String::new();
        for (i, (w, c)) in ts.into_iter().enumerate() {
            let neg = matches!(self.field, FieldSpec::Rationals) && c.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if w.is_empty() {
                out.push_str(&format_scalar(&mag));
            } else if mag.is_one() {
                out.push_str(&w.to_string());
            } else {
                out.push_str(&format_scalar(&mag));
                out.push(' ');
                out.push_str(&w.to_string());
            }
        }
        out
    }
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreePoly[{}; cap {:?}]({})", self.field, self.cap, self.render())
    }
}

impl PartialEq for FreePoly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.terms == other.terms
    }
}

impl Eq for FreePoly {}

impl PartialOrd for FreePoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FreePoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().cmp(other.terms.iter())
    }
}

// Operator forms panic on field mismatch; use the `checked_*` methods when
// the fields are not known to agree.
impl Add for &FreePoly {
    type Output = FreePoly;
    fn add(self, rhs: &FreePoly) -> FreePoly {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FreePoly {
    type Output = FreePoly;
    fn sub(self, rhs: &FreePoly) -> FreePoly {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &FreePoly {
    type Output = FreePoly;
    fn mul(self, rhs: &FreePoly) -> FreePoly {
        self.checked_mul(rhs, None).expect("field mismatch")
    }
}

impl Neg for &FreePoly {
    type Output = FreePoly;
    fn neg(self) -> FreePoly {
        FreePoly {
            terms: self.terms.iter().map(|(w, c)| (*w, self.field.neg(c))).collect(),
            field: self.field,
            cap: self.cap,
        }
    }
}

impl Add for FreePoly {
    type Output = FreePoly;
    fn add(self, rhs: FreePoly) -> FreePoly {
        &self + &rhs
    }
}

impl Sub for FreePoly {
    type Output = FreePoly;
    fn sub(self, rhs: FreePoly) -> FreePoly {
        &self - &rhs
    }
}

impl Mul for FreePoly {
    type Output = FreePoly;
    fn mul(self, rhs: FreePoly) -> FreePoly {
        &self * &rhs
    }
}

impl Neg for FreePoly {
    type Output = FreePoly;
    fn neg(self) -> FreePoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn p(terms: &[(&str, i64)]) -> FreePoly {
        FreePoly::from_ints(Q, None, terms)
    }

    #[test]
    fn product_examples() {
        let a = p(&[("x", 1), ("y", 1)]);
        let b = p(&[("x", 1), ("y", -1)]);
        assert_eq!(&a * &b, p(&[("xx", 1), ("xy", -1), ("yx", 1), ("yy", -1)]));

        let f = p(&[("x", 1), ("xx", 1)]);
        let g = p(&[("y", 1), ("yyy", 1)]);
        let fg = &f * &g;
        assert_eq!(fg.low_degree(), Some(2));
        assert_eq!(fg.lowest_part(), p(&[("xy", 1)]));

        let sq = a.checked_mul(&a, Some(2)).unwrap();
        assert_eq!(sq, p(&[("xx", 1), ("xy", 1), ("yx", 1), ("yy", 1)]));
    }

    #[test]
    fn truncation_and_mixed_caps() {
        let a = FreePoly::from_ints(Q, Some(2), &[("x", 1)]);
        let b = FreePoly::from_ints(Q, Some(5), &[("xx", 1), ("xxx", 1)]);
        let s = &a + &b;
        assert_eq!(s.cap(), Some(2));
        assert_eq!(s, FreePoly::from_ints(Q, Some(2), &[("x", 1), ("xx", 1)]));
        assert!((&a * &b).is_zero());
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let a = p(&[("x", 1)]);
        let b = FreePoly::from_ints(FieldSpec::Prime(5), None, &[("x", 1)]);
        assert!(matches!(a.checked_mul(&b, None), Err(AlgebraError::FieldMismatch(..))));
    }

    #[test]
    fn rendering() {
        let f = FreePoly::from_terms(
            Q,
            None,
            [
                (Word::parse("yxy").unwrap(), Scalar::new(1.into(), 3.into())),
                (Word::parse("xx").unwrap(), Scalar::one()),
            ],
        )
        .unwrap();
        assert_eq!(f.render(), "x^2 + 1/3 y x y");
        assert_eq!(p(&[("yy", -1), ("xy", 2), ("1", 3)]).render(), "3 + 2 x y - y^2");
        assert_eq!(p(&[("x", -1)]).render(), "-x");
        assert_eq!(p(&[]).render(), "0");
    }

    #[test]
    fn leading_words() {
        let f = p(&[("xy", 1), ("yx", 1)]);
        assert_eq!(f.leading_word(&MonomialOrder::default()), Word::parse("xy"));
        let g = p(&[("xx", 1), ("yyy", 1)]);
        assert_eq!(g.leading_word(&MonomialOrder::default()), Word::parse("xx"));
        assert_eq!(g.leading_word(&MonomialOrder::global(Variable::X)), Word::parse("yyy"));
    }
}
