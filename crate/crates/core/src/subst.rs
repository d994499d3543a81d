//! Formal changes of variables `x ↦ X(x,y)`, `y ↦ Y(x,y)` with images
//! vanishing at the origin.

use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::{min_cap, FreePoly};
use crate::word::{Variable, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    pub image_x: FreePoly,
    pub image_y: FreePoly,
    pub cap: u32,
}

/// `rows[v][u]` is the coefficient of letter `u` in the image of `v`.
pub type LinearPart = [[Scalar; 2]; 2];

impl Substitution {
    pub fn new(image_x: FreePoly, image_y: FreePoly, cap: u32) -> Result<Self> {
        if image_x.field() != image_y.field() {
            return Err(AlgebraError::FieldMismatch(image_x.field().to_string(), image_y.field().to_string()));
        }
        if !image_x.constant_term().is_zero() || !image_y.constant_term().is_zero() {
            return Err(AlgebraError::NonzeroConstantTerm);
        }
        Ok(Substitution { image_x: image_x.truncate(cap), image_y: image_y.truncate(cap), cap })
    }

    pub fn identity(field: FieldSpec, cap: u32) -> Self {
        Substitution {
            image_x: FreePoly::var(field, Some(cap), Variable::X),
            image_y: FreePoly::var(field, Some(cap), Variable::Y),
            cap,
        }
    }

    /// `v ↦ v + c·w`, the other variable fixed.
    pub fn elementary(field: FieldSpec, cap: u32, v: Variable, w: Word, c: Scalar) -> Self {
        let mut s = Self::identity(field, cap);
        let target = match v {
            Variable::X => &mut s.image_x,
            Variable::Y => &mut s.image_y,
        };
        target.add_term(w, &c);
        s
    }

    /// Linear map from a matrix of rows (`x ↦ m[0][0] x + m[0][1] y`, ...).
    pub fn linear(field: FieldSpec, cap: u32, m: &LinearPart) -> Self {
        let row = |r: &[Scalar; 2]| {
            let mut p = FreePoly::zero(field, Some(cap));
            p.add_term(Word::letter(Variable::X), &field.element(&r[0]).unwrap());
            p.add_term(Word::letter(Variable::Y), &field.element(&r[1]).unwrap());
            p
        };
        Substitution { image_x: row(&m[0]), image_y: row(&m[1]), cap }
    }

    pub fn field(&self) -> FieldSpec {
        self.image_x.field()
    }

    pub fn image(&self, v: Variable) -> &FreePoly {
        match v {
            Variable::X => &self.image_x,
            Variable::Y => &self.image_y,
        }
    }

    pub fn linear_part(&self) -> LinearPart {
        let row = |p: &FreePoly| [p.coeff(&Word::letter(Variable::X)), p.coeff(&Word::letter(Variable::Y))];
        [row(&self.image_x), row(&self.image_y)]
    }

    fn linear_det(&self) -> Scalar {
        let m = self.linear_part();
        let f = self.field();
        f.sub(&f.mul(&m[0][0], &m[1][1]), &f.mul(&m[0][1], &m[1][0]))
    }

    pub fn is_invertible(&self) -> bool {
        !self.linear_det().is_zero()
    }

    /// Applies `self` first, then `next`: `x ↦ next(self(x))`.
    pub fn then(&self, next: &Substitution) -> Result<Substitution> {
        let cap = self.cap.min(next.cap);
        Substitution::new(substitute(&self.image_x, next, cap)?, substitute(&self.image_y, next, cap)?, cap)
    }

    pub fn render(&self) -> (String, String) {
        (self.image_x.render(), self.image_y.render())
    }
}

/// Replaces each letter by its image; exact through `cap`.
pub fn substitute(f: &FreePoly, s: &Substitution, cap: u32) -> Result<FreePoly> {
    if f.field() != s.field() {
        return Err(AlgebraError::FieldMismatch(f.field().to_string(), s.field().to_string()));
    }
    if !s.image_x.constant_term().is_zero() || !s.image_y.constant_term().is_zero() {
        return Err(AlgebraError::NonzeroConstantTerm);
    }
    let cap = min_cap(f.cap(), Some(cap.min(s.cap))).unwrap();
    let field = f.field();
    let mut memo: HashMap<Word, FreePoly> = HashMap::new();
    let mut out = FreePoly::zero(field, f.cap().map(|c| c.min(cap)).or(Some(cap)));
    for (w, c) in f.terms() {
        let img = word_image(w, s, cap, &mut memo);
        for (u, a) in img.terms() {
            out.add_term(*u, &field.mul(a, c));
        }
    }
    Ok(out)
}

fn word_image(w: &Word, s: &Substitution, cap: u32, memo: &mut HashMap<Word, FreePoly>) -> FreePoly {
    if w.is_empty() {
        return FreePoly::one(s.field(), Some(cap));
    }
    if let Some(p) = memo.get(w) {
        return p.clone();
    }
    let head = word_image(&w.prefix(w.degree() - 1), s, cap, memo);
    let last = s.image(w.at(w.degree() - 1)).truncate(cap);
    let img = head.checked_mul(&last, Some(cap)).expect("same field");
    memo.insert(*w, img.clone());
    img
}

/// Inverse through `cap` by degree-by-degree fixed-point iteration: solves
/// `L·t = v − H(t)` where `L` is the linear part and `H` the nonlinear part.
pub fn invert_substitution(s: &Substitution, cap: u32) -> Result<Substitution> {
    let field = s.field();
    let cap = cap.min(s.cap);
    let m = s.linear_part();
    let det = field.sub(&field.mul(&m[0][0], &m[1][1]), &field.mul(&m[0][1], &m[1][0]));
    if det.is_zero() {
        return Err(AlgebraError::SingularLinearPart);
    }
    let dinv = field.inv(&det)?;
    // inverse matrix of the linear part, in the same row convention
    let inv: LinearPart = [
        [field.mul(&m[1][1], &dinv), field.neg(&field.mul(&m[0][1], &dinv))],
        [field.neg(&field.mul(&m[1][0], &dinv)), field.mul(&m[0][0], &dinv)],
    ];
    let nonlinear = |p: &FreePoly| p.filter(|w| w.degree() >= 2);
    let hx = nonlinear(&s.image_x);
    let hy = nonlinear(&s.image_y);
    let x = FreePoly::var(field, Some(cap), Variable::X);
    let y = FreePoly::var(field, Some(cap), Variable::Y);

    // s(v) = Σ_u m[v][u]·u + H_v, so s(v)∘t = v means m·t = v − H(t)
    let mut t = Substitution::linear(field, cap, &inv);
    for _ in 0..cap {
        let rx = &x - &substitute(&hx, &t, cap)?;
        let ry = &y - &substitute(&hy, &t, cap)?;
        let tx = &rx.scale(&inv[0][0]) + &ry.scale(&inv[0][1]);
        let ty = &rx.scale(&inv[1][0]) + &ry.scale(&inv[1][1]);
        let next = Substitution::new(tx, ty, cap)?;
        if next == t {
            break;
        }
        t = next;
    }
    Ok(t)
}

/// Coefficients `(x³, x²y, xy², y³)` of a homogeneous cubic after letting
/// the variables commute.
pub fn abelianize_cubic(f3: &FreePoly) -> Result<[Scalar; 4]> {
    if !f3.is_homogeneous(3) {
        return Err(AlgebraError::NonHomogeneous { expected: 3 });
    }
    let field = f3.field();
    let mut out: [Scalar; 4] = Default::default();
    for (w, c) in f3.terms() {
        let k = w.count(Variable::Y) as usize;
        out[k] = field.add(&out[k], c);
    }
    Ok(out)
}

/// Serialized form used in reports: images as polynomial strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionRecord {
    pub x: String,
    pub y: String,
}

impl From<&Substitution> for SubstitutionRecord {
    fn from(s: &Substitution) -> Self {
        let (x, y) = s.render();
        SubstitutionRecord { x, y }
    }
}
