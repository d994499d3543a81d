//! Linear normal forms of the cubic part via the binary cubic of its
//! abelianization.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg;
use crate::poly::FreePoly;
use crate::potential::Potential;
use crate::subst::{abelianize_cubic, substitute, LinearPart, Substitution};

use super::simple_form;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CubicLabel {
    Zero,
    X3,
    X2Y,
    X3Y3,
}

impl CubicLabel {
    /// Abelianized coefficients `(x³, x²y, xy², y³)` of the normal form, for
    /// the cyclically invariant (simple-derivative) representative.
    pub fn target(self, field: FieldSpec) -> [Scalar; 4] {
        let z = field.zero();
        let o = field.one();
        match self {
            CubicLabel::Zero => [z.clone(), z.clone(), z.clone(), z],
            CubicLabel::X3 => [o, z.clone(), z.clone(), z],
            CubicLabel::X2Y => [z.clone(), field.from_int(3), z.clone(), z],
            CubicLabel::X3Y3 => [o.clone(), z.clone(), z, o],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicClass {
    pub label: CubicLabel,
    /// Linear change of variables; together with `scale` it carries the
    /// cubic part onto the normal form.
    pub transform: Option<Substitution>,
    /// The transformed potential is multiplied by this constant (same ideal).
    pub scale: Scalar,
    pub extension_required: Option<String>,
}

type Form = [Scalar; 2];

fn hessian(f: &[Scalar; 4], field: FieldSpec) -> [Scalar; 3] {
    let [a, b, c, d] = f;
    let m = |u: &Scalar, v: &Scalar| field.mul(u, v);
    let k = |n: i64, u: Scalar| field.mul(&field.from_int(n), &u);
    [field.sub(&m(b, b), &k(3, m(a, c))), field.sub(&m(b, c), &k(9, m(a, d))), field.sub(&m(c, c), &k(3, m(b, d)))]
}

/// `b²c² − 4ac³ − 4b³d − 27a²d² + 18abcd`.
pub fn discriminant(f: &[Scalar; 4], field: FieldSpec) -> Scalar {
    let [a, b, c, d] = f;
    let p = |xs: &[&Scalar]| xs.iter().fold(field.one(), |acc, x| field.mul(&acc, x));
    let terms = [
        (1, p(&[b, b, c, c])),
        (-4, p(&[a, c, c, c])),
        (-4, p(&[b, b, b, d])),
        (-27, p(&[a, a, d, d])),
        (18, p(&[a, b, c, d])),
    ];
    terms.iter().fold(field.zero(), |acc, (k, t)| field.add(&acc, &field.mul(&field.from_int(*k), t)))
}

/// The substitution sending `l1 ↦ x`, `l2 ↦ y`.
fn from_forms(l1: &Form, l2: &Form, field: FieldSpec, cap: u32) -> Result<Substitution> {
    let det = field.sub(&field.mul(&l1[0], &l2[1]), &field.mul(&l1[1], &l2[0]));
    let dinv = field.inv(&det)?;
    // rows of L are the forms; the transform matrix is L⁻¹
    let m: LinearPart = [
        [field.mul(&l2[1], &dinv), field.neg(&field.mul(&l1[1], &dinv))],
        [field.neg(&field.mul(&l2[0], &dinv)), field.mul(&l1[0], &dinv)],
    ];
    Ok(Substitution::linear(field, cap, &m))
}

fn complement(l: &Form, field: FieldSpec) -> Form {
    if l[0].is_zero() {
        [field.one(), field.zero()]
    } else {
        [field.zero(), field.one()]
    }
}

fn abelian_after(f3: &FreePoly, t: &Substitution) -> Result<[Scalar; 4]> {
    abelianize_cubic(&substitute(f3, t, 3)?.homogeneous_part(3))
}

fn cube_form(l: &Form, field: FieldSpec) -> [Scalar; 4] {
    let (p, q) = (&l[0], &l[1]);
    let m = |u: &Scalar, v: &Scalar| field.mul(u, v);
    [m(&m(p, p), p), m(&field.from_int(3), &m(&m(p, p), q)), m(&field.from_int(3), &m(&m(p, q), q)), m(&m(q, q), q)]
}

/// Classifies the cubic part of `f` by root multiplicities of its binary cubic.
pub fn cubic_class(f: &Potential) -> Result<CubicClass> {
    let simple = simple_form(f)?;
    let field = simple.field();
    let f3 = simple.homogeneous_part(3);
    let ab = abelianize_cubic(&f3)?;
    let one = field.one();
    if ab.iter().all(Zero::is_zero) {
        return Ok(CubicClass { label: CubicLabel::Zero, transform: None, scale: one, extension_required: None });
    }
    let h = hessian(&ab, field);
    let disc = discriminant(&ab, field);
    let label = if h.iter().all(Zero::is_zero) {
        CubicLabel::X3
    } else if disc.is_zero() {
        CubicLabel::X2Y
    } else {
        CubicLabel::X3Y3
    };
    let cap = 3;
    let (transform, extension_required) = match label {
        CubicLabel::X3 => {
            // f = λ·L³ with L ∝ 3a·x + b·y, or L = y when a = 0
            let l: Form = if ab[0].is_zero() {
                [field.zero(), one.clone()]
            } else {
                [one.clone(), field.div(&ab[1], &field.mul(&field.from_int(3), &ab[0]))?]
            };
            (Some(from_forms(&l, &complement(&l, field), field, cap)?), None)
        }
        CubicLabel::X2Y => {
            // the Hessian is a multiple of the square of the double factor
            let l: Form = if h[0].is_zero() {
                [field.zero(), one.clone()]
            } else {
                [one.clone(), field.div(&h[1], &field.mul(&field.from_int(2), &h[0]))?]
            };
            let t0 = from_forms(&l, &complement(&l, field), field, cap)?;
            // now f = x²(γx + δy); send γx + δy to y
            let g = abelian_after(&f3, &t0)?;
            let (gamma, delta) = (g[0].clone(), g[1].clone());
            let t1 = from_forms(&[one.clone(), field.zero()], &[field.div(&gamma, &delta)?, one.clone()], field, cap)?;
            (Some(t0.then(&t1)?), None)
        }
        CubicLabel::X3Y3 => {
            let [a2, b2, c2] = h.clone();
            let hd = field.sub(&field.mul(&b2, &b2), &field.mul(&field.from_int(4), &field.mul(&a2, &c2)));
            match field.root(&hd, 2) {
                None => (None, Some(format!("square root of {}", crate::field::format_scalar(&hd)))),
                Some(s) => {
                    let (l1, l2): (Form, Form) = if a2.is_zero() {
                        // H = y·(Bx + Cy)
                        ([one.clone(), field.div(&c2, &b2)?], [field.zero(), one.clone()])
                    } else {
                        let two_a = field.mul(&field.from_int(2), &a2);
                        (
                            [one.clone(), field.div(&field.add(&b2, &s), &two_a)?],
                            [one.clone(), field.div(&field.sub(&b2, &s), &two_a)?],
                        )
                    };
                    // f = α·l1³ + β·l2³
                    let (c1, c2) = (cube_form(&l1, field), cube_form(&l2, field));
                    let rows: Vec<Vec<Scalar>> = (0..4).map(|i| vec![c1[i].clone(), c2[i].clone()]).collect();
                    let sol = linalg::solve(&rows, &ab, 2, field)
                        .ok_or_else(|| AlgebraError::Invalid("cubic is not a sum of two cubes".into()))?;
                    let (alpha, beta) = (&sol[0], &sol[1]);
                    let t0 = from_forms(&l1, &l2, field, cap)?;
                    match field.root(&field.div(alpha, beta)?, 3) {
                        None => (
                            Some(t0),
                            Some(format!("cube root of {}", crate::field::format_scalar(&field.div(alpha, beta)?))),
                        ),
                        Some(nu) => {
                            let d: LinearPart = [[one.clone(), field.zero()], [field.zero(), nu]];
                            (Some(t0.then(&Substitution::linear(field, cap, &d))?), None)
                        }
                    }
                }
            }
        }
        CubicLabel::Zero => unreachable!(),
    };
    let scale = match (&transform, &extension_required) {
        (Some(t), None) => {
            let got = abelian_after(&f3, t)?;
            let target = label.target(field);
            let i = target.iter().position(|c| !c.is_zero()).unwrap();
            let s = field.div(&target[i], &got[i])?;
            let scaled: Vec<Scalar> = got.iter().map(|c| field.mul(c, &s)).collect();
            if scaled != target {
                return Err(AlgebraError::Invalid(format!("cubic normalization failed for {label:?}")));
            }
            s
        }
        _ => one,
    };
    Ok(CubicClass { label, transform, scale, extension_required })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::cyclicize;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn pot(terms: &[(&str, i64)]) -> Potential {
        Potential::simple(cyclicize(&FreePoly::from_ints(Q, None, terms)))
    }

    #[test]
    fn normal_forms_are_fixed() {
        let c = cubic_class(&pot(&[("xxy", 1)])).unwrap();
        assert_eq!(c.label, CubicLabel::X2Y);
        assert_eq!(c.transform.unwrap().linear_part(), Substitution::identity(Q, 3).linear_part());
        assert_eq!(c.scale, Q.one());
        // x³ + y³ as a cyclic potential: cyc(x³)/3 + cyc(y³)/3
        let f = Potential::simple(FreePoly::from_ints(Q, None, &[("xxx", 1), ("yyy", 1)]));
        let c = cubic_class(&f).unwrap();
        assert_eq!(c.label, CubicLabel::X3Y3);
        assert!(c.extension_required.is_none());
        assert_eq!(cubic_class(&pot(&[("xxyy", 1)])).unwrap().label, CubicLabel::Zero);
    }

    #[test]
    fn triple_root() {
        // (x+y)³ after abelianization
        let body = FreePoly::from_ints(Q, None, &[("xxx", 1), ("yyy", 1)])
            + cyclicize(&FreePoly::from_ints(Q, None, &[("xxy", 1), ("xyy", 1)]));
        let c = cubic_class(&Potential::simple(body)).unwrap();
        assert_eq!(c.label, CubicLabel::X3);
        assert!(c.transform.is_some());
    }

    #[test]
    fn mixed_cubics() {
        // x²y + xy² ~ xy(x+y): three distinct rational roots
        let body = cyclicize(&FreePoly::from_ints(Q, None, &[("xxy", 1), ("xyy", 1)]));
        let c = cubic_class(&Potential::simple(body)).unwrap();
        assert_eq!(c.label, CubicLabel::X3Y3);
        // x³ − 2y³ needs the cube root of 2 to reach x³ + y³
        let body = FreePoly::from_ints(Q, None, &[("xxx", 1), ("yyy", -2)]);
        let c = cubic_class(&Potential::simple(body)).unwrap();
        assert_eq!(c.label, CubicLabel::X3Y3);
        assert!(c.extension_required.unwrap().contains("cube root"));
        // x²y + y³ = y(x² + y²): irrational factors
        let body =
            &cyclicize(&FreePoly::from_ints(Q, None, &[("xxy", 1)])) + &FreePoly::from_ints(Q, None, &[("yyy", 3)]);
        let c = cubic_class(&Potential::simple(body)).unwrap();
        assert_eq!(c.label, CubicLabel::X3Y3);
        assert!(c.extension_required.is_some());
    }
}
