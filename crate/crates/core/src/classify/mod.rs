//! Normal forms of potentials and the dimension classification built on them.

mod cleanup;
mod cubic;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{AlgebraError, Result};
use crate::field::{format_scalar, FieldSpec, Scalar};
use crate::poly::FreePoly;
use crate::potential::{cyclic_classes, cyclic_symmetrize, cyclicize, DerivativeMode, Potential};
use crate::quotient::{hilbert, Growth};
use crate::rewrite::complete;
use crate::subst::{substitute, LinearPart, Substitution, SubstitutionRecord};
use crate::word::{MonomialOrder, Variable, Word};

pub use cubic::{cubic_class, discriminant, CubicClass, CubicLabel};

/// Cyclically invariant representative whose simple derivatives give the
/// relations.
pub fn simple_form(f: &Potential) -> Result<FreePoly> {
    match f.mode {
        DerivativeMode::Simple => Ok(f.body.clone()),
        DerivativeMode::Ginzburg => Ok(f.convert(DerivativeMode::Simple)?.body),
    }
}

fn ginzburg_form(f: &Potential) -> Result<FreePoly> {
    cyclic_symmetrize(&f.convert(DerivativeMode::Ginzburg)?.body)
}

fn from_ginzburg(g: &FreePoly) -> Result<FreePoly> {
    Ok(Potential { body: g.clone(), mode: DerivativeMode::Ginzburg }.convert(DerivativeMode::Simple)?.body)
}

fn cubic_matches(f: &Potential, label: CubicLabel) -> Result<bool> {
    let f3 = simple_form(f)?.homogeneous_part(3);
    let field = f3.field();
    let target = match label {
        CubicLabel::X2Y => cyclicize(&FreePoly::from_ints(field, None, &[("xxy", 1)])),
        CubicLabel::X3Y3 => FreePoly::from_ints(field, None, &[("xxx", 1), ("yyy", 1)]),
        CubicLabel::X3 => FreePoly::from_ints(field, None, &[("xxx", 1)]),
        CubicLabel::Zero => FreePoly::zero(field, None),
    };
    Ok(cyclic_classes(&f3) == cyclic_classes(&target))
}

/// `cyc(x²y) + y⁴p(y)` with the data of its tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalX2Y {
    pub potential: Potential,
    /// Coefficients of `p`, lowest degree first.
    pub p: Vec<Scalar>,
    /// Half the lowest even exponent of `p`; `None` when `p` has no even part.
    pub n: Option<u32>,
    /// Lowest exponent of `p`.
    pub k: Option<u32>,
    pub trail: Vec<Substitution>,
}

pub fn cleanup_x2y(f: &Potential, cap: u32) -> Result<CanonicalX2Y> {
    if !cubic_matches(f, CubicLabel::X2Y)? {
        return Err(AlgebraError::WrongClass { expected: "X2Y".into(), found: format!("{:?}", cubic_class(f)?.label) });
    }
    let g = ginzburg_form(f)?.truncate(cap);
    let (g, trail) = cleanup::cleanup(g, cap, &|d| vec![Word::power(Variable::Y, d)])?;
    let body = from_ginzburg(&g)?;
    let p: Vec<Scalar> = (4..=cap).map(|d| body.coeff(&Word::power(Variable::Y, d))).collect();
    let (n, k) = tail_parameters(&p);
    Ok(CanonicalX2Y { potential: Potential::simple(body), p, n, k, trail })
}

/// `(n, k)` under the lowest-degree reading of the tail polynomial.
pub fn tail_parameters(p: &[Scalar]) -> (Option<u32>, Option<u32>) {
    let k = p.iter().position(|c| !c.is_zero()).map(|i| i as u32);
    let n = p.iter().enumerate().find(|(i, c)| i % 2 == 0 && !c.is_zero()).map(|(i, _)| i as u32 / 2);
    (n, k)
}

pub fn cleanup_x3y3(f: &Potential, cap: u32) -> Result<(Potential, Vec<Substitution>)> {
    if !cubic_matches(f, CubicLabel::X3Y3)? {
        return Err(AlgebraError::WrongClass {
            expected: "X3Y3".into(),
            found: format!("{:?}", cubic_class(f)?.label),
        });
    }
    let g = ginzburg_form(f)?.truncate(cap);
    let alternating = |d: u32| {
        if d.is_multiple_of(2) {
            vec![Word::parse(&"xy".repeat(d as usize / 2)).unwrap()]
        } else {
            vec![]
        }
    };
    let (g, trail) = cleanup::cleanup(g, cap, &alternating)?;
    Ok((Potential::simple(from_ginzburg(&g)?), trail))
}

/// Dimension predicted by the normal-word count for tail parameters `(n, k)`.
pub fn dim_formula(n: u32, k: u32) -> u64 {
    if k == 2 * n {
        3 * (2 * n as u64 + 3)
    } else {
        4 * n as u64 + k as u64 + 9
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CubicReport {
    pub label: CubicLabel,
    pub transform: Option<SubstitutionRecord>,
    pub scale: String,
    pub extension_required: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailReport {
    pub p: Vec<String>,
    pub n: Option<u32>,
    pub k: Option<u32>,
    pub formula: Option<u64>,
    pub measured: Option<u64>,
}

/// Diagonal rescaling `x ↦ a·x`, `y ↦ b·y` followed by multiplying the
/// potential by `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Scaling {
    pub x: String,
    pub y: String,
    pub potential: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub input: String,
    pub cap: u32,
    pub cubic: CubicReport,
    pub canonical: String,
    pub trail: Vec<SubstitutionRecord>,
    pub hilbert: Vec<u64>,
    pub input_hilbert: Vec<u64>,
    pub finite: bool,
    pub dimension: Option<u64>,
    pub growth: Option<Growth>,
    pub representative: Option<String>,
    pub scaling: Option<Scaling>,
    pub tail: Option<TailReport>,
    pub lower_bound: Option<u64>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub canonical_potential: Potential,
    /// Applied in order; their composite carries the input ideal onto the
    /// canonical one.
    #[serde(skip)]
    pub substitutions: Vec<Substitution>,
}

fn layers(f: &Potential, cap: u32) -> Result<crate::quotient::QuotientAlgebra> {
    let (a, b) = f.relations();
    hilbert(&complete(&[a, b], MonomialOrder::default(), cap)?)
}

fn diagonal(field: FieldSpec, cap: u32, a: &Scalar, b: &Scalar) -> Substitution {
    let m: LinearPart = [[a.clone(), field.zero()], [field.zero(), b.clone()]];
    Substitution::linear(field, cap, &m)
}

fn rescale(f: &FreePoly, field: FieldSpec, cap: u32, a: &Scalar, b: &Scalar, s: &Scalar) -> Result<FreePoly> {
    Ok(substitute(f, &diagonal(field, cap, a, b), cap)?.scale(s))
}

/// Cubic normal form, cleanup, completion and dimension for one potential.
pub fn classify_potential(f: &Potential, cap: u32) -> Result<ClassificationReport> {
    let field = f.body.field();
    let input = simple_form(f)?.truncate(cap);
    let input_q = layers(&Potential::simple(input.clone()), cap)?;
    let cubic = cubic_class(f)?;
    let mut notes = Vec::new();
    let mut trail = Vec::new();

    // linear normalization of the cubic part
    let mut body = input.clone();
    if let (Some(t), None) = (&cubic.transform, &cubic.extension_required) {
        let t = Substitution::linear(field, cap, &t.linear_part());
        body = cyclic_symmetrize(&substitute(&body, &t, cap)?)?.scale(&cubic.scale);
        trail.push(t);
    }
    if let Some(ext) = &cubic.extension_required {
        notes.push(format!("cubic normal form needs a field extension ({ext}); cleanup skipped"));
    }
    let normalized = cubic.extension_required.is_none();

    let mut tail = None;
    let mut scaling = None;
    let mut representative = None;
    match cubic.label {
        CubicLabel::X2Y if normalized => {
            let c = cleanup_x2y(&Potential::simple(body.clone()), cap)?;
            trail.extend(c.trail.iter().cloned());
            body = c.potential.body.clone();
            tail = Some(c);
        }
        CubicLabel::X3Y3 if normalized => {
            let (p, t) = cleanup_x3y3(&Potential::simple(body.clone()), cap)?;
            trail.extend(t);
            body = p.body;
        }
        _ => {}
    }

    let mut q = layers(&Potential::simple(body.clone()), cap)?;
    // terms of degree > e (e the first empty layer) give relations inside
    // m^e ⊆ I; dropping them keeps the ideal when the dimension is unchanged
    if let Some(e) = q.first_empty_degree {
        let short = body.truncate(e);
        if short != body {
            let q2 = layers(&Potential::simple(short.clone()), cap)?;
            if q2.dimension() == q.dimension() {
                notes.push(format!("dropped potential terms of degree > {e} (relations inside the ideal)"));
                body = short;
                q = q2;
            }
        }
    }
    if q.hilbert != input_q.hilbert {
        notes.push("hilbert layers changed under normalization".into());
    }
    let dimension = q.dimension();

    // canonical representatives in dimensions 8 and 9
    match (cubic.label, dimension, normalized) {
        (CubicLabel::X3Y3, Some(8), true) => {
            let alpha = field.div_int(&body.coeff(&Word::parse("xyxy").unwrap()), 2)?;
            if !alpha.is_zero() {
                let lambda = field.inv(&alpha)?;
                let s = field.inv(&field.mul(&lambda, &field.mul(&lambda, &lambda)))?;
                body = cyclic_symmetrize(&rescale(&body, field, cap, &lambda, &lambda, &s)?)?;
                trail.push(diagonal(field, cap, &lambda, &lambda));
                scaling = Some(Scaling {
                    x: format_scalar(&lambda),
                    y: format_scalar(&lambda),
                    potential: format_scalar(&s),
                });
                representative = Some("x^3 + y^3 + cyc(xyxy)".to_string());
            }
        }
        (CubicLabel::X2Y, Some(9), true) => {
            let y = |d| Word::power(Variable::Y, d);
            let a4 = body.coeff(&y(4));
            let a5 = body.coeff(&y(5));
            if !a4.is_zero() {
                // x ↦ a4²t³·x, y ↦ a4·t²·y, F ↦ F / (β⁴ a4) keeps cyc(x²y) and sends
                // the y⁴, y⁵ coefficients to 1 and a5·t²
                let t = if a5.is_zero() {
                    Some(field.one())
                } else {
                    field.root(&a5, 2).map(|r| field.inv(&r)).transpose()?
                };
                let t = t.unwrap_or_else(|| field.one());
                let t2 = field.mul(&t, &t);
                let beta = field.mul(&a4, &t2);
                let alpha = field.mul(&field.mul(&a4, &a4), &field.mul(&t2, &t));
                let b4 = field.mul(&field.mul(&beta, &beta), &field.mul(&beta, &beta));
                let s = field.inv(&field.mul(&b4, &a4))?;
                body = cyclic_symmetrize(&rescale(&body, field, cap, &alpha, &beta, &s)?)?;
                trail.push(diagonal(field, cap, &alpha, &beta));
                scaling =
                    Some(Scaling { x: format_scalar(&alpha), y: format_scalar(&beta), potential: format_scalar(&s) });
                let c = body.coeff(&y(5));
                representative = Some(if c.is_zero() {
                    "cyc(x^2y) + y^4".to_string()
                } else if c == field.one() {
                    "cyc(x^2y) + y^4 + y^5".to_string()
                } else {
                    notes.push(format!(
                        "y^5 coefficient {} is not a square; scaling to 1 needs its square root",
                        format_scalar(&c)
                    ));
                    let tail = FreePoly::from_terms(field, None, [(y(4), field.one()), (y(5), c.clone())])?;
                    format!("cyc(x^2y) + {}", tail.render())
                });
            }
        }
        _ => {}
    }

    let tail_report = tail.as_ref().map(|_| {
        let p: Vec<Scalar> = (4..=cap).map(|d| body.coeff(&Word::power(Variable::Y, d))).collect();
        let (n, k) = tail_parameters(&p);
        TailReport {
            p: p.iter().map(format_scalar).collect(),
            n,
            k,
            formula: n.zip(k).map(|(n, k)| dim_formula(n, k)),
            measured: dimension,
        }
    });
    let lower_bound =
        (cubic.label == CubicLabel::X3 && q.hilbert.len() >= 4 && q.hilbert[..3] == [1, 2, 3] && q.hilbert[3] >= 4)
            .then_some(10);

    Ok(ClassificationReport {
        input: input.render(),
        cap,
        cubic: CubicReport {
            label: cubic.label,
            transform: cubic.transform.as_ref().map(SubstitutionRecord::from),
            scale: format_scalar(&cubic.scale),
            extension_required: cubic.extension_required.clone(),
        },
        canonical: body.render(),
        trail: trail.iter().map(SubstitutionRecord::from).collect(),
        substitutions: trail.clone(),
        hilbert: q.hilbert.clone(),
        input_hilbert: input_q.hilbert.clone(),
        finite: q.finite,
        dimension,
        growth: q.growth,
        representative,
        scaling,
        tail: tail_report,
        lower_bound,
        notes,
        canonical_potential: Potential::simple(body),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn p(terms: &[(&str, i64)]) -> FreePoly {
        FreePoly::from_ints(Q, None, terms)
    }

    fn cyc(s: &str) -> FreePoly {
        cyclicize(&p(&[(s, 1)]))
    }

    #[test]
    fn formula_values() {
        assert_eq!(dim_formula(0, 0), 9);
        assert_eq!(dim_formula(1, 1), 14);
        assert_eq!(dim_formula(1, 2), 15);
    }

    #[test]
    fn x2y_fixed_point() {
        let f = Potential::simple(&cyc("xxy") + &p(&[("yyyy", 1)]));
        let c = cleanup_x2y(&f, 8).unwrap();
        assert!(c.trail.is_empty());
        assert_eq!((c.n, c.k), (Some(0), Some(0)));
        assert_eq!(c.p[0], Q.one());
    }

    #[test]
    fn x2y_removes_x4() {
        let f = Potential::simple(&cyc("xxy") + &p(&[("xxxx", 1)]));
        let c = cleanup_x2y(&f, 7).unwrap();
        assert!(!c.trail.is_empty());
        let body = &c.potential.body;
        for (w, _) in body.terms() {
            assert!(w.degree() == 3 || w.count(Variable::X) == 0, "{w:?} left in {body}");
        }
    }

    #[test]
    fn x3y3_fixed_point_and_y4() {
        let f = Potential::simple(&p(&[("xxx", 1), ("yyy", 1)]) + &cyc("xyxy"));
        let (g, trail) = cleanup_x3y3(&f, 6).unwrap();
        assert!(trail.is_empty());
        assert_eq!(g.body, f.body.with_cap(Some(6)));

        let f = Potential::simple(&p(&[("xxx", 1), ("yyy", 1)]) + &cyc("yyyy"));
        let (g, _) = cleanup_x3y3(&f, 6).unwrap();
        assert!(g.body.homogeneous_part(4).is_zero());
    }

    #[test]
    fn wrong_class_rejected() {
        let f = Potential::simple(p(&[("xxx", 1), ("yyy", 1)]));
        assert!(matches!(cleanup_x2y(&f, 6), Err(AlgebraError::WrongClass { .. })));
    }
}
