//! Reproduction runs: each checks one family of results end to end and
//! returns a JSON-serializable pass/fail report.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::brace::{self, examples, Filtration, FiniteBrace, FiniteTruss};
use crate::classify::{classify_potential, dim_formula, CubicLabel};
use crate::error::{AlgebraError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::isotest::{distinguish, lifted_iso_search, FiniteAlgebra, IsoVerdict};
use crate::parse::parse_poly;
use crate::poly::FreePoly;
use crate::potential::{cyclicize, Potential};
use crate::quotient::{hilbert, QuotientAlgebra};
use crate::rewrite::complete;
use crate::subst::Substitution;
use crate::word::{MonomialOrder, Word};

pub const THEOREMS: [&str; 5] = ["dim8", "dim9", "cor1-grid", "x3-bound", "prelie"];
pub const DEFAULT_SEED: u64 = 20_24;
pub const DIM8: &str = "x^3 + y^3 + cyc(x y x y)";
pub const DIM9_A: &str = "cyc(x^2 y) + y^4";
pub const DIM9_B: &str = "cyc(x^2 y) + y^4 + y^5";

const Q: FieldSpec = FieldSpec::Rationals;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub theorem: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(theorem: &str, checks: Vec<Check>) -> Report {
        Report { theorem: theorem.into(), pass: checks.iter().all(|c| c.pass), checks }
    }
}

fn check(name: impl Into<String>, pass: bool, detail: Value) -> Check {
    Check { name: name.into(), pass, detail }
}

pub fn potential(text: &str) -> Result<Potential> {
    Ok(Potential::simple(parse_poly(text, Q)?))
}

pub fn quotient(f: &Potential, cap: u32) -> Result<QuotientAlgebra> {
    let (a, b) = f.relations();
    hilbert(&complete(&[a, b], MonomialOrder::default(), cap)?)
}

/// Completes at `start`, `start + 4`, … until finiteness is certified or
/// `max` is passed; returns the last attempt.
pub fn quotient_auto(f: &Potential, start: u32, max: u32) -> Result<QuotientAlgebra> {
    let mut cap = start;
    loop {
        let q = quotient(f, cap)?;
        if q.finite || cap + 4 > max {
            return Ok(q);
        }
        cap += 4;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DimReport {
    pub cap: u32,
    pub hilbert: Vec<u64>,
    pub total: u64,
    pub finite: bool,
    /// Least `e` with `Aₑ = 0`, i.e. `mᵉ ⊆ I`.
    pub nilpotency_index: Option<u32>,
    pub growth: Option<crate::quotient::Growth>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
}

pub fn dim_report(q: &QuotientAlgebra, oracle: Option<&Potential>) -> Result<DimReport> {
    let cap = q.system.cap();
    let (oracle, oracle_agrees) = match oracle {
        Some(f) => {
            let (a, b) = f.relations();
            let o = crate::rewrite::oracle_dimension(&[a, b], cap)?;
            let ours: Vec<u64> = (0..=cap as usize).map(|d| q.hilbert.get(d).copied().unwrap_or(0)).collect();
            let agrees = o == ours;
            (Some(o), Some(agrees))
        }
        None => (None, None),
    };
    Ok(DimReport {
        cap,
        hilbert: q.hilbert.clone(),
        total: q.hilbert.iter().sum(),
        finite: q.finite,
        nilpotency_index: q.first_empty_degree,
        growth: q.growth,
        oracle,
        oracle_agrees,
    })
}

/// Seeded generators for randomized checks.
pub mod sample {
    use super::*;

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn small(rng: &mut ChaCha8Rng, nonzero: bool) -> Scalar {
        loop {
            let v: i64 = rng.gen_range(-3..=3);
            if !nonzero || v != 0 {
                return Scalar::from_integer(v.into());
            }
        }
    }

    fn word(rng: &mut ChaCha8Rng, d: u32) -> Word {
        let bits = if d == 0 { 0 } else { rng.gen_range(0..1u64 << d) };
        Word::from_bits(bits, d)
    }

    /// `terms` random words of degree `lo..=hi` with coefficients in `−3..=3`.
    pub fn poly(rng: &mut ChaCha8Rng, lo: u32, hi: u32, terms: usize) -> FreePoly {
        let mut f = FreePoly::zero(Q, None);
        for _ in 0..terms {
            let d = rng.gen_range(lo..=hi);
            let w = word(rng, d);
            f.add_term(w, &small(rng, true));
        }
        f
    }

    /// Invertible linear part plus random terms of degree 2 and 3.
    pub fn substitution(rng: &mut ChaCha8Rng, cap: u32) -> Substitution {
        loop {
            let m = [[small(rng, false), small(rng, false)], [small(rng, false), small(rng, false)]];
            if (&m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]).is_zero() {
                continue;
            }
            let mut s = Substitution::linear(Q, cap, &m);
            s.image_x = &s.image_x + &poly(rng, 2, 3, 2).with_cap(Some(cap));
            s.image_y = &s.image_y + &poly(rng, 2, 3, 2).with_cap(Some(cap));
            return s;
        }
    }
}

fn hilbert_check(name: &str, text: &str, expected: &[u64]) -> Result<Check> {
    let f = potential(text)?;
    let q = quotient(&f, 12)?;
    let r = dim_report(&q, None)?;
    Ok(check(
        name,
        q.finite && q.hilbert == expected,
        json!({"potential": text, "hilbert": r.hilbert, "total": r.total, "finite": r.finite}),
    ))
}

pub fn dim8() -> Result<Report> {
    let mut checks = vec![hilbert_check("hilbert", DIM8, &[1, 2, 2, 2, 1])?];
    let c = classify_potential(&potential(DIM8)?, 12)?;
    checks.push(check(
        "canonical form",
        c.representative.as_deref() == Some("x^3 + y^3 + cyc(xyxy)") && c.cubic.label == CubicLabel::X3Y3,
        json!({"label": c.cubic.label, "representative": c.representative, "dimension": c.dimension}),
    ));
    Ok(Report::new("dim8", checks))
}

pub fn dim9() -> Result<Report> {
    let mut checks = Vec::new();
    for t in [DIM9_A, DIM9_B] {
        checks.push(hilbert_check(&format!("hilbert {t}"), t, &[1, 2, 2, 2, 1, 1])?);
    }
    let v = non_isomorphism()?;
    checks.push(check("the two dimension-9 algebras are not isomorphic", v.pass, v.detail));
    Ok(Report::new("dim9", checks))
}

/// Rational profiles and lifted searches over 3, 5, 7 for the two dim-9 algebras.
pub fn non_isomorphism() -> Result<Check> {
    let a = quotient(&potential(DIM9_A)?, 12)?;
    let b = quotient(&potential(DIM9_B)?, 12)?;
    let pipeline = distinguish(&a, &b)?;
    let (fa, fb) = (FiniteAlgebra::from_quotient(&a)?, FiniteAlgebra::from_quotient(&b)?);
    let mut searches = Vec::new();
    for p in crate::isotest::PROXY_PRIMES {
        let v = lifted_iso_search(&fa.reduce_mod_p(p)?, &fb.reduce_mod_p(p)?)?;
        searches.push(json!({"p": p, "verdict": v}));
    }
    let profile_fired = matches!(&pipeline, IsoVerdict::NotIsomorphic { proxy: false, .. });
    let search_fired = searches.iter().any(|s| s["verdict"]["status"] == "not_isomorphic");
    let fired = match (profile_fired, search_fired) {
        (true, true) => "invariant profile and lifted search",
        (true, false) => "invariant profile",
        (false, true) => "lifted search",
        (false, false) => "none",
    };
    Ok(check(
        "non-isomorphism",
        profile_fired || search_fired,
        json!({"pipeline": pipeline, "lifted_searches": searches, "fired": fired}),
    ))
}

/// `cyc(x²y) + y⁴·p(y)` with `p` given by its coefficients from degree 0.
fn x2y_with_tail(p: &[(u32, Scalar)]) -> Potential {
    let mut body = cyclicize(&FreePoly::from_ints(Q, None, &[("xxy", 1)]));
    for (e, c) in p {
        body.add_term(Word::power(crate::word::Variable::Y, 4 + e), c);
    }
    Potential::simple(body)
}

fn int(v: i64) -> Scalar {
    Scalar::from_integer(v.into())
}

fn frac(n: i64, d: i64) -> Scalar {
    Scalar::new(n.into(), d.into())
}

pub fn cor1_grid() -> Result<Report> {
    let mut checks = Vec::new();
    let coeffs = [int(1), int(-1), int(2), frac(1, 3)];
    for n in 0..=3u32 {
        let mut rows = Vec::new();
        let mut ok = true;
        for c in &coeffs {
            let f = x2y_with_tail(&[(2 * n, c.clone())]);
            let q = quotient_auto(&f, 12, 40)?;
            let dim = q.dimension();
            ok &= dim == Some(3 * (2 * n as u64 + 3));
            rows.push(json!({"coefficient": crate::field::format_scalar(c), "dimension": dim, "hilbert": q.hilbert}));
        }
        checks.push(check(format!("p = c·y^{} gives {}", 2 * n, 3 * (2 * n + 3)), ok, json!(rows)));
    }
    // (n, k) grid: p = y^{2n} + y^k with k odd or k = 2n
    let mut grid = Vec::new();
    let mut x2y_dims = Vec::new();
    for n in 0..=3u32 {
        for k in (0..=6u32).filter(|&k| k % 2 == 1 || k == 2 * n) {
            let f = x2y_with_tail(&[(2 * n, int(1)), (k, int(1))]);
            let q = quotient_auto(&f, 12, 40)?;
            let dim = q.dimension();
            x2y_dims.push(dim);
            // lowest-degree reading of the tail
            let (kk, nn) = (k.min(2 * n), n);
            let reading = dim_formula(nn, kk);
            grid.push(json!({
                "n": n,
                "k": k,
                "dimension": dim,
                "4n+k+9": 4 * n as u64 + k as u64 + 9,
                "lowest_degree_reading": reading,
                "matches_4n+k+9": dim == Some(4 * n as u64 + k as u64 + 9),
                "matches_lowest_degree_reading": dim == Some(reading),
            }));
        }
    }
    checks.push(check("(n, k) grid", x2y_dims.iter().all(Option::is_some), json!(grid)));
    checks.push(check(
        "no dimension 8 in the X2Y grid",
        x2y_dims.iter().all(|d| *d != Some(8)),
        json!({"dimensions": x2y_dims}),
    ));
    Ok(Report::new("cor1-grid", checks))
}

pub fn x3_bound(seed: u64, count: usize) -> Result<Report> {
    let mut rng = sample::rng(seed);
    let mut rows = Vec::new();
    let mut ok = true;
    for _ in 0..count {
        let tail = cyclicize(&sample::poly(&mut rng, 4, 6, 4));
        let body = &FreePoly::from_ints(Q, None, &[("xxx", 1)]) + &tail;
        let f = Potential::simple(body.clone());
        let q = quotient(&f, 8)?;
        let label = crate::classify::cubic_class(&f)?.label;
        let dominates = q.hilbert.len() >= 4 && q.hilbert.iter().zip([1, 2, 3, 4]).all(|(h, b)| *h >= b);
        let bound = q.dimension().is_none_or(|d| d >= 10);
        ok &= label == CubicLabel::X3 && dominates && bound;
        rows.push(
            json!({"potential": body.render(), "hilbert": q.hilbert, "finite": q.finite, "dominates": dominates}),
        );
    }
    Ok(Report::new("x3-bound", vec![check(format!("{count} random tails"), ok, json!(rows))]))
}

/// Every (brace, chain) pair the pre-Lie checks run on.
pub fn brace_fixtures() -> Result<Vec<(String, FiniteBrace, Filtration)>> {
    let mut out = Vec::new();
    for n in [1, 2, 3, 4, 6] {
        let b = examples::trivial(examples::cyclic_add(n));
        let chain = Filtration::new(n, &[vec![0]])?;
        out.push((format!("trivial Z/{n}"), b, chain));
    }
    out.push((
        "trivial Z/2 x Z/2".into(),
        examples::trivial(examples::product_add(2, 2)),
        Filtration::new(4, &[vec![0]])?,
    ));
    out.push(("Z/9, a*b = 3ab".into(), examples::z9(), Filtration::new(9, &[vec![0, 3, 6], vec![0]])?));
    for (name, add, mul) in examples::nilpotent_rings() {
        let b = brace::brace_from_nilpotent_ring(add, mul)?;
        let chain = brace::ring_power_filtration(&b)?;
        out.push((format!("ring {name}"), b, chain));
    }
    for n in 2..=8 {
        for (i, b) in examples::cyclic_braces(n).into_iter().enumerate() {
            for (j, chain) in examples::ideal_chains(&b).into_iter().filter(|c| c.len() >= 3).enumerate() {
                out.push((format!("enumerated Z/{n} #{i} chain {j}"), b.clone(), chain));
            }
        }
    }
    Ok(out)
}

pub fn prelie() -> Result<Report> {
    let mut rows = Vec::new();
    let mut ok = true;
    let mut non_distributive = 0;
    for (name, b, chain) in brace_fixtures()? {
        let n = b.order();
        let m = chain.len();
        let brace_ok = brace::check_brace(&b).valid;
        let truss = FiniteTruss { table: b.clone(), alpha: vec![0; n] };
        let truss_ok =
            brace::check_truss(&truss).valid && brace::check_filtration(&b, Some(&truss.alpha), &chain).valid;
        let filtration_ok = brace::check_filtration(&b, None, &chain).valid;
        let graded = brace::associated_graded(&b, &chain);
        let defect = graded.as_ref().ok().map(brace::pre_lie_defect);
        let series_ok = (0..n * n * n).all(|t| {
            let s = brace::distributivity_series(&b, t / (n * n), (t / n) % n, t % n, m);
            s.partial_sums[m] == s.direct
        });
        let bound_ok = brace::check_degree_bound(&b, &chain).valid;
        let distributive = b.is_right_distributive();
        non_distributive += usize::from(!distributive);
        let pass = brace_ok
            && truss_ok
            && filtration_ok
            && defect.as_ref().is_some_and(|d| d.failures == 0)
            && series_ok
            && bound_ok;
        ok &= pass;
        rows.push(json!({
            "fixture": name,
            "order": n,
            "chain": chain.lists(),
            "right_distributive": distributive,
            "graded_orders": graded.as_ref().ok().map(|g| g.components.iter().map(Vec::len).collect::<Vec<_>>()),
            "pre_lie_defect": defect,
            "series_exact": series_ok,
            "degree_bound": bound_ok,
            "pass": pass,
        }));
    }
    Ok(Report::new(
        "prelie",
        vec![
            check("fixtures", ok, json!(rows)),
            check("some fixture is not right distributive", non_distributive > 0, json!({"count": non_distributive})),
        ],
    ))
}

pub fn reproduce(theorem: &str) -> Result<Report> {
    match theorem {
        "dim8" => dim8(),
        "dim9" => dim9(),
        "cor1-grid" => cor1_grid(),
        "x3-bound" => x3_bound(DEFAULT_SEED, 20),
        "prelie" => prelie(),
        other => {
            Err(AlgebraError::Invalid(format!("unknown theorem {other:?}; expected one of {}", THEOREMS.join(", "))))
        }
    }
}
