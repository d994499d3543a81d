//! Isomorphism tests for small local algebras given by multiplication tables.
//!
//! A unital homomorphism out of a word-basis algebra is fixed by the images
//! of `x` and `y`. It is well defined exactly when every boundary relation
//! `u·a = NF(u·a)` (with `u` a basis word, `a` a letter and `u·a` not a basis
//! word) is respected, so those relations are what the searches check.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{AlgebraError, Result};
use crate::field::{format_scalar, mod_inverse, FieldSpec, Scalar};
use crate::linalg;
use crate::par;
use crate::poly::FreePoly;
use crate::quotient::{invariant_profile, mult_table, MultTable, QuotientAlgebra};
use crate::rewrite::normal_form;
use crate::subst::Substitution;
use crate::word::{Variable, Word};

/// Largest number of candidate pairs the brute-force search will enumerate.
pub const BRUTE_FORCE_BUDGET: u64 = 1 << 22;
/// Search nodes allowed per linear part in the lifted search.
pub const LIFT_NODE_BUDGET: u64 = 1 << 20;
/// Primes tried by [`distinguish`] after the rational invariants agree.
pub const PROXY_PRIMES: [u64; 3] = [3, 5, 7];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    pub table: MultTable,
    pub degrees: Vec<u32>,
    pub unit: usize,
    gens: [usize; 2],
    /// For each basis word but the unit: index of its prefix and its last letter.
    build: Vec<Option<(usize, usize)>>,
    /// Indices ordered by degree, so prefixes come first.
    order: Vec<usize>,
    boundary: Vec<Boundary>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Boundary {
    u: usize,
    letter: usize,
    degree: u32,
    rhs: Vec<(usize, Scalar)>,
}

fn letter_index(v: Variable) -> usize {
    match v {
        Variable::X => 0,
        Variable::Y => 1,
    }
}

impl FiniteAlgebra {
    /// Checks the table: factor-closed word basis containing `1`, `x`, `y`,
    /// associativity, and positive-degree products staying in the radical.
    pub fn from_table(table: MultTable) -> Result<Self> {
        let index: HashMap<Word, usize> = table.basis.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        let find = |w: Word| index.get(&w).copied().ok_or_else(|| AlgebraError::Invalid(format!("basis lacks {w:?}")));
        let unit = find(Word::EMPTY)?;
        let gens = [find(Word::letter(Variable::X))?, find(Word::letter(Variable::Y))?];
        let degrees = table.degrees();
        let n = table.dim();
        let mut build = vec![None; n];
        for (i, w) in table.basis.iter().enumerate() {
            if w.degree() > 0 {
                let pre = find(w.prefix(w.degree() - 1))?;
                build[i] = Some((pre, letter_index(w.at(w.degree() - 1))));
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| degrees[i]);
        let mut boundary = Vec::new();
        for (u, w) in table.basis.iter().enumerate() {
            for v in Variable::ALL {
                if index.contains_key(&w.concat(&Word::letter(v))) {
                    continue;
                }
                let g = letter_index(v);
                let rhs = table.table[u][gens[g]]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.clone()))
                    .collect();
                boundary.push(Boundary { u, letter: g, degree: w.degree() + 1, rhs });
            }
        }
        if !table.is_associative() {
            return Err(AlgebraError::Invalid("multiplication table is not associative".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let low = degrees[i].max(degrees[j]).min(1);
                if let Some((k, _)) =
                    table.table[i][j].iter().enumerate().find(|(k, c)| !c.is_zero() && degrees[*k] < low)
                {
                    return Err(AlgebraError::Invalid(format!("product of basis {i}, {j} leaves the radical at {k}")));
                }
            }
        }
        Ok(FiniteAlgebra { table, degrees, unit, gens, build, order, boundary })
    }

    pub fn from_quotient(q: &QuotientAlgebra) -> Result<Self> {
        Self::from_table(mult_table(q)?)
    }

    pub fn field(&self) -> FieldSpec {
        self.table.field
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn basis(&self) -> &[Word] {
        &self.table.basis
    }

    /// Entry-wise reduction of the structure constants.
    pub fn reduce_mod_p(&self, p: u64) -> Result<FiniteAlgebra> {
        Self::from_table(self.table.reduce_mod(p)?)
    }

    /// The same algebra with its basis listed as `perm[0], perm[1], ...`.
    pub fn permuted(&self, perm: &[usize]) -> Result<FiniteAlgebra> {
        let n = self.dim();
        let mut inv = vec![usize::MAX; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        if perm.len() != n || inv.contains(&usize::MAX) {
            return Err(AlgebraError::Invalid("not a permutation of the basis".into()));
        }
        let t = &self.table;
        let table = perm
            .iter()
            .map(|&i| {
                perm.iter()
                    .map(|&j| {
                        let mut v = vec![Scalar::zero(); n];
                        for (k, c) in t.table[i][j].iter().enumerate() {
                            v[inv[k]] = c.clone();
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        Self::from_table(MultTable { field: t.field, basis: perm.iter().map(|&i| t.basis[i]).collect(), table })
    }

    /// Images of all basis words under the homomorphism with `x ↦ gx`, `y ↦ gy`
    /// into `target`.
    fn images(&self, target: &FiniteAlgebra, gx: &[Scalar], gy: &[Scalar]) -> Vec<Vec<Scalar>> {
        let g = [gx, gy];
        let mut img = vec![Vec::new(); self.dim()];
        for &i in &self.order {
            img[i] = match self.build[i] {
                None => target.table.unit_vector(target.unit),
                Some((pre, a)) => target.table.mul(&img[pre], g[a]),
            };
        }
        img
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub unital: bool,
    pub multiplicative: bool,
    pub bijective: bool,
}

impl WitnessCheck {
    pub fn ok(&self) -> bool {
        self.unital && self.multiplicative && self.bijective
    }
}

/// Checks the map `x ↦ gx`, `y ↦ gy` from `a` to `b` on every basis pair.
pub fn verify_witness(a: &FiniteAlgebra, b: &FiniteAlgebra, gx: &[Scalar], gy: &[Scalar]) -> Result<WitnessCheck> {
    if a.field() != b.field() {
        return Err(AlgebraError::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    let f = b.field();
    let img = a.images(b, gx, gy);
    let unital = img[a.unit] == b.table.unit_vector(b.unit);
    let n = a.dim();
    let multiplicative = (0..n * n).all(|t| {
        let (i, j) = (t / n, t % n);
        let lhs = b.table.mul(&img[i], &img[j]);
        let mut rhs = vec![Scalar::zero(); b.dim()];
        for (k, c) in a.table.table[i][j].iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (r, v) in rhs.iter_mut().zip(&img[k]) {
                *r = f.add(r, &f.mul(c, v));
            }
        }
        lhs == rhs
    });
    let bijective = n == b.dim() && linalg::rank(&img.clone(), f) == n;
    Ok(WitnessCheck { unital, multiplicative, bijective })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Target basis the image vectors refer to.
    pub basis: Vec<String>,
    pub x: Vec<String>,
    pub y: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    InvariantMismatch { invariant: String, left: String, right: String },
    Exhausted { description: String, candidates: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IsoVerdict {
    Isomorphic { field: String, method: String, witness: Witness, check: WitnessCheck },
    NotIsomorphic { field: String, proxy: bool, certificate: Certificate },
    Inconclusive { report: Vec<String> },
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic { .. })
    }

    pub fn is_not_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::NotIsomorphic { .. })
    }
}

fn witness(b: &FiniteAlgebra, gx: &[Scalar], gy: &[Scalar]) -> Witness {
    Witness {
        basis: b.basis().iter().map(|w| format!("{w:?}")).collect(),
        x: gx.iter().map(format_scalar).collect(),
        y: gy.iter().map(format_scalar).collect(),
    }
}

fn verified(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    gx: Vec<Scalar>,
    gy: Vec<Scalar>,
    method: &str,
) -> Result<IsoVerdict> {
    let check = verify_witness(a, b, &gx, &gy)?;
    if !check.ok() {
        return Err(AlgebraError::Invalid(format!("{method} produced an invalid witness: {check:?}")));
    }
    Ok(IsoVerdict::Isomorphic {
        field: a.field().to_string(),
        method: method.into(),
        witness: witness(b, &gx, &gy),
        check,
    })
}

fn dimension_mismatch(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<IsoVerdict> {
    (a.dim() != b.dim()).then(|| IsoVerdict::NotIsomorphic {
        field: a.field().to_string(),
        proxy: false,
        certificate: Certificate::InvariantMismatch {
            invariant: "dimension".into(),
            left: a.dim().to_string(),
            right: b.dim().to_string(),
        },
    })
}

// ---- arithmetic over F_p in machine words ----

struct FpAlg {
    p: u64,
    n: usize,
    sparse: Vec<Vec<(usize, u64)>>,
}

impl FpAlg {
    fn new(t: &FiniteAlgebra) -> Result<Self> {
        let p = match t.field() {
            FieldSpec::Prime(p) if p < 1 << 31 => p,
            f => return Err(AlgebraError::Invalid(format!("search needs a small prime field, got {f}"))),
        };
        let f = t.field();
        let n = t.dim();
        let sparse = (0..n * n)
            .map(|k| {
                t.table.table[k / n][k % n]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i, f.residue(c)))
                    .collect()
            })
            .collect();
        Ok(FpAlg { p, n, sparse })
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; self.n];
        for (i, &ai) in a.iter().enumerate().filter(|(_, v)| **v != 0) {
            for (j, &bj) in b.iter().enumerate().filter(|(_, v)| **v != 0) {
                let c = ai * bj % p;
                for &(k, t) in &self.sparse[i * self.n + j] {
                    out[k] = (out[k] + c * t) % p;
                }
            }
        }
        out
    }
}

#[allow(clippy::needless_range_loop)]
fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = mod_inverse(rows[rank][col], p);
        for v in rows[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let m = rows[r][col];
                for c in 0..ncols {
                    rows[r][c] = (rows[r][c] + p - m * rows[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solutions of `M z = rhs` as (particular, kernel basis).
#[allow(clippy::needless_range_loop)]
fn solve_mod(mut rows: Vec<Vec<u64>>, mut rhs: Vec<u64>, ncols: usize, p: u64) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        rhs.swap(rank, piv);
        let inv = mod_inverse(rows[rank][col], p);
        for v in rows[rank].iter_mut() {
            *v = *v * inv % p;
        }
        rhs[rank] = rhs[rank] * inv % p;
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let m = rows[r][col];
                for c in 0..ncols {
                    rows[r][c] = (rows[r][c] + p - m * rows[rank][c] % p) % p;
                }
                rhs[r] = (rhs[r] + p - m * rhs[rank] % p) % p;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rhs[rank..].iter().any(|&v| v != 0) {
        return None;
    }
    let mut part = vec![0u64; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        part[c] = rhs[r];
    }
    let kernel = (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; ncols];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = (p - rows[r][free]) % p;
            }
            v
        })
        .collect();
    Some((part, kernel))
}

/// Source data and target arithmetic shared by both searches.
/// `(u, a, deg ua, NF(ua))`: basis index, letter, degree and sparse normal form.
type BoundaryRelation = (usize, usize, u32, Vec<(usize, u64)>);

struct Plan<'a> {
    src: &'a FiniteAlgebra,
    tgt: FpAlg,
    tgt_deg: Vec<u32>,
    tgt_unit: usize,
    top: u32,
    rels: Vec<BoundaryRelation>,
}

impl<'a> Plan<'a> {
    fn new(src: &'a FiniteAlgebra, tgt: &FiniteAlgebra) -> Result<Self> {
        if src.field() != tgt.field() {
            return Err(AlgebraError::FieldMismatch(src.field().to_string(), tgt.field().to_string()));
        }
        let f = src.field();
        let rels = src
            .boundary
            .iter()
            .map(|b| (b.u, b.letter, b.degree, b.rhs.iter().map(|(k, c)| (*k, f.residue(c))).collect()))
            .collect();
        Ok(Plan {
            src,
            tgt: FpAlg::new(tgt)?,
            tgt_deg: tgt.degrees.clone(),
            tgt_unit: tgt.unit,
            top: tgt.degrees.iter().copied().max().unwrap_or(0),
            rels,
        })
    }

    fn images(&self, g: &[Vec<u64>; 2]) -> Vec<Vec<u64>> {
        let mut img = vec![Vec::new(); self.src.dim()];
        for &i in &self.src.order {
            img[i] = match self.src.build[i] {
                None => {
                    let mut v = vec![0u64; self.tgt.n];
                    v[self.tgt_unit] = 1;
                    v
                }
                Some((pre, a)) => self.tgt.mul(&img[pre], &g[a]),
            };
        }
        img
    }

    fn residuals(&self, g: &[Vec<u64>; 2], img: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let p = self.tgt.p;
        self.rels
            .iter()
            .map(|(u, a, _, rhs)| {
                let mut r = self.tgt.mul(&img[*u], &g[*a]);
                for &(k, c) in rhs {
                    for (x, v) in r.iter_mut().zip(&img[k]) {
                        *x = (*x + p - c * v % p) % p;
                    }
                }
                r
            })
            .collect()
    }

    fn is_iso(&self, g: &[Vec<u64>; 2]) -> bool {
        let img = self.images(g);
        self.residuals(g, &img).iter().all(|r| r.iter().all(|&v| v == 0))
            && self.src.dim() == self.tgt.n
            && rank_mod(img, self.tgt.p) == self.tgt.n
    }

    /// Fixes the degree-`e` components of the images, then recurses.
    fn lift(&self, g: &mut [Vec<u64>; 2], e: u32, nodes: &mut u64) -> Result<bool> {
        *nodes += 1;
        if *nodes > LIFT_NODE_BUDGET {
            return Err(AlgebraError::ResourceCap(format!("lifted search exceeded {LIFT_NODE_BUDGET} nodes")));
        }
        if e > self.top {
            return Ok(self.is_iso(g));
        }
        let p = self.tgt.p;
        let unknowns: Vec<(usize, usize)> =
            (0..2).flat_map(|a| (0..self.tgt.n).filter(|&k| self.tgt_deg[k] == e).map(move |k| (a, k))).collect();
        // the degree-(r + e − 1) part of a relation of degree r is affine in the unknowns
        let coords: Vec<(usize, usize)> = self
            .rels
            .iter()
            .enumerate()
            .flat_map(|(i, rel)| {
                let m = rel.2 + e - 1;
                (0..self.tgt.n).filter(move |&k| self.tgt_deg[k] == m).map(move |k| (i, k))
            })
            .collect();
        let eval = |g: &[Vec<u64>; 2]| {
            let r = self.residuals(g, &self.images(g));
            coords.iter().map(|&(i, k)| r[i][k]).collect::<Vec<u64>>()
        };
        let base = eval(g);
        let mut cols = Vec::with_capacity(unknowns.len());
        for &(a, k) in &unknowns {
            g[a][k] = 1;
            cols.push(eval(g).iter().zip(&base).map(|(v, b)| (v + p - b) % p).collect::<Vec<_>>());
            g[a][k] = 0;
        }
        let rows: Vec<Vec<u64>> = (0..coords.len()).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let rhs: Vec<u64> = base.iter().map(|b| (p - b) % p).collect();
        let Some((part, kernel)) = solve_mod(rows, rhs, unknowns.len(), p) else { return Ok(false) };
        let mut t = vec![0u64; kernel.len()];
        loop {
            for (j, &(a, k)) in unknowns.iter().enumerate() {
                g[a][k] = kernel.iter().zip(&t).fold(part[j], |acc, (v, s)| (acc + v[j] * s) % p);
            }
            if self.lift(g, e + 1, nodes)? {
                return Ok(true);
            }
            // next parameter vector, lexicographic
            let Some(i) = (0..t.len()).rev().find(|&i| t[i] + 1 < p) else { break };
            t[i] += 1;
            t[i + 1..].iter_mut().for_each(|v| *v = 0);
        }
        for &(a, k) in &unknowns {
            g[a][k] = 0;
        }
        Ok(false)
    }
}

fn to_scalars(v: &[u64]) -> Vec<Scalar> {
    v.iter().map(|&c| Scalar::from_integer(BigInt::from(c))).collect()
}

/// Exhaustive search over all pairs of radical elements as images of `x`, `y`.
pub fn brute_force_iso(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<IsoVerdict> {
    if let Some(v) = dimension_mismatch(a, b) {
        return Ok(v);
    }
    let plan = Plan::new(a, b)?;
    let p = plan.tgt.p;
    let radical: Vec<usize> = (0..b.dim()).filter(|&k| b.degrees[k] > 0).collect();
    let slots = 2 * radical.len() as u32;
    let total = p.checked_pow(slots).filter(|&t| t <= BRUTE_FORCE_BUDGET).ok_or_else(|| {
        AlgebraError::ResourceCap(format!("{p}^{slots} candidate pairs exceed the budget of {BRUTE_FORCE_BUDGET}"))
    })?;
    let decode = |mut t: u64| {
        let mut g = [vec![0u64; b.dim()], vec![0u64; b.dim()]];
        for s in 0..slots as usize {
            g[s / radical.len()][radical[s % radical.len()]] = t % p;
            t /= p;
        }
        g
    };
    let hit = par::find_first(total as usize, |t| {
        let g = decode(t as u64);
        plan.is_iso(&g).then_some(g)
    });
    match hit {
        Some((_, g)) => verified(a, b, to_scalars(&g[0]), to_scalars(&g[1]), "brute force"),
        None => Ok(IsoVerdict::NotIsomorphic {
            field: a.field().to_string(),
            proxy: true,
            certificate: Certificate::Exhausted {
                description: format!("all pairs of radical elements over F_{p}"),
                candidates: total,
            },
        }),
    }
}

/// Invertible linear parts over `F_p`, identity first.
fn linear_parts(p: u64) -> Vec<[u64; 4]> {
    let shifted = |v: u64| (v + 1) % p;
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let m = [shifted(a), b, c, shifted(d)];
                    if !(m[0] * m[3] + p * p - m[1] * m[2] % p).is_multiple_of(p) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// Linear part first, then higher components degree by degree; every new
/// layer of unknowns enters the relation images linearly.
pub fn lifted_iso_search(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<IsoVerdict> {
    if let Some(v) = dimension_mismatch(a, b) {
        return Ok(v);
    }
    let plan = Plan::new(a, b)?;
    let p = plan.tgt.p;
    let parts = linear_parts(p);
    let results = par::map(&parts, |m| -> Result<Option<[Vec<u64>; 2]>> {
        let mut g = [vec![0u64; b.dim()], vec![0u64; b.dim()]];
        g[0][b.gens[0]] = m[0];
        g[0][b.gens[1]] = m[1];
        g[1][b.gens[0]] = m[2];
        g[1][b.gens[1]] = m[3];
        let mut nodes = 0;
        Ok(plan.lift(&mut g, 2, &mut nodes)?.then_some(g))
    });
    let mut found = None;
    for r in results {
        if let Some(g) = r? {
            found = Some(g);
            break;
        }
    }
    match found {
        Some(g) => verified(a, b, to_scalars(&g[0]), to_scalars(&g[1]), "lifted search"),
        None => Ok(IsoVerdict::NotIsomorphic {
            field: a.field().to_string(),
            proxy: true,
            certificate: Certificate::Exhausted {
                description: format!("no invertible linear part over F_{p} lifts to a homomorphism"),
                candidates: parts.len() as u64,
            },
        }),
    }
}

/// Signed residues as rationals, kept only if they verify over `Q`.
fn lift_to_rationals(a: &FiniteAlgebra, b: &FiniteAlgebra, w: &Witness, p: u64) -> Result<Option<IsoVerdict>> {
    let signed = |s: &String| {
        let v = s.parse::<i64>().unwrap_or(0);
        let v = if v as u64 > p / 2 { v - p as i64 } else { v };
        Scalar::from_integer(BigInt::from(v))
    };
    let gx: Vec<Scalar> = w.x.iter().map(signed).collect();
    let gy: Vec<Scalar> = w.y.iter().map(signed).collect();
    let check = verify_witness(a, b, &gx, &gy)?;
    Ok(check.ok().then(|| IsoVerdict::Isomorphic {
        field: a.field().to_string(),
        method: format!("lifted search over F_{p}, signed residues verified over Q"),
        witness: witness(b, &gx, &gy),
        check,
    }))
}

fn profile_mismatch(a: &MultTable, b: &MultTable) -> Result<Option<Certificate>> {
    let (pa, pb) = (invariant_profile(a)?, invariant_profile(b)?);
    let fields = [
        ("hilbert", format!("{:?}", pa.hilbert), format!("{:?}", pb.hilbert)),
        ("radical_powers", format!("{:?}", pa.radical_powers), format!("{:?}", pb.radical_powers)),
        ("left_annihilator", pa.left_annihilator.to_string(), pb.left_annihilator.to_string()),
        ("right_annihilator", pa.right_annihilator.to_string(), pb.right_annihilator.to_string()),
        ("two_sided_annihilator", pa.two_sided_annihilator.to_string(), pb.two_sided_annihilator.to_string()),
        ("center", pa.center.to_string(), pb.center.to_string()),
        ("square_zero_count", format!("{:?}", pa.square_zero_count), format!("{:?}", pb.square_zero_count)),
    ];
    Ok(fields.into_iter().find(|(_, l, r)| l != r).map(|(name, left, right)| Certificate::InvariantMismatch {
        invariant: name.into(),
        left,
        right,
    }))
}

/// Rational invariants first, then lifted searches over [`PROXY_PRIMES`].
pub fn distinguish(a: &QuotientAlgebra, b: &QuotientAlgebra) -> Result<IsoVerdict> {
    distinguish_algebras(&FiniteAlgebra::from_quotient(a)?, &FiniteAlgebra::from_quotient(b)?)
}

/// Invariant profiles only: a mismatch certifies non-isomorphism, agreement decides nothing.
pub fn compare_invariants(fa: &FiniteAlgebra, fb: &FiniteAlgebra) -> Result<IsoVerdict> {
    if let Some(v) = dimension_mismatch(fa, fb) {
        return Ok(v);
    }
    Ok(match profile_mismatch(&fa.table, &fb.table)? {
        Some(c) => IsoVerdict::NotIsomorphic { field: fa.field().to_string(), proxy: false, certificate: c },
        None => IsoVerdict::Inconclusive { report: vec![format!("invariant profiles agree over {}", fa.field())] },
    })
}

/// [`distinguish`] on algebras given by their tables.
pub fn distinguish_algebras(fa: &FiniteAlgebra, fb: &FiniteAlgebra) -> Result<IsoVerdict> {
    if let Some(v) = dimension_mismatch(fa, fb) {
        return Ok(v);
    }
    if let Some(c) = profile_mismatch(&fa.table, &fb.table)? {
        return Ok(IsoVerdict::NotIsomorphic { field: fa.field().to_string(), proxy: false, certificate: c });
    }
    let mut report = vec![format!("invariant profiles agree over {}", fa.field())];
    let primes: Vec<u64> = match fa.field() {
        FieldSpec::Rationals => PROXY_PRIMES.to_vec(),
        FieldSpec::Prime(p) => vec![p],
    };
    for p in primes {
        let (ra, rb) = match (fa.reduce_mod_p(p), fb.reduce_mod_p(p)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(e), _) | (_, Err(e)) => {
                report.push(format!("F_{p}: {e}"));
                continue;
            }
        };
        match lifted_iso_search(&ra, &rb)? {
            v @ IsoVerdict::NotIsomorphic { .. } => return Ok(v),
            IsoVerdict::Isomorphic { witness: w, .. } => {
                if fa.field() != FieldSpec::Rationals {
                    return verified(&ra, &rb, parse_vec(&w.x), parse_vec(&w.y), "lifted search");
                }
                if let Some(v) = lift_to_rationals(fa, fb, &w, p)? {
                    return Ok(v);
                }
                report.push(format!("isomorphic over F_{p}; witness does not lift by signed residues"));
            }
            IsoVerdict::Inconclusive { report: r } => report.extend(r),
        }
    }
    Ok(IsoVerdict::Inconclusive { report })
}

fn parse_vec(v: &[String]) -> Vec<Scalar> {
    v.iter().map(|s| crate::field::parse_scalar(s).unwrap_or_default()).collect()
}

/// Coordinates of `NF(f)` in the basis of `q`.
pub fn coordinates(q: &QuotientAlgebra, f: &FreePoly) -> Result<Vec<Scalar>> {
    let nf = normal_form(&f.with_cap(Some(q.system.cap())), &q.system);
    let mut v = vec![Scalar::zero(); q.basis.len()];
    for (w, c) in nf.terms() {
        let i = q.index_of(w).ok_or_else(|| AlgebraError::Invalid(format!("{w:?} is not a basis word")))?;
        v[i] = c.clone();
    }
    Ok(v)
}

/// The map `x ↦ s(x)`, `y ↦ s(y)` from `a` to `b`, verified over the base field.
pub fn substitution_witness(a: &QuotientAlgebra, b: &QuotientAlgebra, s: &Substitution) -> Result<IsoVerdict> {
    let fa = FiniteAlgebra::from_quotient(a)?;
    let fb = FiniteAlgebra::from_quotient(b)?;
    if let Some(v) = dimension_mismatch(&fa, &fb) {
        return Ok(v);
    }
    let gx = coordinates(b, &s.image_x)?;
    let gy = coordinates(b, &s.image_y)?;
    let check = verify_witness(&fa, &fb, &gx, &gy)?;
    if !check.ok() {
        return Ok(IsoVerdict::Inconclusive {
            report: vec![format!("substitution does not induce an isomorphism: {check:?}")],
        });
    }
    Ok(IsoVerdict::Isomorphic {
        field: fa.field().to_string(),
        method: "substitution".into(),
        witness: witness(&fb, &gx, &gy),
        check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{cyclicize, Potential};
    use crate::quotient::hilbert;
    use crate::rewrite::complete;
    use crate::word::MonomialOrder;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn quotient(terms: &[(&str, i64)], cyc: &[(&str, i64)]) -> QuotientAlgebra {
        let body = &FreePoly::from_ints(Q, None, terms) + &cyclicize(&FreePoly::from_ints(Q, None, cyc));
        let (r1, r2) = Potential::simple(body).relations();
        hilbert(&complete(&[r1, r2], MonomialOrder::default(), 10).unwrap()).unwrap()
    }

    fn r1() -> QuotientAlgebra {
        quotient(&[("yyyy", 1)], &[("xxy", 1)])
    }

    fn r2() -> QuotientAlgebra {
        quotient(&[("yyyy", 1), ("yyyyy", 1)], &[("xxy", 1)])
    }

    fn dim8() -> QuotientAlgebra {
        quotient(&[("xxx", 1), ("yyy", 1)], &[("xyxy", 1)])
    }

    #[test]
    fn reduction_mod_p() {
        let a = FiniteAlgebra::from_quotient(&r1()).unwrap();
        assert_eq!(a.reduce_mod_p(5).unwrap().dim(), 9);
        let b = FiniteAlgebra::from_quotient(&r2()).unwrap().reduce_mod_p(2).unwrap();
        let f = b.field();
        let xx = &b.table.table[b.gens[0]][b.gens[0]];
        let y3 = b.basis().iter().position(|w| *w == Word::parse("yyy").unwrap()).unwrap();
        let y4 = b.basis().iter().position(|w| *w == Word::parse("yyyy").unwrap()).unwrap();
        assert_eq!((xx[y3].clone(), xx[y4].clone()), (f.one(), f.one()));
        let mut t = a.table.clone();
        t.table[1][1][0] = Scalar::new(1.into(), 2.into());
        assert!(matches!(t.reduce_mod(2), Err(AlgebraError::BadDenominator { .. })));
    }

    #[test]
    fn self_isomorphism_has_identity_linear_part() {
        let a = FiniteAlgebra::from_quotient(&r1()).unwrap().reduce_mod_p(3).unwrap();
        let v = lifted_iso_search(&a, &a).unwrap();
        let IsoVerdict::Isomorphic { witness, .. } = v else { panic!("{v:?}") };
        assert_eq!(witness.x[a.gens[0]], "1");
        assert_eq!(witness.x[a.gens[1]], "0");
        assert_eq!(witness.y[a.gens[1]], "1");
    }

    #[test]
    fn permuted_copy_is_found() {
        let a = FiniteAlgebra::from_quotient(&r1()).unwrap().reduce_mod_p(5).unwrap();
        let perm: Vec<usize> = (0..a.dim()).rev().collect();
        let b = a.permuted(&perm).unwrap();
        assert!(lifted_iso_search(&a, &b).unwrap().is_isomorphic());
    }

    #[test]
    fn r1_r2_not_isomorphic_mod_5() {
        let a = FiniteAlgebra::from_quotient(&r1()).unwrap().reduce_mod_p(5).unwrap();
        let b = FiniteAlgebra::from_quotient(&r2()).unwrap().reduce_mod_p(5).unwrap();
        let v = lifted_iso_search(&a, &b).unwrap();
        assert!(v.is_not_isomorphic(), "{v:?}");
    }

    #[test]
    fn brute_force_agrees_with_lifted_search_mod_2() {
        let a = FiniteAlgebra::from_quotient(&dim8()).unwrap().reduce_mod_p(2).unwrap();
        let s = brute_force_iso(&a, &a).unwrap();
        let l = lifted_iso_search(&a, &a).unwrap();
        assert!(s.is_isomorphic() && l.is_isomorphic());
    }

    #[test]
    fn distinguish_dimensions() {
        let v = distinguish(&dim8(), &r1()).unwrap();
        assert!(v.is_not_isomorphic());
        assert!(distinguish(&r1(), &r1()).unwrap().is_isomorphic());
    }

    #[test]
    fn swap_is_a_substitution_witness() {
        let q = dim8();
        let m = [[Q.zero(), Q.one()], [Q.one(), Q.zero()]];
        let s = Substitution::linear(Q, 10, &m);
        assert!(substitution_witness(&q, &q, &s).unwrap().is_isomorphic());
    }
}
