//! Finite braces and trusses given by tables, ideal filtrations, their
//! associated graded structures and the pre-Lie check.
//!
//! Elements are carrier indices `0..n` with `0` the additive identity. The
//! operation `a * b` is stored; `a ∘ b = a + b + a * b` is derived.

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::par;

/// Addition and star tables over `0..n`.
/// Dense operation table on the carrier `0..n`.
pub type Table = Vec<Vec<usize>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteBrace {
    add: Vec<Vec<usize>>,
    star: Vec<Vec<usize>>,
    neg: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTruss {
    pub table: FiniteBrace,
    pub alpha: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub axiom: String,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
}

impl Verdict {
    fn from(r: std::result::Result<(), Failure>) -> Verdict {
        match r {
            Ok(()) => Verdict { valid: true, failure: None },
            Err(f) => Verdict { valid: false, failure: Some(f) },
        }
    }
}

type Check = std::result::Result<(), Failure>;

fn square(n: usize, t: &[Vec<usize>], name: &str) -> Result<()> {
    if t.len() != n || t.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
        return Err(AlgebraError::Invalid(format!("{name} table is not {n}×{n} over 0..{n}")));
    }
    Ok(())
}

/// First `(a, b, c)` in lexicographic order where `holds` fails.
fn all_triples(n: usize, axiom: &str, holds: impl Fn(usize, usize, usize) -> bool + Sync + Send) -> Check {
    match par::find_first(n * n * n, |t| (!holds(t / (n * n), (t / n) % n, t % n)).then_some(())) {
        None => Ok(()),
        Some((t, ())) => Err(Failure { axiom: axiom.into(), witness: vec![t / (n * n), (t / n) % n, t % n] }),
    }
}

fn all_pairs(n: usize, axiom: &str, holds: impl Fn(usize, usize) -> bool + Sync + Send) -> Check {
    match par::find_first(n * n, |t| (!holds(t / n, t % n)).then_some(())) {
        None => Ok(()),
        Some((t, ())) => Err(Failure { axiom: axiom.into(), witness: vec![t / n, t % n] }),
    }
}

impl FiniteBrace {
    /// Builds the tables; only the shapes and additive inverses are checked
    /// here, the axioms by [`check_brace`].
    pub fn new(add: Vec<Vec<usize>>, star: Vec<Vec<usize>>) -> Result<Self> {
        let n = add.len();
        if n == 0 {
            return Err(AlgebraError::Invalid("empty carrier".into()));
        }
        square(n, &add, "add")?;
        square(n, &star, "star")?;
        let neg = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| add[a][b] == 0)
                    .ok_or_else(|| AlgebraError::Invalid(format!("{a} has no additive inverse")))
            })
            .collect::<Result<_>>()?;
        Ok(FiniteBrace { add, star, neg })
    }

    pub fn order(&self) -> usize {
        self.add.len()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add[a][self.neg[b]]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn star(&self, a: usize, b: usize) -> usize {
        self.star[a][b]
    }

    pub fn circ(&self, a: usize, b: usize) -> usize {
        self.add(self.add(a, b), self.star(a, b))
    }

    pub fn add_table(&self) -> &[Vec<usize>] {
        &self.add
    }

    pub fn star_table(&self) -> &[Vec<usize>] {
        &self.star
    }

    fn check_group(&self) -> Check {
        let n = self.order();
        all_pairs(n, "additive identity", |a, _| self.add(a, 0) == a && self.add(0, a) == a)?;
        all_pairs(n, "addition commutative", |a, b| self.add(a, b) == self.add(b, a))?;
        all_triples(n, "addition associative", |a, b, c| self.add(self.add(a, b), c) == self.add(a, self.add(b, c)))
    }

    fn check_circ_associative(&self) -> Check {
        all_triples(self.order(), "circ associative", |a, b, c| {
            self.circ(self.circ(a, b), c) == self.circ(a, self.circ(b, c))
        })
    }

    /// `(a, b, c) ↦ a*(b+c) − a*b − a*c`.
    fn left_defect(&self, a: usize, b: usize, c: usize) -> usize {
        self.sub(self.sub(self.star(a, self.add(b, c)), self.star(a, b)), self.star(a, c))
    }

    /// `(a+b)*c − a*c − b*c`.
    pub fn right_defect(&self, a: usize, b: usize, c: usize) -> usize {
        self.sub(self.sub(self.star(self.add(a, b), c), self.star(a, c)), self.star(b, c))
    }

    pub fn is_right_distributive(&self) -> bool {
        let n = self.order();
        (0..n * n * n).all(|t| self.right_defect(t / (n * n), (t / n) % n, t % n) == 0)
    }
}

/// Abelian group, left distributivity, the brace identity
/// `(a*b + a + b)*c = a*c + b*c + a*(b*c)`, and `∘` a group with identity `0`.
pub fn check_brace(b: &FiniteBrace) -> Verdict {
    let n = b.order();
    let run = || -> Check {
        b.check_group()?;
        all_triples(n, "left distributivity", |x, y, z| b.left_defect(x, y, z) == 0)?;
        all_triples(n, "brace identity", |x, y, z| {
            let lhs = b.star(b.add(b.add(b.star(x, y), x), y), z);
            lhs == b.add(b.add(b.star(x, z), b.star(y, z)), b.star(x, b.star(y, z)))
        })?;
        b.check_circ_associative()?;
        all_pairs(n, "circ identity", |x, _| b.circ(x, 0) == x && b.circ(0, x) == x)?;
        all_pairs(n, "circ inverse", |x, _| (0..n).any(|y| b.circ(x, y) == 0 && b.circ(y, x) == 0))
    };
    Verdict::from(run())
}

/// Abelian group, `∘` associative and `a*(b+c) = a*b + a*c + α(a)`.
pub fn check_truss(t: &FiniteTruss) -> Verdict {
    let b = &t.table;
    let n = b.order();
    let run = || -> Check {
        if t.alpha.len() != n || t.alpha.iter().any(|&v| v >= n) {
            return Err(Failure { axiom: "alpha table shape".into(), witness: vec![] });
        }
        b.check_group()?;
        b.check_circ_associative()?;
        all_triples(n, "truss identity", |x, y, z| b.left_defect(x, y, z) == t.alpha[x])
    };
    Verdict::from(run())
}

/// `B = B₁ ⊇ B₂ ⊇ … ⊇ B_m = {0}`; beyond `m` every component is `{0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    members: Vec<Vec<bool>>,
}

impl Filtration {
    /// `lower` lists `B₂, B₃, …`; `B₁` is the whole carrier.
    pub fn new(order: usize, lower: &[Vec<usize>]) -> Result<Self> {
        let mut members = vec![vec![true; order]];
        for s in lower {
            let mut m = vec![false; order];
            for &x in s {
                if x >= order {
                    return Err(AlgebraError::Invalid(format!("filtration element {x} outside 0..{order}")));
                }
                m[x] = true;
            }
            members.push(m);
        }
        Ok(Filtration { members })
    }

    /// Number of listed components, `B₁` included.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, k: usize, x: usize) -> bool {
        match k {
            0 | 1 => true,
            k if k <= self.len() => self.members[k - 1][x],
            _ => x == 0,
        }
    }

    /// Largest `i` with `x ∈ Bᵢ`; `None` for `0`, which lies in every component.
    pub fn degree(&self, x: usize) -> Option<usize> {
        if x == 0 {
            return None;
        }
        (1..=self.len()).rev().find(|&k| self.contains(k, x))
    }

    pub fn component(&self, k: usize) -> Vec<usize> {
        (0..self.members[0].len()).filter(|&x| self.contains(k, x)).collect()
    }

    pub fn lists(&self) -> Vec<Vec<usize>> {
        (2..=self.len()).map(|k| self.component(k)).collect()
    }
}

/// Subgroups, decreasing chain ending at `{0}`, ideal (congruence)
/// conditions, `Bᵢ * Bⱼ ⊆ B_{i+j}`, and for trusses `α(B) ⊆ B₃`.
pub fn check_filtration(b: &FiniteBrace, alpha: Option<&[usize]>, chain: &Filtration) -> Verdict {
    let n = b.order();
    let m = chain.len();
    let run = || -> Check {
        if chain.component(m) != [0] {
            return Err(Failure { axiom: "chain ends at {0}".into(), witness: chain.component(m) });
        }
        for k in 2..=m {
            if let Some(x) = (0..n).find(|&x| chain.contains(k, x) && !chain.contains(k - 1, x)) {
                return Err(Failure { axiom: format!("B{k} ⊆ B{}", k - 1), witness: vec![x] });
            }
            let s = chain.component(k);
            for &x in &s {
                if let Some(&y) = s.iter().find(|&&y| !chain.contains(k, b.sub(x, y))) {
                    return Err(Failure { axiom: format!("B{k} is a subgroup"), witness: vec![x, y] });
                }
            }
            // congruence: a*(c+i) − a*c and (a+i)*c − a*c stay in Bₖ
            for &i in &s {
                all_pairs(n, &format!("B{k} is an ideal"), |a, c| {
                    chain.contains(k, b.sub(b.star(a, b.add(c, i)), b.star(a, c)))
                        && chain.contains(k, b.sub(b.star(b.add(a, i), c), b.star(a, c)))
                })
                .map_err(|mut f| {
                    f.witness.push(i);
                    f
                })?;
            }
        }
        let deg = |x| chain.degree(x).unwrap_or(m + 1);
        all_pairs(n, "Bi * Bj ⊆ B(i+j)", |x, y| chain.contains(deg(x) + deg(y), b.star(x, y)))?;
        if let Some(alpha) = alpha {
            if let Some(x) = (0..n).find(|&x| !chain.contains(3, alpha[x])) {
                return Err(Failure { axiom: "alpha(B) ⊆ B3".into(), witness: vec![x] });
            }
        }
        Ok(())
    };
    Verdict::from(run())
}

/// `⊕ Bᵢ/Bᵢ₊₁` with the product induced by `*` on homogeneous classes.
#[derive(Debug, Clone)]
pub struct GradedStructure {
    table: FiniteBrace,
    chain: Filtration,
    /// Coset representatives (least index) of `Bᵢ/Bᵢ₊₁` for `i = 1 … m−1`,
    /// the zero class first.
    pub components: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedRecord {
    pub component_orders: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    /// `"i:a*j:b" → representative of the product class in degree i+j`.
    pub products: std::collections::BTreeMap<String, usize>,
}

impl GradedStructure {
    pub fn top(&self) -> usize {
        self.components.len()
    }

    /// Representative of the class of `x ∈ B_d` in `B_d / B_{d+1}`.
    pub fn class(&self, d: usize, x: usize) -> usize {
        (0..self.table.order())
            .filter(|&u| self.chain.contains(d + 1, u))
            .map(|u| self.table.add(x, u))
            .min()
            .unwrap_or(x)
    }

    /// Product of homogeneous classes, as a representative in degree `i + j`.
    pub fn mul(&self, i: usize, a: usize, j: usize, b: usize) -> usize {
        let d = i + j;
        if d > self.top() {
            0
        } else {
            self.class(d, self.table.star(a, b))
        }
    }

    pub fn record(&self) -> GradedRecord {
        let mut products = std::collections::BTreeMap::new();
        for (i, ci) in self.components.iter().enumerate() {
            for (j, cj) in self.components.iter().enumerate() {
                for &a in ci {
                    for &b in cj {
                        products.insert(format!("{}:{a}*{}:{b}", i + 1, j + 1), self.mul(i + 1, a, j + 1, b));
                    }
                }
            }
        }
        GradedRecord {
            component_orders: self.components.iter().map(Vec::len).collect(),
            components: self.components.clone(),
            products,
        }
    }
}

/// Builds the graded structure, checking that the product and both
/// distributive laws are independent of representatives.
pub fn associated_graded(b: &FiniteBrace, chain: &Filtration) -> std::result::Result<GradedStructure, Failure> {
    let n = b.order();
    let m = chain.len();
    for i in 1..m {
        for j in 1..m {
            let r = i + j + 1;
            let bi = chain.component(i);
            let bj = chain.component(j);
            for &x in &bi {
                for &y in &bj {
                    let base = b.star(x, y);
                    for u in chain.component(i + 1) {
                        for v in chain.component(j + 1) {
                            if !chain.contains(r, b.sub(b.star(b.add(x, u), b.add(y, v)), base)) {
                                return Err(Failure {
                                    axiom: "graded product well defined".into(),
                                    witness: vec![i, x, u, j, y, v],
                                });
                            }
                        }
                    }
                    for &x2 in &bi {
                        if !chain.contains(r, b.right_defect(x, x2, y)) {
                            return Err(Failure {
                                axiom: "graded right distributivity".into(),
                                witness: vec![i, x, x2, j, y],
                            });
                        }
                    }
                    for &y2 in &bj {
                        if !chain.contains(r, b.left_defect(x, y, y2)) {
                            return Err(Failure {
                                axiom: "graded left distributivity".into(),
                                witness: vec![i, x, j, y, y2],
                            });
                        }
                    }
                }
            }
        }
    }
    let mut g = GradedStructure { table: b.clone(), chain: chain.clone(), components: Vec::new() };
    for d in 1..m {
        let mut reps: Vec<usize> = (0..n).filter(|&x| chain.contains(d, x)).map(|x| g.class(d, x)).collect();
        reps.sort_unstable();
        reps.dedup();
        g.components.push(reps);
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreLieDefect {
    /// Homogeneous triples where `(a,b,c) ≠ (b,a,c)`; zero for a pre-Lie algebra.
    pub failures: u64,
    pub triples: u64,
    /// `[deg a, a, deg b, b, deg c, c]` for the first failure.
    pub witness: Option<[usize; 6]>,
}

/// Left symmetry of the associator `(a,b,c) = (a·b)·c − a·(b·c)` on
/// homogeneous classes.
pub fn pre_lie_defect(g: &GradedStructure) -> PreLieDefect {
    let t = &g.table;
    let top = g.top();
    let mut out = PreLieDefect { failures: 0, triples: 0, witness: None };
    for i in 1..=top {
        for j in 1..=top {
            for k in 1..=top {
                let d = i + j + k;
                if d > top {
                    continue;
                }
                for &a in &g.components[i - 1][1..] {
                    for &b in &g.components[j - 1][1..] {
                        for &c in &g.components[k - 1][1..] {
                            let ab = g.mul(i, a, j, b);
                            let ba = g.mul(j, b, i, a);
                            let abc = t.sub(g.mul(i + j, ab, k, c), g.mul(i, a, j + k, g.mul(j, b, k, c)));
                            let bac = t.sub(g.mul(i + j, ba, k, c), g.mul(j, b, i + k, g.mul(i, a, k, c)));
                            out.triples += 1;
                            if g.class(d, t.sub(abc, bac)) != 0 {
                                out.failures += 1;
                                out.witness.get_or_insert([i, a, j, b, k, c]);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistributivitySeries {
    /// `(a+b)*c − a*c − b*c`.
    pub direct: usize,
    /// `tᵢ = (dᵢ*dᵢ')*c − dᵢ*(dᵢ'*c)` for `i = 0 … N−1`.
    pub terms: Vec<usize>,
    /// `S_N = Σ_{i<N} (−1)^{i+1} tᵢ` for `N = 0 … terms.len()`.
    pub partial_sums: Vec<usize>,
    /// Smallest `N` from which every listed partial sum equals `direct`.
    pub exact_from: Option<usize>,
}

/// `d₀ = a`, `d₀' = b`, `dᵢ₊₁ = dᵢ + dᵢ'`, `dᵢ₊₁' = dᵢ * dᵢ'`. The brace
/// identity gives `D(dᵢ, dᵢ') = −tᵢ − D(dᵢ₊₁, dᵢ₊₁')` exactly, so the
/// partial sums reach the direct value once `d_N'` is deep enough.
pub fn distributivity_series(b: &FiniteBrace, a: usize, x: usize, c: usize, n: usize) -> DistributivitySeries {
    let (mut d, mut dp) = (a, x);
    let mut terms = Vec::with_capacity(n);
    let mut partial_sums = vec![0];
    for i in 0..n {
        let t = b.sub(b.star(b.star(d, dp), c), b.star(d, b.star(dp, c)));
        terms.push(t);
        let last = *partial_sums.last().unwrap();
        partial_sums.push(if i % 2 == 0 { b.sub(last, t) } else { b.add(last, t) });
        (d, dp) = (b.add(d, dp), b.star(d, dp));
    }
    let direct = b.right_defect(a, x, c);
    let exact_from = (0..partial_sums.len()).find(|&k| partial_sums[k..].iter().all(|&s| s == direct));
    DistributivitySeries { direct, terms, partial_sums, exact_from }
}

/// `deg((a+b)*c − a*c − b*c) > deg b + deg c` whenever `deg a < deg b`.
pub fn check_degree_bound(b: &FiniteBrace, chain: &Filtration) -> Verdict {
    let m = chain.len();
    let deg = |x| chain.degree(x).unwrap_or(m + 1);
    Verdict::from(all_triples(b.order(), "degree bound", |x, y, z| {
        if x == 0 || y == 0 || deg(x) >= deg(y) {
            return true;
        }
        chain.contains(deg(y) + deg(z) + 1, b.right_defect(x, y, z))
    }))
}

/// Additive subgroups `Rᵏ` of a ring, from `R` down to `{0}`; `None` if the
/// powers stop shrinking first.
fn ring_powers(add: &[Vec<usize>], mul: &[Vec<usize>]) -> Option<Vec<Vec<bool>>> {
    let n = add.len();
    let mut powers = vec![vec![true; n]];
    loop {
        let last = powers.last().unwrap();
        let mut next = vec![false; n];
        next[0] = true;
        for a in (0..n).filter(|&a| last[a]) {
            for r in 0..n {
                next[mul[a][r]] = true;
            }
        }
        // additive closure
        loop {
            let members: Vec<usize> = (0..n).filter(|&x| next[x]).collect();
            let mut grew = false;
            for &x in &members {
                for &y in &members {
                    if !next[add[x][y]] {
                        next[add[x][y]] = true;
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        if next == *last {
            return next.iter().filter(|&&v| v).count().eq(&1).then_some(powers);
        }
        powers.push(next);
    }
}

/// The brace `a * b = ab` of a nilpotent ring (its adjoint group is `∘`).
pub fn brace_from_nilpotent_ring(add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>) -> Result<FiniteBrace> {
    let b = FiniteBrace::new(add, mul)?;
    if ring_powers(&b.add, &b.star).is_none() {
        return Err(AlgebraError::Invalid("ring is not nilpotent".into()));
    }
    let v = check_brace(&b);
    if let Some(f) = v.failure {
        return Err(AlgebraError::Invalid(format!("ring does not give a brace: {} at {:?}", f.axiom, f.witness)));
    }
    Ok(b)
}

/// `R ⊇ R² ⊇ … ⊇ {0}` for a nilpotent ring (given as a brace).
pub fn ring_power_filtration(b: &FiniteBrace) -> Result<Filtration> {
    let powers = ring_powers(&b.add, &b.star).ok_or_else(|| AlgebraError::Invalid("ring is not nilpotent".into()))?;
    let mut chain = Filtration { members: powers };
    if chain.component(chain.len()) != [0] {
        let mut zero = vec![false; b.order()];
        zero[0] = true;
        chain.members.push(zero);
    }
    Ok(chain)
}

/// JSON layout of brace and truss files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraceFile {
    pub order: usize,
    pub add: Vec<Vec<usize>>,
    pub star: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<usize>>,
    #[serde(default)]
    pub filtration: Vec<Vec<usize>>,
}

impl BraceFile {
    pub fn tables(&self) -> Result<(FiniteBrace, Filtration)> {
        if self.add.len() != self.order {
            return Err(AlgebraError::Invalid(format!(
                "order {} but add table has {} rows",
                self.order,
                self.add.len()
            )));
        }
        let b = FiniteBrace::new(self.add.clone(), self.star.clone())?;
        let chain = Filtration::new(self.order, &self.filtration)?;
        Ok((b, chain))
    }

    pub fn from_parts(b: &FiniteBrace, alpha: Option<Vec<usize>>, chain: &Filtration) -> Self {
        BraceFile { order: b.order(), add: b.add.clone(), star: b.star.clone(), alpha, filtration: chain.lists() }
    }
}

/// Small structures used as fixtures by the tests and the reproduction runs.
pub mod examples {
    use super::*;

    pub fn cyclic_add(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    pub fn trivial(add: Vec<Vec<usize>>) -> FiniteBrace {
        let n = add.len();
        FiniteBrace::new(add, vec![vec![0; n]; n]).expect("group table")
    }

    /// `ℤ/9` with `a * b = 3ab`.
    pub fn z9() -> FiniteBrace {
        let star = (0..9).map(|a| (0..9).map(|b| 3 * a * b % 9).collect()).collect();
        FiniteBrace::new(cyclic_add(9), star).unwrap()
    }

    /// Product group `ℤ/m × ℤ/k`, element `(i, j)` at index `i·k + j`.
    pub fn product_add(m: usize, k: usize) -> Vec<Vec<usize>> {
        let n = m * k;
        (0..n).map(|a| (0..n).map(|b| ((a / k + b / k) % m) * k + (a % k + b % k) % k).collect()).collect()
    }

    /// Coefficient vectors in `ℤ/q` of length `len`, base-`q` indices.
    fn vectors(q: usize, len: usize) -> (Table, impl Fn(usize) -> Vec<usize>, impl Fn(&[usize]) -> usize) {
        let n = q.pow(len as u32);
        let decode = move |mut x: usize| {
            let mut v = vec![0; len];
            for c in v.iter_mut() {
                *c = x % q;
                x /= q;
            }
            v
        };
        let encode = move |v: &[usize]| v.iter().rev().fold(0, |acc, c| acc * q + c % q);
        let add = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let (u, v) = (decode(a), decode(b));
                        encode(&u.iter().zip(&v).map(|(x, y)| x + y).collect::<Vec<_>>())
                    })
                    .collect()
            })
            .collect();
        (add, decode, encode)
    }

    /// `x·F_q[x]/(xᵏ)` with coefficients of `x, …, x^{k−1}`.
    pub fn truncated_polynomials(q: usize, k: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let (add, decode, encode) = vectors(q, k - 1);
        let n = add.len();
        let mul = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let (u, v) = (decode(a), decode(b));
                        let mut w = vec![0; k - 1];
                        for (i, x) in u.iter().enumerate() {
                            for (j, y) in v.iter().enumerate() {
                                // x^{i+1} · x^{j+1} = x^{i+j+2}
                                if i + j + 1 < k - 1 {
                                    w[i + j + 1] += x * y;
                                }
                            }
                        }
                        encode(&w)
                    })
                    .collect()
            })
            .collect();
        (add, mul)
    }

    /// Strictly upper triangular 3×3 matrices over `F_2`, entries `(a12, a13, a23)`.
    pub fn upper_triangular_f2() -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let (add, decode, encode) = vectors(2, 3);
        let mul = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (u, v) = (decode(a), decode(b));
                        encode(&[0, u[0] * v[2], 0])
                    })
                    .collect()
            })
            .collect();
        (add, mul)
    }

    /// `2ℤ/2ᵏ` relabelled as `ℤ/2^{k−1}`: `i·j ↦ 2ij`.
    pub fn even_integers(k: u32) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let n = 1usize << (k - 1);
        let mul = (0..n).map(|a| (0..n).map(|b| 2 * a * b % n).collect()).collect();
        (cyclic_add(n), mul)
    }

    /// Nilpotent rings of order at most 16 with names.
    pub fn nilpotent_rings() -> Vec<(String, Table, Table)> {
        let mut out = Vec::new();
        for k in 3..=5 {
            let (a, m) = even_integers(k);
            out.push((format!("2Z/{}", 1 << k), a, m));
        }
        for (q, k) in [(2, 3), (2, 4), (2, 5), (3, 3)] {
            let (a, m) = truncated_polynomials(q, k);
            out.push((format!("xF{q}[x]/(x^{k})"), a, m));
        }
        let (a, m) = upper_triangular_f2();
        out.push(("upper triangular 3x3 over F2".into(), a, m));
        out.push(("zero ring on Z/2 x Z/2".into(), product_add(2, 2), vec![vec![0; 4]; 4]));
        out
    }

    /// Braces on `ℤ/n` with left-distributive `a * b = b·f(a)`, all `f` with `f(0) = 0`.
    pub fn cyclic_braces(n: usize) -> Vec<FiniteBrace> {
        let add = cyclic_add(n);
        let count = n.pow(n as u32 - 1);
        let found = par::map_range(count, |code| {
            let mut f = vec![0; n];
            let mut c = code;
            for v in f.iter_mut().skip(1) {
                *v = c % n;
                c /= n;
            }
            let star: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| b * f[a] % n).collect()).collect();
            // cheap brace-identity filter before the full check
            let ok = (0..n).all(|a| {
                (0..n).all(|b| {
                    let ab = b * f[a] % n;
                    let lhs = f[(ab + a + b) % n];
                    let rhs = (f[a] + f[b] + f[b] * f[a]) % n;
                    lhs == rhs
                })
            });
            if !ok {
                return None;
            }
            let brace = FiniteBrace::new(add.clone(), star).ok()?;
            check_brace(&brace).valid.then_some(brace)
        });
        found.into_iter().flatten().collect()
    }

    /// Chains of subgroups `dℤ/n` along divisor chains, longest first.
    pub fn subgroup_chains(n: usize) -> Vec<Filtration> {
        fn extend(n: usize, last: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if last == n {
                out.push(acc.clone());
                return;
            }
            for d in (last + 1..=n).filter(|d| d % last == 0 && n.is_multiple_of(*d)) {
                acc.push(d);
                extend(n, d, acc, out);
                acc.pop();
            }
        }
        let mut divisor_chains = Vec::new();
        extend(n, 1, &mut Vec::new(), &mut divisor_chains);
        divisor_chains.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        divisor_chains
            .into_iter()
            .map(|ds| {
                let lists: Vec<Vec<usize>> = ds.iter().map(|&d| (0..n).filter(|x| x % d == 0).collect()).collect();
                Filtration::new(n, &lists).unwrap()
            })
            .collect()
    }

    /// Subgroup chains of `ℤ/n` that are ideal filtrations of `b`.
    pub fn ideal_chains(b: &FiniteBrace) -> Vec<Filtration> {
        subgroup_chains(b.order()).into_iter().filter(|c| check_filtration(b, None, c).valid).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn brace_examples() {
        assert!(check_brace(&trivial(cyclic_add(6))).valid);
        assert!(check_brace(&z9()).valid);
        let bad = FiniteBrace::new(cyclic_add(4), (0..4).map(|a| vec![a; 4]).collect()).unwrap();
        let v = check_brace(&bad);
        assert!(!v.valid);
        assert_eq!(v.failure.unwrap().witness.len(), 3);
    }

    #[test]
    fn truss_examples() {
        // ℤ/4 as a ring: ∘ is a monoid, not a group
        let ring =
            FiniteBrace::new(cyclic_add(4), (0..4).map(|a| (0..4).map(|b| a * b % 4).collect()).collect()).unwrap();
        assert!(check_truss(&FiniteTruss { table: ring.clone(), alpha: vec![0; 4] }).valid);
        assert!(!check_brace(&ring).valid);
        assert!(check_truss(&FiniteTruss { table: z9(), alpha: vec![0; 9] }).valid);
        // a*b = 1 for a, b ≠ 0 on ℤ/3: ∘ not associative
        let star = (0..3).map(|a| (0..3).map(|b| usize::from(a != 0 && b != 0)).collect()).collect();
        let t = FiniteTruss { table: FiniteBrace::new(cyclic_add(3), star).unwrap(), alpha: vec![0; 3] };
        let v = check_truss(&t);
        assert_eq!(v.failure.unwrap().axiom, "circ associative");
    }

    #[test]
    fn filtrations() {
        let b = z9();
        let good = Filtration::new(9, &[vec![0, 3, 6], vec![0]]).unwrap();
        assert!(check_filtration(&b, None, &good).valid);
        let short = Filtration::new(9, &[vec![0]]).unwrap();
        assert!(!check_filtration(&b, None, &short).valid);
        assert!(check_filtration(&trivial(cyclic_add(5)), None, &Filtration::new(5, &[vec![0]]).unwrap()).valid);
        assert_eq!(good.degree(3), Some(2));
        assert_eq!(good.degree(1), Some(1));
    }

    #[test]
    fn graded_z9() {
        let b = z9();
        let chain = Filtration::new(9, &[vec![0, 3, 6], vec![0]]).unwrap();
        let g = associated_graded(&b, &chain).unwrap();
        assert_eq!(g.components.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 3]);
        // 1·1 ↦ class of 3 in B₂
        assert_eq!(g.mul(1, 1, 1, 1), 3);
        assert_eq!(pre_lie_defect(&g).failures, 0);
    }

    #[test]
    fn ring_braces() {
        for (name, add, mul) in nilpotent_rings() {
            let b = brace_from_nilpotent_ring(add, mul).unwrap_or_else(|e| panic!("{name}: {e}"));
            let chain = ring_power_filtration(&b).unwrap();
            assert!(check_filtration(&b, None, &chain).valid, "{name}");
            let g = associated_graded(&b, &chain).unwrap();
            assert_eq!(pre_lie_defect(&g).failures, 0, "{name}");
        }
        let (add, _) = even_integers(3);
        let unit_ring = (0..4).map(|a| (0..4).map(|b| a * b % 4).collect()).collect();
        assert!(brace_from_nilpotent_ring(add, unit_ring).is_err());
    }

    #[test]
    fn series_on_non_distributive_brace() {
        let b =
            cyclic_braces(8).into_iter().find(|b| !b.is_right_distributive() && !ideal_chains(b).is_empty()).unwrap();
        let chain = &ideal_chains(&b)[0];
        for a in 0..8 {
            for x in 0..8 {
                for c in 0..8 {
                    let s = distributivity_series(&b, a, x, c, chain.len() + 1);
                    assert!(s.exact_from.is_some(), "{a} {x} {c}: {s:?}");
                }
            }
        }
        assert!(check_degree_bound(&b, chain).valid);
    }
}
