//! Normal-word bases, Hilbert layers, multiplication tables and invariants
//! of quotients by a completed rewrite system.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::field::{format_scalar, FieldSpec, Scalar};
use crate::linalg;
use crate::par;
use crate::poly::FreePoly;
use crate::rewrite::{normal_form, RewriteSystem};
use crate::word::{Variable, Word};

/// Enumerating more normal words than this is reported as a resource cap.
pub const MAX_BASIS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Growth {
    BoundedConstant,
    Growing,
}

#[derive(Debug, Clone)]
pub struct QuotientAlgebra {
    pub system: RewriteSystem,
    /// Normal words by degree, then lex with the greater variable first.
    pub basis: Vec<Word>,
    pub hilbert: Vec<u64>,
    pub finite: bool,
    pub first_empty_degree: Option<u32>,
    pub growth: Option<Growth>,
}

impl QuotientAlgebra {
    pub fn dimension(&self) -> Option<u64> {
        self.finite.then(|| self.hilbert.iter().sum())
    }

    pub fn field(&self) -> FieldSpec {
        self.system.field()
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.basis.iter().position(|b| b == w)
    }
}

fn lex_key(w: &Word, greater: Variable) -> u64 {
    match greater {
        Variable::X => w.bits(),
        Variable::Y => !w.bits(),
    }
}

/// Normal words through `complete_through`, grown letter by letter (normal
/// words are factor-closed, so every normal word extends a normal prefix).
pub fn hilbert(g: &RewriteSystem) -> Result<QuotientAlgebra> {
    let top = g.complete_through();
    let greater = g.order().greater;
    // a relation with a unit constant term kills everything
    let unit = if g.is_normal(&Word::EMPTY) { vec![Word::EMPTY] } else { Vec::new() };
    let mut basis = unit.clone();
    let mut layer = unit;
    let mut hilbert = vec![layer.len() as u64];
    for _ in 1..=top {
        if layer.is_empty() {
            break;
        }
        let mut next: Vec<Word> = layer
            .iter()
            .flat_map(|w| Variable::ALL.map(|v| w.concat(&Word::letter(v))))
            .filter(|w| g.is_normal(w))
            .collect();
        next.sort_by_key(|w| lex_key(w, greater));
        hilbert.push(next.len() as u64);
        basis.extend_from_slice(&next);
        if basis.len() > MAX_BASIS {
            return Err(AlgebraError::ResourceCap(format!("more than {MAX_BASIS} normal words")));
        }
        layer = next;
    }
    let first_empty_degree = hilbert.iter().position(|&h| h == 0).map(|d| d as u32);
    let finite = first_empty_degree.is_some();
    if finite {
        hilbert.pop();
    }
    let growth = (!finite).then(|| {
        let n = hilbert.len();
        if n >= 4 && hilbert[n - 3..].iter().all(|&h| h == hilbert[n - 1]) {
            Growth::BoundedConstant
        } else {
            Growth::Growing
        }
    });
    Ok(QuotientAlgebra { system: g.clone(), basis, hilbert, finite, first_empty_degree, growth })
}

/// Structure constants `b_i · b_j = Σ_k table[i][j][k] b_k` of a finite
/// algebra with a graded word basis whose first element is the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultTable {
    pub field: FieldSpec,
    pub basis: Vec<Word>,
    pub table: Vec<Vec<Vec<Scalar>>>,
}

impl MultTable {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.basis.iter().map(Word::degree).collect()
    }

    /// Product of coordinate vectors.
    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for (i, ai) in a.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = f.mul(ai, bj);
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = f.add(&out[k], &f.mul(&c, t));
                    }
                }
            }
        }
        out
    }

    pub fn unit_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        (0..n * n * n).all(|t| {
            let (i, j, k) = (t / (n * n), (t / n) % n, t % n);
            let (a, b, c) = (self.unit_vector(i), self.unit_vector(j), self.unit_vector(k));
            self.mul(&self.mul(&a, &b), &c) == self.mul(&a, &self.mul(&b, &c))
        })
    }

    /// Reduction modulo `p`; fails if some denominator vanishes mod `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<MultTable> {
        let f = FieldSpec::prime(p)?;
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(|c| f.element(c)).collect::<Result<Vec<_>>>()).collect())
            .collect::<Result<Vec<Vec<Vec<Scalar>>>>>()?;
        Ok(MultTable { field: f, basis: self.basis.clone(), table })
    }

    pub fn record(&self) -> TableRecord {
        let mut table = BTreeMap::new();
        for (i, u) in self.basis.iter().enumerate() {
            for (j, v) in self.basis.iter().enumerate() {
                let key = format!("{u:?},{v:?}");
                table.insert(key, self.table[i][j].iter().map(format_scalar).collect());
            }
        }
        TableRecord {
            basis: self.basis.iter().map(|w| format!("{w:?}")).collect(),
            hilbert: hilbert_of(&self.basis),
            finite: true,
            table,
        }
    }
}

impl MultTable {
    /// Inverse of [`MultTable::record`]; coefficients are read into `field`.
    pub fn from_record(rec: &TableRecord, field: FieldSpec) -> Result<MultTable> {
        let word = |s: &str| {
            if s == "1" {
                Some(Word::EMPTY)
            } else {
                Word::parse(s).filter(|w| !w.is_empty())
            }
        };
        let basis = rec
            .basis
            .iter()
            .map(|s| word(s).ok_or_else(|| AlgebraError::Invalid(format!("bad basis word {s:?}"))))
            .collect::<Result<Vec<Word>>>()?;
        let n = basis.len();
        let mut table = vec![vec![vec![Scalar::zero(); n]; n]; n];
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                let key = format!("{u:?},{v:?}");
                let row = rec.table.get(&key).ok_or_else(|| AlgebraError::Invalid(format!("missing product {key}")))?;
                if row.len() != n {
                    return Err(AlgebraError::Invalid(format!(
                        "product {key} has {} coordinates, expected {n}",
                        row.len()
                    )));
                }
                for (k, c) in row.iter().enumerate() {
                    let q = crate::field::parse_scalar(c)
                        .ok_or_else(|| AlgebraError::Invalid(format!("bad coefficient {c:?} in {key}")))?;
                    table[i][j][k] = field.element(&q)?;
                }
            }
        }
        Ok(MultTable { field, basis, table })
    }
}

fn hilbert_of(basis: &[Word]) -> Vec<u64> {
    let top = basis.iter().map(Word::degree).max().unwrap_or(0);
    let mut h = vec![0u64; top as usize + 1];
    for w in basis {
        h[w.degree() as usize] += 1;
    }
    h
}

/// JSON layout: words as letter strings, the empty word as `"1"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRecord {
    pub basis: Vec<String>,
    pub hilbert: Vec<u64>,
    pub finite: bool,
    pub table: BTreeMap<String, Vec<String>>,
}

pub fn mult_table(q: &QuotientAlgebra) -> Result<MultTable> {
    if !q.finite {
        return Err(AlgebraError::NotFinite(q.system.complete_through()));
    }
    let n = q.basis.len();
    let field = q.field();
    let index: HashMap<Word, usize> = q.basis.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let cap = q.system.cap();
    let entries = par::map_range(n * n, |t| {
        let (u, v) = (q.basis[t / n], q.basis[t % n]);
        let mut out = vec![Scalar::zero(); n];
        let w = u.concat(&v);
        if w.degree() <= cap {
            let nf = normal_form(&FreePoly::word(field, Some(cap), w), &q.system);
            for (b, c) in nf.terms() {
                out[index[b]] = c.clone();
            }
        }
        out
    });
    let mut table = vec![Vec::with_capacity(n); n];
    for (t, e) in entries.into_iter().enumerate() {
        table[t / n].push(e);
    }
    Ok(MultTable { field, basis: q.basis.clone(), table })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantProfile {
    pub hilbert: Vec<u64>,
    /// `dim R^k` for k = 1, 2, ... until zero (the trailing zero included).
    pub radical_powers: Vec<usize>,
    pub left_annihilator: usize,
    pub right_annihilator: usize,
    pub two_sided_annihilator: usize,
    pub center: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub square_zero_count: Option<u64>,
}

/// Largest `p^dim` enumerated for the square-zero count.
pub const MAX_SQUARE_ZERO_ENUM: u64 = 1 << 24;

pub fn invariant_profile(t: &MultTable) -> Result<InvariantProfile> {
    let field = t.field;
    let n = t.dim();
    let radical: Vec<usize> = (0..n).filter(|&i| t.basis[i].degree() > 0).collect();

    let mut powers = Vec::new();
    let mut current: Vec<Vec<Scalar>> = radical.iter().map(|&i| t.unit_vector(i)).collect();
    loop {
        linalg::rref(&mut current, field);
        powers.push(current.len());
        if current.is_empty() {
            break;
        }
        let next: Vec<Vec<Scalar>> = radical
            .iter()
            .flat_map(|&i| current.iter().map(move |c| (i, c)))
            .map(|(i, c)| t.mul(&t.unit_vector(i), c))
            .collect();
        if powers.len() > n + 1 {
            break;
        }
        current = next;
    }

    // a ↦ a·r (resp. r·a) for each radical r: one row per (r, output coordinate)
    let action_rows = |left: bool| -> Vec<Vec<Scalar>> {
        let mut rows = Vec::new();
        for &r in &radical {
            for k in 0..n {
                rows.push(
                    (0..n).map(|i| if left { t.table[i][r][k].clone() } else { t.table[r][i][k].clone() }).collect(),
                );
            }
        }
        rows
    };
    let l_rows = action_rows(true);
    let r_rows = action_rows(false);
    let left = n - linalg::rank(&l_rows, field);
    let right = n - linalg::rank(&r_rows, field);
    let both: Vec<Vec<Scalar>> = l_rows.iter().chain(&r_rows).cloned().collect();
    let two = n - linalg::rank(&both, field);

    let mut c_rows = Vec::new();
    for &r in &radical {
        for k in 0..n {
            c_rows.push((0..n).map(|i| field.sub(&t.table[i][r][k], &t.table[r][i][k])).collect());
        }
    }
    let center = n - linalg::rank(&c_rows, field);

    let square_zero_count = match field {
        FieldSpec::Rationals => None,
        FieldSpec::Prime(p) => Some(square_zero_count(t, p)?),
    };
    Ok(InvariantProfile {
        hilbert: hilbert_of(&t.basis),
        radical_powers: powers,
        left_annihilator: left,
        right_annihilator: right,
        two_sided_annihilator: two,
        center,
        square_zero_count,
    })
}

/// `|{a ∈ A : a² = 0}|` by enumerating all `p^dim` elements.
pub fn square_zero_count(t: &MultTable, p: u64) -> Result<u64> {
    let n = t.dim();
    let total = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > MAX_SQUARE_ZERO_ENUM as u128 {
        return Err(AlgebraError::ResourceCap(format!("{p}^{n} elements to enumerate")));
    }
    let f = FieldSpec::Prime(p);
    // nonzero structure constants (i, j, k, c)
    let mut entries = Vec::new();
    for (i, row) in t.table.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            for (k, c) in v.iter().enumerate() {
                let r = f.residue(c);
                if r != 0 {
                    entries.push((i, j, k, r));
                }
            }
        }
    }
    let total = total as u64;
    let chunk = 4096u64;
    let counts = par::map_range(total.div_ceil(chunk) as usize, |c| {
        let mut count = 0u64;
        let mut a = vec![0u64; n];
        let mut sq = vec![0u64; n];
        for idx in (c as u64 * chunk)..((c as u64 + 1) * chunk).min(total) {
            let mut r = idx;
            for slot in a.iter_mut() {
                *slot = r % p;
                r /= p;
            }
            sq.iter_mut().for_each(|s| *s = 0);
            for &(i, j, k, v) in &entries {
                sq[k] = (sq[k] + a[i] * a[j] % p * v) % p;
            }
            if sq.iter().all(|&s| s == 0) {
                count += 1;
            }
        }
        count
    });
    Ok(counts.into_iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::complete;
    use crate::word::MonomialOrder;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn p(terms: &[(&str, i64)]) -> FreePoly {
        FreePoly::from_ints(Q, None, terms)
    }

    fn algebra(rels: &[FreePoly], cap: u32) -> QuotientAlgebra {
        hilbert(&complete(rels, MonomialOrder::default(), cap).unwrap()).unwrap()
    }

    fn r1() -> Vec<FreePoly> {
        vec![p(&[("xy", 1), ("yx", 1)]), p(&[("xx", 1), ("yyy", 1)])]
    }

    fn r2() -> Vec<FreePoly> {
        vec![p(&[("xy", 1), ("yx", 1)]), p(&[("xx", 1), ("yyy", 1), ("yyyy", 1)])]
    }

    #[test]
    fn r1_basis() {
        let q = algebra(&r1(), 8);
        assert!(q.finite);
        assert_eq!(q.hilbert, vec![1, 2, 2, 2, 1, 1]);
        assert_eq!(q.dimension(), Some(9));
        assert_eq!(q.first_empty_degree, Some(6));
        let words: Vec<String> = q.basis.iter().map(|w| format!("{w:?}")).collect();
        assert_eq!(words, ["1", "x", "y", "yx", "yy", "yyx", "yyy", "yyyy", "yyyyy"]);
    }

    #[test]
    fn r2_table_entries() {
        let q = algebra(&r2(), 8);
        let t = mult_table(&q).unwrap();
        let x = q.index_of(&Word::parse("x").unwrap()).unwrap();
        let y = q.index_of(&Word::parse("y").unwrap()).unwrap();
        let y3 = q.index_of(&Word::parse("yyy").unwrap()).unwrap();
        let y4 = q.index_of(&Word::parse("yyyy").unwrap()).unwrap();
        let xx = &t.table[x][x];
        for (k, c) in xx.iter().enumerate() {
            let want = if k == y3 || k == y4 { -1 } else { 0 };
            assert_eq!(*c, Q.from_int(want), "coordinate {k}");
        }
        assert_eq!(t.table[0][x], t.unit_vector(x));
        assert!(t.is_associative());
        let xy = &t.table[x][y];
        let yx: Vec<Scalar> = t.table[y][x].iter().map(|c| -c).collect();
        assert_eq!(xy, &yx);
    }

    #[test]
    fn unit_relation_gives_zero_algebra() {
        let g = complete(&[FreePoly::from_ints(Q, None, &[("", 1), ("x", 1)])], MonomialOrder::default(), 4).unwrap();
        let q = hilbert(&g).unwrap();
        assert_eq!((q.dimension(), q.basis.len()), (Some(0), 0));
    }

    #[test]
    fn growth_for_odd_tail() {
        // cyc(x²y) + y⁵
        let rels = vec![p(&[("xy", 1), ("yx", 1)]), p(&[("xx", 1), ("yyyy", 1)])];
        let q = algebra(&rels, 16);
        assert!(!q.finite);
        assert_eq!(q.growth, Some(Growth::BoundedConstant));
    }

    #[test]
    fn profiles() {
        let t1 = mult_table(&algebra(&r1(), 8)).unwrap();
        let prof = invariant_profile(&t1).unwrap();
        assert_eq!(prof.hilbert, vec![1, 2, 2, 2, 1, 1]);
        assert_eq!(prof.radical_powers[0], 8);
        assert_eq!(*prof.radical_powers.last().unwrap(), 0);
        assert!(prof.square_zero_count.is_none());
        let t3 = t1.reduce_mod(3).unwrap();
        let prof3 = invariant_profile(&t3).unwrap();
        assert!(prof3.square_zero_count.unwrap() >= 1);

        // k[x]/(x²): radical spanned by x
        let q = algebra(&[p(&[("xx", 1)]), p(&[("y", 1)])], 4);
        let prof = invariant_profile(&mult_table(&q).unwrap()).unwrap();
        assert_eq!(prof.radical_powers, vec![1, 0]);
        assert_eq!(prof.left_annihilator, 1);
        assert_eq!(prof.center, 2);
    }

    #[test]
    fn trivial_radical() {
        let q = algebra(&[p(&[("x", 1)]), p(&[("y", 1)])], 3);
        let prof = invariant_profile(&mult_table(&q).unwrap()).unwrap();
        assert_eq!(prof.left_annihilator, 1);
        assert_eq!(prof.two_sided_annihilator, 1);
        assert_eq!(prof.radical_powers, vec![0]);
    }
}
