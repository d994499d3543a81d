//! Hilbert layers by plain linear algebra, independent of the rewriting code.
//!
//! The ideal `I + m^(cap+1)` restricted to words of degree ≤ cap is spanned by
//! the truncated products `u·r·v`. Sorting columns by degree and eliminating
//! on the lowest-degree entry leaves one pivot per dimension of the
//! associated graded ideal in each degree.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::error::{AlgebraError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::par;
use crate::poly::FreePoly;
use crate::word::Word;

/// Largest cap accepted; the column count is `2^(cap+1) − 1`.
pub const ORACLE_MAX_CAP: u32 = 14;

type Row = BTreeMap<usize, Scalar>;

fn column(w: &Word) -> usize {
    // words of degree d occupy [2^d − 1, 2^(d+1) − 1)
    ((1usize << w.degree()) - 1) + w.bits() as usize
}

fn column_degree(c: usize) -> u32 {
    (usize::BITS - (c + 1).leading_zeros()) - 1
}

/// `h_0..=h_cap` of `K⟨⟨x,y⟩⟩ / (relations)`.
pub fn oracle_dimension(relations: &[FreePoly], cap: u32) -> Result<Vec<u64>> {
    if cap > ORACLE_MAX_CAP {
        return Err(AlgebraError::ResourceCap(format!("oracle cap {cap} > {ORACLE_MAX_CAP}")));
    }
    let field = relations.first().map(FreePoly::field).unwrap_or_default();
    let rels: Vec<&FreePoly> = relations.iter().filter(|r| !r.truncate(cap).is_zero()).collect();

    // (relation, left factor) jobs; right factors enumerated inside
    let mut jobs = Vec::new();
    for (i, r) in rels.iter().enumerate() {
        let low = r.low_degree().unwrap();
        for du in 0..=(cap - low) {
            for u in Word::all_of_degree(du) {
                jobs.push((i, u, cap - low - du));
            }
        }
    }
    let chunks: Vec<Vec<Row>> = par::map(&jobs, |(i, u, room)| {
        let r = rels[*i];
        let mut rows = Vec::new();
        for dv in 0..=*room {
            for v in Word::all_of_degree(dv) {
                let mut row = Row::new();
                for (w, c) in r.terms() {
                    let t = u.concat(w).concat(&v);
                    if t.degree() <= cap {
                        row.insert(column(&t), c.clone());
                    }
                }
                rows.push(row);
            }
        }
        rows
    });

    let mut pivots: HashMap<usize, Row> = HashMap::new();
    for row in chunks.into_iter().flatten() {
        insert_row(row, &mut pivots, field);
    }
    let mut h: Vec<u64> = (0..=cap).map(|n| 1u64 << n).collect();
    for c in pivots.keys() {
        h[column_degree(*c) as usize] -= 1;
    }
    Ok(h)
}

fn insert_row(mut row: Row, pivots: &mut HashMap<usize, Row>, field: FieldSpec) {
    while let Some((&c, a)) = row.first_key_value() {
        match pivots.get(&c) {
            Some(p) => {
                let a = a.clone();
                for (k, b) in p {
                    let e = row.entry(*k).or_insert_with(Scalar::zero);
                    *e = field.sub(e, &field.mul(&a, b));
                    if e.is_zero() {
                        row.remove(k);
                    }
                }
            }
            None => {
                let inv = field.inv(a).expect("nonzero pivot");
                for v in row.values_mut() {
                    *v = field.mul(v, &inv);
                }
                pivots.insert(c, row);
                return;
            }
        }
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
    fn column_layout() {
        for w in Word::all_up_to(6) {
            assert_eq!(column_degree(column(&w)), w.degree());
        }
        assert_eq!(column(&Word::EMPTY), 0);
    }

    #[test]
    fn r1_layers() {
        let rels = vec![p(&[("xy", 1), ("yx", 1)]), p(&[("xx", 1), ("yyy", 1)])];
        assert_eq!(oracle_dimension(&rels, 8).unwrap(), vec![1, 2, 2, 2, 1, 1, 0, 0, 0]);
    }

    #[test]
    fn dim8_layers() {
        let rels = vec![p(&[("xx", 1), ("yxy", 2)]), p(&[("yy", 1), ("xyx", 2)])];
        assert_eq!(oracle_dimension(&rels, 7).unwrap(), vec![1, 2, 2, 2, 1, 0, 0, 0]);
    }

    #[test]
    fn free_algebra() {
        assert_eq!(oracle_dimension(&[], 3).unwrap(), vec![1, 2, 4, 8]);
    }

    #[test]
    fn cap_guard() {
        assert!(matches!(oracle_dimension(&[], 20), Err(AlgebraError::ResourceCap(_))));
    }
}
