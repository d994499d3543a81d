//! Dense exact linear algebra over a `FieldSpec`.

use num_traits::Zero;

use crate::field::{FieldSpec, Scalar};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Scalar>>, field: FieldSpec) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]).expect("nonzero");
        for v in rows[r].iter_mut() {
            *v = field.mul(v, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let a = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = field.sub(v, &field.mul(&a, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Scalar>], field: FieldSpec) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, field).len()
}

/// Basis of `{x : M·x = 0}` for an `m × ncols` matrix given by rows.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize, field: FieldSpec) -> Vec<Vec<Scalar>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, field);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![Scalar::zero(); ncols];
        x[free] = field.one();
        for (row, &pc) in m.iter().zip(&pivots) {
            x[pc] = field.neg(&row[free]);
        }
        out.push(x);
    }
    out
}

/// One solution of `M·x = b`, if any (free variables set to zero).
pub fn solve(rows: &[Vec<Scalar>], rhs: &[Scalar], ncols: usize, field: FieldSpec) -> Option<Vec<Scalar>> {
    let mut m: Vec<Vec<Scalar>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    if m.is_empty() {
        return Some(vec![Scalar::zero(); ncols]);
    }
    let pivots = rref(&mut m, field);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); ncols];
    for (row, &pc) in m.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_integer(n.into())
    }

    fn m(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let f = FieldSpec::Rationals;
        assert_eq!(rank(&a, f), 2);
        let ker = nullspace(&a, 3, f);
        assert_eq!(ker.len(), 1);
        for row in &a {
            let dot = row.iter().zip(&ker[0]).fold(q(0), |s, (x, y)| s + x * y);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solving() {
        let f = FieldSpec::Rationals;
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve(&a, &[q(3), q(1)], 2, f), Some(vec![q(2), q(1)]));
        let b = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&b, &[q(1), q(3)], 2, f), None);
        // over F_3, 2·x = 1 has x = 2
        let f3 = FieldSpec::Prime(3);
        assert_eq!(solve(&m(&[&[2]]), &[q(1)], 1, f3), Some(vec![q(2)]));
    }
}
