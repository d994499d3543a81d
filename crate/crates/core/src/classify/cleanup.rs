//! Degree-by-degree removal of cyclic classes by elementary substitutions.
//!
//! Potentials are handled in the cyclic-derivative form `G` (symmetrized), where
//! the chain rule holds for arbitrary substitutions. At degree `d` a
//! substitution `v ↦ v + c·w` with `|w| = d − 2` changes the class vector of
//! `G_d` by `c · classes(w · ∂_v G₃)` and leaves lower degrees alone, so the
//! coefficients are found by one linear solve per degree. From degree 6 on,
//! words with `|w| = d − 3` whose cubic effect cancels in degree `d − 1` are
//! added; they act on `G_d` through `G₄` and can remove the class the cubic
//! alone cannot reach.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{AlgebraError, Result};
use crate::field::Scalar;
use crate::linalg;
use crate::poly::FreePoly;
use crate::potential::{cyclic_classes, cyclic_symmetrize, derive_ginzburg};
use crate::subst::{substitute, Substitution};
use crate::word::{Variable, Word};

pub(crate) fn necklaces(d: u32) -> Vec<Word> {
    Word::all_of_degree(d).map(|w| w.necklace()).collect::<BTreeSet<_>>().into_iter().collect()
}

fn class_vector(p: &FreePoly, index: &BTreeMap<Word, usize>) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); index.len()];
    for (n, c) in cyclic_classes(p) {
        if let Some(&i) = index.get(&n) {
            v[i] = c;
        }
    }
    v
}

struct Candidate {
    var: Variable,
    word: Word,
}

/// Cleans `g` (cyclic-derivative form, symmetrized) through `cap`, keeping
/// only the classes returned by `allowed(d)` when the rest cannot be removed.
pub(crate) fn cleanup(
    mut g: FreePoly,
    cap: u32,
    allowed: &dyn Fn(u32) -> Vec<Word>,
) -> Result<(FreePoly, Vec<Substitution>)> {
    let field = g.field();
    let mut trail = Vec::new();
    for d in 4..=cap {
        let g3 = g.homogeneous_part(3);
        let g4 = g.homogeneous_part(4);
        let classes = necklaces(d);
        let index: BTreeMap<Word, usize> = classes.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        let lower = necklaces(d - 1);
        let lower_index: BTreeMap<Word, usize> = lower.iter().enumerate().map(|(i, w)| (*w, i)).collect();

        let current = class_vector(&g.homogeneous_part(d), &index);
        let keep: BTreeSet<Word> = allowed(d).into_iter().map(|w| w.necklace()).collect();
        if current.iter().all(Zero::is_zero) {
            continue;
        }

        let mut cands = Vec::new();
        let mut effect = Vec::new(); // per candidate: degree-d class vector
        let mut pre = Vec::new(); // per candidate: degree-(d−1) class vector
        for var in Variable::ALL {
            let dv3 = derive_ginzburg(&g3, var);
            let dv4 = derive_ginzburg(&g4, var);
            for w in Word::all_of_degree(d - 2) {
                let wp = FreePoly::word(field, None, w);
                effect.push(class_vector(&(&wp * &dv3), &index));
                pre.push(vec![Scalar::zero(); lower.len()]);
                cands.push(Candidate { var, word: w });
            }
            if d >= 6 && !g4.is_zero() {
                for w in Word::all_of_degree(d - 3) {
                    let wp = FreePoly::word(field, None, w);
                    effect.push(class_vector(&(&wp * &dv4), &index));
                    pre.push(class_vector(&(&wp * &dv3), &lower_index));
                    cands.push(Candidate { var, word: w });
                }
            }
        }
        let n = cands.len();
        let target: Vec<Scalar> = current.iter().map(|c| field.neg(c)).collect();
        let system = |skip: &BTreeSet<Word>| {
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for (k, cls) in classes.iter().enumerate() {
                if skip.contains(cls) {
                    continue;
                }
                rows.push((0..n).map(|j| effect[j][k].clone()).collect::<Vec<_>>());
                rhs.push(target[k].clone());
            }
            for k in 0..lower.len() {
                let row: Vec<Scalar> = pre.iter().map(|r| r[k].clone()).collect();
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                    rhs.push(field.zero());
                }
            }
            linalg::solve(&rows, &rhs, n, field)
        };
        let sol = system(&BTreeSet::new())
            .or_else(|| system(&keep))
            .ok_or_else(|| AlgebraError::Invalid(format!("no cleaning substitution in degree {d}")))?;
        if sol.iter().all(Zero::is_zero) {
            continue;
        }
        let mut s = Substitution::identity(field, cap);
        for (c, cand) in sol.iter().zip(&cands) {
            if c.is_zero() {
                continue;
            }
            match cand.var {
                Variable::X => s.image_x.add_term(cand.word, c),
                Variable::Y => s.image_y.add_term(cand.word, c),
            }
        }
        g = cyclic_symmetrize(&substitute(&g, &s, cap)?)?;
        let after = class_vector(&g.homogeneous_part(d), &index);
        if let Some((cls, _)) = classes.iter().zip(&after).find(|(n, c)| !c.is_zero() && !keep.contains(n)) {
            return Err(AlgebraError::Invalid(format!("class {cls:?} survived cleanup in degree {d}")));
        }
        trail.push(s);
    }
    Ok((g, trail))
}
