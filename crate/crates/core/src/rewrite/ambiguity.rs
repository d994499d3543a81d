use serde::{Deserialize, Serialize};

use crate::poly::FreePoly;
use crate::word::Word;

use super::RewriteSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmbiguityKind {
    Overlap,
    Inclusion,
}

/// A word with two reductions. For an overlap, `witness = lead(left) · right_tail
/// = left_head · lead(right)`; for an inclusion, `witness = lead(left) =
/// prefix · lead(right) · suffix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambiguity {
    pub kind: AmbiguityKind,
    pub left: usize,
    pub right: usize,
    pub witness: Word,
    /// Words multiplying `left` on the right (overlap) or `right` on the left.
    pub left_factor: Word,
    pub right_factor: Word,
}

fn pair(sys: &RewriteSystem, i: usize, j: usize, out: &mut Vec<Ambiguity>) {
    let li = sys.leading[i];
    let lj = sys.leading[j];
    let (ni, nj) = (li.degree(), lj.degree());
    for k in 1..ni.min(nj) {
        if li.suffix(k) == lj.prefix(k) {
            let tail = lj.suffix(nj - k);
            let head = li.prefix(ni - k);
            let witness = li.concat(&tail);
            if witness.degree() <= sys.cap {
                out.push(Ambiguity {
                    kind: AmbiguityKind::Overlap,
                    left: i,
                    right: j,
                    witness,
                    left_factor: head,
                    right_factor: tail,
                });
            }
        }
    }
    if i != j && nj <= ni {
        if let Some(p) = li.find(&lj, 0) {
            out.push(Ambiguity {
                kind: AmbiguityKind::Inclusion,
                left: i,
                right: j,
                witness: li,
                left_factor: li.prefix(p),
                right_factor: li.suffix(ni - p - nj),
            });
        }
    }
}

/// All overlap and inclusion ambiguities with witness degree ≤ cap.
pub fn ambiguities(sys: &RewriteSystem) -> Vec<Ambiguity> {
    let n = sys.leading.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            pair(sys, i, j, &mut out);
        }
    }
    out
}

/// Ambiguities involving element `k` on either side.
pub(super) fn ambiguities_with(sys: &RewriteSystem, k: usize) -> Vec<Ambiguity> {
    let n = sys.leading.len();
    let mut out = Vec::new();
    for j in 0..n {
        pair(sys, k, j, &mut out);
        if j != k {
            pair(sys, j, k, &mut out);
        }
    }
    out
}

/// The difference of the two reductions of the witness, truncated at the cap.
pub fn s_element(sys: &RewriteSystem, a: &Ambiguity) -> FreePoly {
    let field = sys.field;
    let one = field.one();
    let minus = field.neg(&one);
    let mut out = FreePoly::zero(field, Some(sys.cap));
    let gi = &sys.elements[a.left];
    let gj = &sys.elements[a.right];
    match a.kind {
        AmbiguityKind::Overlap => {
            gi.add_scaled_sandwich_into(&mut out, &one, &Word::EMPTY, &a.right_factor);
            gj.add_scaled_sandwich_into(&mut out, &minus, &a.left_factor, &Word::EMPTY);
        }
        AmbiguityKind::Inclusion => {
            gi.add_scaled_sandwich_into(&mut out, &one, &Word::EMPTY, &Word::EMPTY);
            gj.add_scaled_sandwich_into(&mut out, &minus, &a.left_factor, &a.right_factor);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::complete;
    use super::*;
    use crate::field::FieldSpec;
    use crate::word::MonomialOrder;

    #[test]
    fn r1_overlaps_resolve() {
        let rels = vec![
            FreePoly::from_ints(FieldSpec::Rationals, None, &[("xy", 1), ("yx", 1)]),
            FreePoly::from_ints(FieldSpec::Rationals, None, &[("xx", 1), ("yyy", 1)]),
        ];
        let g = complete(&rels, MonomialOrder::default(), 8).unwrap();
        let amb = ambiguities(&g);
        assert!(amb.iter().any(|a| a.witness == Word::parse("xxx").unwrap()));
        assert!(amb.iter().all(|a| a.kind == AmbiguityKind::Overlap));
        for a in &amb {
            assert!(super::super::normal_form(&s_element(&g, a), &g).is_zero(), "{a:?}");
        }
    }
}
