//! Truncated Buchberger completion in the free algebra modulo words of degree
//! above the cap.
//!
//! Everything here lives in `K⟨x,y⟩ / (words of degree > cap)`. With a local
//! order this quotient is exactly the power-series algebra modulo
//! `m^(cap+1)`, so a completed system yields the filtration layers of the
//! completed quotient in every degree up to the cap.

mod ambiguity;
mod oracle;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::par;
use crate::poly::FreePoly;
use crate::word::{MonomialOrder, OrderMode, Variable, Word};

pub use ambiguity::{ambiguities, s_element, Ambiguity, AmbiguityKind};
pub use oracle::{oracle_dimension, ORACLE_MAX_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteSystem {
    elements: Vec<FreePoly>,
    leading: Vec<Word>,
    order: MonomialOrder,
    cap: u32,
    complete_through: u32,
    field: FieldSpec,
}

impl RewriteSystem {
    /// An (unchecked) system from monic, interreduced elements.
    fn from_elements(elements: Vec<FreePoly>, order: MonomialOrder, cap: u32, field: FieldSpec) -> Self {
        let leading = elements.iter().map(|g| g.leading_word(&order).expect("nonzero element")).collect();
        RewriteSystem { elements, leading, order, cap, complete_through: 0, field }
    }

    pub fn elements(&self) -> &[FreePoly] {
        &self.elements
    }

    pub fn leading_words(&self) -> &[Word] {
        &self.leading
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn complete_through(&self) -> u32 {
        self.complete_through
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// True when `w` contains no leading word as a factor.
    pub fn is_normal(&self, w: &Word) -> bool {
        w.degree() <= self.cap && self.leading.iter().all(|l| !w.contains(l))
    }

    /// First element (basis order) occurring in `w`, with its leftmost position.
    fn find_reducer(&self, w: &Word) -> Option<(usize, u32)> {
        self.leading.iter().enumerate().find_map(|(i, l)| w.find(l, 0).map(|p| (i, p)))
    }

    pub fn record(&self) -> RewriteRecord {
        RewriteRecord {
            order: self.order,
            cap: self.cap,
            field: self.field,
            elements: self.elements.iter().map(|g| g.render_with(self.order.greater)).collect(),
            leading_words: self.leading.iter().map(|w| w.to_string()).collect(),
            complete_through: self.complete_through,
        }
    }
}

/// Serialized rewrite system: elements as polynomial strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteRecord {
    pub order: MonomialOrder,
    pub cap: u32,
    pub field: FieldSpec,
    pub elements: Vec<String>,
    pub leading_words: Vec<String>,
    pub complete_through: u32,
}

/// Pending terms keyed so that `pop_first` yields the most significant word.
struct Worklist {
    order: MonomialOrder,
    terms: BTreeMap<(u32, u64), (Word, Scalar)>,
    field: FieldSpec,
    cap: u32,
}

impl Worklist {
    fn new(f: &FreePoly, order: MonomialOrder, cap: u32) -> Self {
        let mut wl = Worklist { order, terms: BTreeMap::new(), field: f.field(), cap };
        for (w, c) in f.terms() {
            wl.add(*w, c);
        }
        wl
    }

    fn key(&self, w: &Word) -> (u32, u64) {
        let deg = match self.order.mode {
            OrderMode::Local => w.degree(),
            OrderMode::Global => u32::MAX - w.degree(),
        };
        let lex = match self.order.greater {
            Variable::X => w.bits(),
            Variable::Y => !w.bits(),
        };
        (deg, lex)
    }

    fn add(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() || w.degree() > self.cap {
            return;
        }
        let k = self.key(&w);
        let field = self.field;
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert((w, c.clone()));
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(&e.get().1, c);
                if s.is_zero() {
                    e.remove();
                } else {
                    e.get_mut().1 = s;
                }
            }
        }
    }

    fn pop(&mut self) -> Option<(Word, Scalar)> {
        self.terms.pop_first().map(|(_, v)| v)
    }
}

/// Fully reduces `f`: the most significant reducible term is rewritten first,
/// using the first element (basis order) at its leftmost occurrence.
pub fn normal_form(f: &FreePoly, g: &RewriteSystem) -> FreePoly {
    let cap = g.cap.min(f.cap().unwrap_or(g.cap));
    let field = g.field;
    let mut work = Worklist::new(f, g.order, cap);
    let mut done = FreePoly::zero(field, Some(cap));
    while let Some((w, c)) = work.pop() {
        match g.find_reducer(&w) {
            None => done.add_term(w, &c),
            Some((i, pos)) => {
                let lead = g.leading[i];
                let u = w.prefix(pos);
                let v = w.suffix(w.degree() - pos - lead.degree());
                let extra = u.degree() + v.degree();
                for (t, a) in g.elements[i].terms() {
                    if *t == lead || t.degree() + extra > cap {
                        continue;
                    }
                    work.add(u.concat(t).concat(&v), &field.neg(&field.mul(a, &c)));
                }
            }
        }
    }
    done
}

struct Pending {
    queue: BTreeMap<(u32, u64), FreePoly>,
    seq: u64,
}

impl Pending {
    fn push(&mut self, degree: u32, p: FreePoly) {
        if p.is_zero() {
            return;
        }
        self.queue.insert((degree, self.seq), p);
        self.seq += 1;
    }

    /// All entries sharing the smallest degree key, in insertion order.
    fn pop_batch(&mut self) -> Vec<FreePoly> {
        let Some((&(d, _), _)) = self.queue.first_key_value() else {
            return Vec::new();
        };
        let mut out = Vec::new();
        while let Some(e) = self.queue.first_entry() {
            if e.key().0 != d {
                break;
            }
            out.push(e.remove());
        }
        out
    }
}

/// Completes `relations` to an interreduced system whose ambiguities of
/// witness degree ≤ `cap` all resolve.
pub fn complete(relations: &[FreePoly], order: MonomialOrder, cap: u32) -> Result<RewriteSystem> {
    let field = relations.first().map(FreePoly::field).unwrap_or_default();
    if let Some(bad) = relations.iter().find(|r| r.field() != field) {
        return Err(AlgebraError::FieldMismatch(field.to_string(), bad.field().to_string()));
    }
    if cap > crate::word::MAX_DEGREE {
        return Err(AlgebraError::ResourceCap(format!("cap {cap} exceeds word capacity")));
    }
    let mut sys = RewriteSystem::from_elements(Vec::new(), order, cap, field);
    let mut pending = Pending { queue: BTreeMap::new(), seq: 0 };
    for r in relations {
        let r = r.truncate(cap);
        if r.is_zero() {
            log::debug!("dropping zero relation");
            continue;
        }
        let d = r.leading_word(&order).map_or(0, |w| w.degree());
        pending.push(d, r);
    }

    loop {
        while !pending.queue.is_empty() {
            let batch = pending.pop_batch();
            let reduced = {
                let snapshot = &sys;
                par::map(&batch, |p| normal_form(p, snapshot))
            };
            for r in reduced {
                let r = normal_form(&r, &sys);
                if r.is_zero() {
                    continue;
                }
                insert(&mut sys, r, &mut pending)?;
            }
        }
        // Global mode: words above the cap vanish, so u·g·v with a truncated
        // leading word still contributes its surviving tail.
        if order.mode == OrderMode::Global {
            for p in truncation_consequences(&sys) {
                let d = p.leading_word(&order).map_or(0, |w| w.degree());
                pending.push(d, p);
            }
        }
        // final check over the current basis
        let open: Vec<FreePoly> = par::map(&ambiguities(&sys), |a| normal_form(&s_element(&sys, a), &sys));
        for (a, r) in ambiguities(&sys).iter().zip(open) {
            pending.push(a.witness.degree(), r);
        }
        if pending.queue.is_empty() {
            break;
        }
    }
    interreduce_tails(&mut sys);
    canonical_sort(&mut sys);
    sys.complete_through = cap;
    Ok(sys)
}

fn insert(sys: &mut RewriteSystem, r: FreePoly, pending: &mut Pending) -> Result<()> {
    let g = r.monic(&sys.order)?;
    let lead = g.leading_word(&sys.order).expect("nonzero");
    // elements whose leading word contains the new one are no longer minimal
    let mut keep_el = Vec::new();
    let mut keep_lead = Vec::new();
    for (e, l) in sys.elements.drain(..).zip(sys.leading.drain(..)) {
        if l.contains(&lead) {
            pending.push(l.degree(), e);
        } else {
            keep_el.push(e);
            keep_lead.push(l);
        }
    }
    sys.elements = keep_el;
    sys.leading = keep_lead;
    sys.elements.push(g);
    sys.leading.push(lead);
    let new_idx = sys.elements.len() - 1;
    for a in ambiguity::ambiguities_with(sys, new_idx) {
        let s = s_element(sys, &a);
        pending.push(a.witness.degree(), s);
    }
    Ok(())
}

fn truncation_consequences(sys: &RewriteSystem) -> Vec<FreePoly> {
    let cap = sys.cap;
    let mut out = Vec::new();
    for (g, l) in sys.elements.iter().zip(&sys.leading) {
        let low = g.low_degree().unwrap_or(0);
        if l.degree() == low {
            continue;
        }
        let excess = cap + 1 - l.degree();
        if low + excess > cap {
            continue;
        }
        for du in 0..=excess {
            for u in Word::all_of_degree(du) {
                for v in Word::all_of_degree(excess - du) {
                    let mut p = FreePoly::zero(sys.field, Some(cap));
                    g.add_scaled_sandwich_into(&mut p, &sys.field.one(), &u, &v);
                    if !p.is_zero() {
                        let r = normal_form(&p, sys);
                        if !r.is_zero() {
                            out.push(r);
                        }
                    }
                }
            }
        }
    }
    out
}

fn interreduce_tails(sys: &mut RewriteSystem) {
    for i in 0..sys.elements.len() {
        let lead = sys.leading[i];
        let g = &sys.elements[i];
        let tail = g.filter(|w| *w != lead);
        let others = RewriteSystem {
            elements: sys.elements.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, e)| e.clone()).collect(),
            leading: sys.leading.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, l)| *l).collect(),
            ..sys.clone()
        };
        let mut reduced = normal_form(&tail, &others);
        reduced.add_term(lead, &sys.field.one());
        sys.elements[i] = reduced;
    }
}

/// Sorts elements by leading word (significance descending) so the final
/// basis does not depend on insertion history.
fn canonical_sort(sys: &mut RewriteSystem) {
    let order = sys.order;
    let mut pairs: Vec<(Word, FreePoly)> = sys.leading.drain(..).zip(sys.elements.drain(..)).collect();
    pairs.sort_by(|a, b| order.significance(&b.0, &a.0));
    for (l, e) in pairs {
        sys.leading.push(l);
        sys.elements.push(e);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn p(terms: &[(&str, i64)]) -> FreePoly {
        FreePoly::from_ints(Q, None, terms)
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn r1() -> Vec<FreePoly> {
        vec![p(&[("xy", 1), ("yx", 1)]), p(&[("xx", 1), ("yyy", 1)])]
    }

    #[test]
    fn completion_of_r1() {
        let g = complete(&r1(), MonomialOrder::default(), 8).unwrap();
        let mut leads: Vec<Word> = g.leading_words().to_vec();
        leads.sort();
        let mut expect = vec![w("xy"), w("xx"), w("yyyx"), w("yyyyyy")];
        expect.sort();
        assert_eq!(leads, expect);
        assert_eq!(g.complete_through(), 8);
    }

    #[test]
    fn normal_form_examples() {
        let g = complete(&r1(), MonomialOrder::default(), 8).unwrap();
        assert!(normal_form(&p(&[("xy", 1), ("yx", 1)]), &g).is_zero());
        assert_eq!(normal_form(&p(&[("xx", 1)]), &g), p(&[("yyy", -1)]));
        assert_eq!(normal_form(&p(&[("xxy", 1)]), &g), p(&[("yyyy", -1)]));
        for e in g.elements() {
            assert!(normal_form(e, &g).is_zero());
        }
    }

    #[test]
    fn squares_are_already_complete() {
        let rels = vec![p(&[("xx", 1)]), p(&[("yy", 1)])];
        let g = complete(&rels, MonomialOrder::default(), 8).unwrap();
        assert_eq!(g.elements(), &rels[..]);
    }

    #[test]
    fn global_mode_terminates_under_cap() {
        let g = complete(&r1(), MonomialOrder::global(Variable::X), 7).unwrap();
        assert!(!g.is_empty());
        for e in g.elements() {
            assert!(normal_form(e, &g).is_zero());
        }
    }

    #[test]
    fn prime_field_completion() {
        let f5 = FieldSpec::Prime(5);
        let rels = vec![
            FreePoly::from_ints(f5, None, &[("xy", 1), ("yx", 1)]),
            FreePoly::from_ints(f5, None, &[("xx", 2), ("yyy", 1)]),
        ];
        let g = complete(&rels, MonomialOrder::default(), 8).unwrap();
        assert_eq!(g.elements()[0].leading_term(&g.order()).unwrap().1, f5.one());
    }
}
