use proptest::prelude::*;

use potalg::brace::{distributivity_series, examples, FiniteBrace};
use potalg::potential::is_cyclically_invariant;
use potalg::reproduce::{potential, quotient, sample};
use potalg::{
    complete, cyclicize, derive_ginzburg, derive_simple, normal_form, oracle_dimension, par, parse_poly, substitute,
    syzygy_residual, DerivativeMode, FieldSpec, FreePoly, MonomialOrder, Potential, Variable, Word,
};

const Q: FieldSpec = FieldSpec::Rationals;

fn word() -> impl Strategy<Value = Word> {
    (1u32..=7).prop_flat_map(|d| (0..1u64 << d).prop_map(move |bits| Word::from_bits(bits, d)))
}

fn poly() -> impl Strategy<Value = FreePoly> {
    prop::collection::vec((word(), -5i64..=5, 1i64..=3), 0..6).prop_map(|terms| {
        let mut f = FreePoly::zero(Q, None);
        for (w, num, den) in terms {
            f.add_term(w, &Q.div_int(&Q.from_int(num), den).unwrap());
        }
        f
    })
}

fn variable() -> impl Strategy<Value = Variable> {
    prop_oneof![Just(Variable::X), Just(Variable::Y)]
}

fn braces() -> Vec<FiniteBrace> {
    (2..=8).flat_map(examples::cyclic_braces).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn render_reparses(f in poly()) {
        prop_assert_eq!(parse_poly(&f.render(), Q).unwrap(), f);
    }

    #[test]
    fn simple_syzygy_holds(f in poly()) {
        let (r1, r2) = syzygy_residual(&f);
        prop_assert!(r1.is_zero());
        prop_assert_eq!(r2.is_zero(), is_cyclically_invariant(&f));
        let (c1, c2) = syzygy_residual(&cyclicize(&f));
        prop_assert!(c1.is_zero() && c2.is_zero());
    }

    #[test]
    fn cyclicize_twice_scales_by_length(w in word()) {
        let once = cyclicize(&FreePoly::word(Q, None, w));
        prop_assert_eq!(cyclicize(&once), once.scale(&Q.from_int(w.degree() as i64)));
    }

    #[test]
    fn ginzburg_matches_simple_on_cyclicization(f in poly(), v in variable()) {
        prop_assert_eq!(derive_ginzburg(&f, v), derive_simple(&cyclicize(&f), v));
    }

    #[test]
    fn normal_form_is_idempotent_and_linear(f in poly(), g in poly()) {
        let q = quotient(&potential("cyc(x^2 y) + y^4 + y^5").unwrap(), 10).unwrap();
        let nf = |p: &FreePoly| normal_form(&p.with_cap(Some(10)), &q.system);
        let f1 = nf(&f);
        prop_assert_eq!(nf(&f1), f1.clone());
        prop_assert_eq!(nf(&(&f + &g)), &f1 + &nf(&g));
        prop_assert!(f1.words().all(|w| q.system.is_normal(w)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Two independent routes to the truncated Hilbert layers.
    #[test]
    fn engine_agrees_with_oracle(f in poly()) {
        let f = Potential::simple(cyclicize(&f));
        let (a, b) = f.relations();
        let q = quotient(&f, 6).unwrap();
        let ours: Vec<u64> = (0..=6).map(|d| q.hilbert.get(d).copied().unwrap_or(0)).collect();
        prop_assert_eq!(ours, oracle_dimension(&[a, b], 6).unwrap());
    }

    #[test]
    fn completion_ignores_thread_count(f in poly()) {
        let (a, b) = Potential::simple(cyclicize(&f)).relations();
        let run = |n| par::with_threads(n, || complete(&[a.clone(), b.clone()], MonomialOrder::default(), 7).unwrap().record());
        prop_assert_eq!(run(1), run(4));
    }

    /// Dimension is unchanged by an invertible change of variables.
    #[test]
    fn substitution_preserves_dimension(seed in any::<u64>()) {
        let cap = 8;
        let g = potential("cyc(x^2 y) + y^4").unwrap().convert(DerivativeMode::Ginzburg).unwrap();
        let s = sample::substitution(&mut sample::rng(seed), cap);
        let moved = Potential { body: substitute(&g.body.with_cap(Some(cap)), &s, cap).unwrap(), mode: DerivativeMode::Ginzburg };
        prop_assert_eq!(quotient(&moved, cap).unwrap().dimension(), Some(9));
    }

    /// D(a,b) = Σ_{i<N} (−1)^{i+1} tᵢ + (−1)^N D(d_N, d_N').
    #[test]
    fn distributivity_series_identity(pick in any::<prop::sample::Index>(), a in 0usize..8, x in 0usize..8, c in 0usize..8, n in 0usize..6) {
        let all = braces();
        let b = &all[pick.index(all.len())];
        let (a, x, c) = (a % b.order(), x % b.order(), c % b.order());
        let s = distributivity_series(b, a, x, c, n);
        let (mut d, mut dp) = (a, x);
        for _ in 0..n {
            (d, dp) = (b.add(d, dp), b.star(d, dp));
        }
        let tail = b.right_defect(d, dp, c);
        let tail = if n % 2 == 0 { tail } else { b.neg(tail) };
        prop_assert_eq!(b.add(s.partial_sums[n], tail), s.direct);
    }
}
