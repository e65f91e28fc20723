use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sl3knot::diagram::{random_braid_word, LinkDiagram, State};
use sl3knot::homfly::{specialize_sl3, HomflyEngine};
use sl3knot::statesum::StateSum;
use sl3knot::web::{Evaluator, ReductionOrder};
use sl3knot::LaurentPoly;

fn braid_strategy(max_len: usize) -> impl Strategy<Value = (usize, Vec<i32>)> {
    (2usize..=4).prop_flat_map(move |n| {
        let gen = (1..n as i32).prop_flat_map(|g| prop_oneof![Just(g), Just(-g)]);
        (Just(n), prop::collection::vec(gen, 0..=max_len))
    })
}

fn positive_braid_strategy(max_len: usize) -> impl Strategy<Value = (usize, Vec<i32>)> {
    (2usize..=4).prop_flat_map(move |n| (Just(n), prop::collection::vec(1..n as i32, 1..=max_len)))
}

fn closure(n: usize, w: &[i32]) -> LinkDiagram {
    LinkDiagram::from_braid_word(w, n).unwrap()
}

fn inv(d: &LinkDiagram) -> LaurentPoly {
    StateSum::new().invariant(d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn reidemeister_two_insertion((n, w) in braid_strategy(6), pos in 0usize..7, g in 1i32..4) {
        prop_assume!(g < n as i32);
        let pos = pos.min(w.len());
        let mut w2 = w.clone();
        w2.splice(pos..pos, [g, -g]);
        prop_assert_eq!(inv(&closure(n, &w)), inv(&closure(n, &w2)));
    }

    #[test]
    fn stabilization_is_first_move((n, w) in braid_strategy(6), sign in prop_oneof![Just(1i32), Just(-1i32)]) {
        let mut w2 = w.clone();
        w2.push(sign * n as i32);
        prop_assert_eq!(inv(&closure(n, &w)), inv(&closure(n + 1, &w2)));
    }

    #[test]
    fn braid_relation_is_third_move((n, w) in braid_strategy(4), pos in 0usize..5) {
        prop_assume!(n >= 3);
        let pos = pos.min(w.len());
        let mut a = w.clone();
        a.splice(pos..pos, [1, 2, 1]);
        let mut b = w.clone();
        b.splice(pos..pos, [2, 1, 2]);
        prop_assert_eq!(inv(&closure(n, &a)), inv(&closure(n, &b)));
    }

    #[test]
    fn conjugation_invariance((n, w) in braid_strategy(7), k in 0usize..8) {
        prop_assume!(!w.is_empty());
        let mut r = w.clone();
        r.rotate_left(k % w.len());
        prop_assert_eq!(inv(&closure(n, &w)), inv(&closure(n, &r)));
    }

    #[test]
    fn mirror_inverts_q((n, w) in braid_strategy(7)) {
        let d = closure(n, &w);
        prop_assert_eq!(inv(&d.mirror()), inv(&d).substitute_q_inverse());
    }

    #[test]
    fn homfly_mirror_symmetry((n, w) in braid_strategy(7)) {
        let d = closure(n, &w);
        let hf = HomflyEngine::new();
        prop_assert_eq!(hf.homfly(&d.mirror()).unwrap(), hf.homfly(&d).unwrap().mirror());
    }

    #[test]
    fn oracle_agrees((n, w) in braid_strategy(8)) {
        let d = closure(n, &w);
        let p = HomflyEngine::new().homfly(&d).unwrap();
        prop_assert_eq!(specialize_sl3(&p).unwrap(), inv(&d));
    }

    #[test]
    fn disjoint_union_multiplies((n1, w1) in braid_strategy(4), (n2, w2) in braid_strategy(4)) {
        let (a, b) = (closure(n1, &w1), closure(n2, &w2));
        prop_assert_eq!(inv(&a.disjoint_union(&b)), inv(&a) * inv(&b));
    }

    #[test]
    fn connected_sum_identity((n1, w1) in braid_strategy(4), (n2, w2) in braid_strategy(4), a1 in 0usize..20, a2 in 0usize..20) {
        let (a, b) = (closure(n1, &w1), closure(n2, &w2));
        prop_assume!(a.num_crossings() > 0 && b.num_crossings() > 0);
        // only a knot component is cut unambiguously
        prop_assume!(a.num_link_components() == 1 && b.num_link_components() == 1);
        let s = a.connected_sum(&b, a1 % a.num_arcs(), a2 % b.num_arcs()).unwrap();
        prop_assert_eq!(LaurentPoly::qint3() * inv(&s), inv(&a) * inv(&b));
    }

    #[test]
    fn relabeling_and_crossing_order((n, w) in braid_strategy(6), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let d = closure(n, &w);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..d.num_arcs()).collect();
        perm.shuffle(&mut rng);
        let mut order: Vec<usize> = (0..d.num_crossings()).collect();
        order.shuffle(&mut rng);
        let v = inv(&d);
        prop_assert_eq!(inv(&d.relabeled(&perm).unwrap()), v.clone());
        prop_assert_eq!(inv(&d.with_crossing_order(&order)), v);
    }

    #[test]
    fn pd_text_roundtrip((n, w) in braid_strategy(6)) {
        let d = closure(n, &w);
        prop_assume!(d.num_crossings() > 0);
        let back = LinkDiagram::from_pd_str(&d.to_pd_string()).unwrap();
        prop_assert_eq!(inv(&back), inv(&d));
    }

    #[test]
    fn positive_diagrams_have_even_exponents((n, w) in positive_braid_strategy(8)) {
        let d = closure(n, &w);
        prop_assert!(inv(&d).has_only_even_exponents());
    }

    #[test]
    fn coefficient_formulas_on_positive_braids((n, w) in positive_braid_strategy(9)) {
        let d = closure(n, &w);
        let r = sl3knot::analysis::verify_coefficient_theorems(&d, &StateSum::new()).unwrap();
        prop_assert!(r.passed(), "{:?}", r.failures());
    }

    #[test]
    fn ow_flips_never_raise_degree((n, w) in positive_braid_strategy(8), seed in any::<u64>()) {
        let d = closure(n, &w);
        let r = StateSum::new().ow_move_experiment(&d, 20, seed).unwrap();
        prop_assert_eq!(r.violations, 0);
        prop_assert_eq!(r.web_violations, 0);
    }

    #[test]
    fn reduction_order_is_irrelevant((n, w) in braid_strategy(8), mask in any::<u64>(), seed in any::<u64>()) {
        let d = closure(n, &w);
        let e = d.num_crossings();
        let web = d.state_web(&State::from_mask(e, if e == 0 { 0 } else { mask & ((1 << e) - 1) }));
        let ev = Evaluator::without_memo();
        let base = ev.evaluate(&web).unwrap();
        for k in 0..3 {
            prop_assert_eq!(ev.evaluate_ordered(&web, ReductionOrder::Random(seed ^ k)).unwrap(), base.clone());
        }
    }

    #[test]
    fn laurent_ring_axioms(a in prop::collection::vec(-5i64..5, 0..5), b in prop::collection::vec(-5i64..5, 0..5), s in -4i32..4) {
        let p = LaurentPoly::from_terms(a.iter().enumerate().map(|(i, &c)| (i as i32 - 2, c)));
        let q = LaurentPoly::from_terms(b.iter().enumerate().map(|(i, &c)| (i as i32 + s, c)));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) * &q, &(&p * &q) + &(&q * &q));
        if !q.is_zero() {
            prop_assert_eq!((&p * &q).div_exact(&q), Some(p.clone()));
        }
        prop_assert_eq!(p.to_string().parse::<LaurentPoly>().unwrap(), p);
    }
}

#[test]
fn random_words_are_reproducible() {
    let a = random_braid_word(&mut ChaCha8Rng::seed_from_u64(5), 4, 10, false);
    let b = random_braid_word(&mut ChaCha8Rng::seed_from_u64(5), 4, 10, false);
    assert_eq!(a, b);
    assert!(random_braid_word(&mut ChaCha8Rng::seed_from_u64(5), 4, 10, true).iter().all(|&g| g > 0));
}

#[test]
fn tree_seifert_graph_means_unknot() {
    // A positive diagram whose Seifert graph is a tree has leading degree 2.
    for (n, w) in [(2, vec![1]), (3, vec![1, 2]), (4, vec![1, 3, 2])] {
        let d = closure(n, &w);
        let p = inv(&d);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p, LaurentPoly::qint3());
    }
}

#[test]
fn two_positive_trefoil_diagrams_agree() {
    let a = closure(2, &[1, 1, 1]);
    let b = closure(3, &[1, 2, 1, 2]);
    let ga = sl3knot::analysis::gammas(&inv(&a)).unwrap();
    let gb = sl3knot::analysis::gammas(&inv(&b)).unwrap();
    assert_eq!(ga, gb);
}

#[test]
fn split_positive_diagrams_satisfy_formulas_additively() {
    let ss = StateSum::new();
    let d = closure(2, &[1, 1, 1]).disjoint_union(&closure(3, &[1, 2, 1, 2, 1, 2, 1, 2]));
    let r = sl3knot::analysis::verify_coefficient_theorems(&d, &ss).unwrap();
    assert!(r.passed(), "{:?}", r.failures());
    let with_loop = closure(2, &[1, 1, 1]).disjoint_union(&LinkDiagram::unknot());
    assert!(sl3knot::analysis::verify_coefficient_theorems(&with_loop, &ss).unwrap().passed());
}
