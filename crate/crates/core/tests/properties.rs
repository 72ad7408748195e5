use forbidden_core::continuants::{g_eval_f64, g_roots, u_set};
use forbidden_core::exact::{int, rat, to_f64};
use forbidden_core::families::{darboux_witnesses, pell_witnesses};
use forbidden_core::loops::{
    brute_enumerate_loops, evaluate_path, lemma_weight_squared, search_nonunit_loop, weight_squared, PathSeq,
    PathStatus, SearchConfig,
};
use forbidden_core::{LoopWitness, QValue, Rational, WeightSquared};
use proptest::prelude::*;

fn sample_qs() -> Vec<Rational> {
    vec![rat(1, 4), rat(1, 3), rat(2, 5), rat(1, 1), rat(5, 4), rat(7, 4), rat(5, 2), rat(8, 3), int(3)]
}

#[test]
fn lemma_formula_matches_recurrence_on_enumerated_loops() {
    let mut checked = 0;
    for q in sample_qs() {
        for w in brute_enumerate_loops(&q, 5, 4).unwrap() {
            let Some((n, c)) = w.loop_seq.as_alternating_plus() else { continue };
            let exact = weight_squared(&q, &w.loop_seq).unwrap();
            match lemma_weight_squared(n, &c, &q) {
                Ok(w2) => assert_eq!(w2, exact, "q = {q}, loop {}", w.loop_seq),
                Err(_) => assert_eq!(exact, int(1)),
            }
            checked += 1;
        }
    }
    assert!(checked > 5);
}

#[test]
fn weight_is_q_power_times_prefix_product() {
    for q in sample_qs() {
        for w in brute_enumerate_loops(&q, 5, 4).unwrap() {
            let eval = evaluate_path(&q, &w.loop_seq).unwrap();
            assert_eq!(eval.status, PathStatus::Loop);
            let k = w.loop_seq.len() - 1;
            let mut expect = int(1);
            for c in &eval.prefix_c[..k] {
                expect *= &q * c * c;
            }
            assert_eq!(weight_squared(&q, &w.loop_seq).unwrap(), expect);
            assert_eq!(WeightSquared::Exact(expect.clone()), w.weight_squared);
            assert_eq!(w.verified, expect != int(1));
        }
    }
}

proptest! {
    #[test]
    fn negation_and_evaluation_commute(m in prop::collection::vec(-4i64..=4, 1..7), a in 1i64..=30, b in 1i64..=9) {
        let q = rat(a, b);
        let seq = PathSeq::from_i64s(&m);
        let e = evaluate_path(&q, &seq).unwrap();
        let en = evaluate_path(&q, &seq.negated()).unwrap();
        prop_assert_eq!(e.status, en.status);
        for (x, y) in e.prefix_c.iter().zip(&en.prefix_c) {
            prop_assert_eq!(x, &-y);
        }
    }
}

#[test]
fn search_witnesses_round_trip_through_json() {
    let cfg = SearchConfig { max_depth: 5, window: 4, ..SearchConfig::default() };
    for q in [rat(5, 2), rat(8, 3), rat(5, 4), rat(1, 4), rat(2, 5)] {
        let w = search_nonunit_loop(&q, &cfg).unwrap().witness.unwrap();
        let back = LoopWitness::from_json(&w.to_json()).unwrap();
        assert_eq!(back, w);
        assert!(back.verify());
    }
}

#[test]
fn family_witnesses_round_trip_through_json() {
    for w in pell_witnesses(10, false).into_iter().chain(pell_witnesses(10, true)) {
        let back = LoopWitness::from_json(&w.witness.to_json()).unwrap();
        assert_eq!(back, w.witness);
        assert!(back.verify());
    }
    for w in darboux_witnesses(4, 1, 4).unwrap() {
        let back = LoopWitness::from_json(&w.witness.to_json()).unwrap();
        assert_eq!(back, w.witness);
        assert!(back.verify());
    }
}

#[test]
fn algebraic_darboux_q_has_a_tiny_final_prefix() {
    for w in darboux_witnesses(4, 1, 3).unwrap() {
        let QValue::Algebraic(q) = &w.q else { continue };
        for end in [q.lo(), q.hi()] {
            let eval = evaluate_path(end, &w.witness.loop_seq).unwrap();
            assert!(to_f64(eval.prefix_c.last().unwrap()).abs() < 1e-12);
        }
        let WeightSquared::Formula { approx } = w.witness.weight_squared else { panic!() };
        assert!(approx > 0.0 && approx < 1.0);
    }
}

#[test]
fn u_sets_are_squared_primitive_roots() {
    for n in 1..=12 {
        let roots: Vec<f64> = g_roots(n).into_iter().filter(|r| *r > 0.0).map(|r| r * r).collect();
        for t in u_set(n) {
            assert!(roots.iter().any(|r| (r - t.approx()).abs() < 1e-12));
            assert!(g_eval_f64(n, t.approx().sqrt()).abs() < 1e-9);
        }
    }
}
