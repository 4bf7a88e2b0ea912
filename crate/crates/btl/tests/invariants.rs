//! Cross-module invariants that don't fit a single unit-test file: unraveling
//! shape, lasso-word identities, winner-order independence, and the
//! fairness-on-lasso property family.

mod oracle;

use btl::checker::lasso::{lasso_eval_at, LassoWord};
use btl::checker::{check_state, Assignment, Mode};
use btl::formula::*;
use btl::game;
use btl::models::{build_a, string_ef_equiv, unravel, ColoredString, TransitionSystem};
use oracle::rng;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn unravel_height_and_labels() {
    let mut r = rng(42);
    for _ in 0..40 {
        let n = r.gen_range(1..5usize);
        let states: Vec<(u64, Vec<String>)> = (0..n as u64)
            .map(|i| {
                let props = if r.gen_bool(0.5) { vec![format!("s{i}")] } else { vec![] };
                (i, props)
            })
            .collect();
        let mut edges = Vec::new();
        for a in 0..n as u64 {
            for b in 0..n as u64 {
                if r.gen_bool(0.4) {
                    edges.push((a, b));
                }
            }
        }
        let ts = TransitionSystem::from_parts(0, states.clone(), edges).unwrap();
        let depth = r.gen_range(0..4usize);
        let t = unravel(&ts, depth);
        assert!(t.height() <= depth);
        // walk tree and system in lockstep: every node's label equals the
        // label of the state its path ends at, children follow edge order
        let mut stack = vec![(t.root(), ts.initial())];
        while let Some((v, s)) = stack.pop() {
            let props: Vec<String> = t.props(v).iter().cloned().collect();
            assert_eq!(props, states[s].1, "label mismatch at state {s}");
            if !t.children(v).is_empty() {
                assert_eq!(t.children(v).len(), ts.successors(s).len());
                for (c, s2) in t.children(v).iter().zip(ts.successors(s)) {
                    stack.push((*c, *s2));
                }
            }
        }
    }
}

#[test]
fn ef_equivalence_coarsens_with_fewer_rounds_on_random_strings() {
    let mut r = rng(43);
    for _ in 0..200 {
        let len_a = r.gen_range(0..7usize);
        let len_b = r.gen_range(0..7usize);
        let a = ColoredString((0..len_a).map(|_| r.gen_bool(0.5)).collect());
        let b = ColoredString((0..len_b).map(|_| r.gen_bool(0.5)).collect());
        for k in 0..3 {
            if string_ef_equiv(&a, &b, k + 1) {
                assert!(string_ef_equiv(&a, &b, k));
            }
        }
    }
}

#[test]
fn winner_is_insensitive_to_selection_order() {
    use rand::seq::SliceRandom;
    let mut r = rng(44);
    let l = unravel(&build_a(1), 3);
    let rt = unravel(&build_a(1), 2);
    for _ in 0..50 {
        let count = r.gen_range(0..4usize);
        let pairs: Vec<(usize, usize)> = (0..count)
            .map(|_| {
                (
                    r.gen_range(0..l.node_count()),
                    r.gen_range(0..rt.node_count()),
                )
            })
            .collect();
        let mut shuffled = pairs.clone();
        shuffled.shuffle(&mut r);
        assert_eq!(
            game::winner(&l, &rt, &pairs),
            game::winner(&l, &rt, &shuffled)
        );
    }
}

#[test]
fn checker_duality_between_quantifiers() {
    // !E psi = A !psi on every node in both modes, over a random batch
    let mut r = rng(45);
    for _ in 0..30 {
        let nodes = r.gen_range(1..7);
        let t = oracle::gen_tree(&mut r, &["p", "q"], nodes);
        let psi = oracle::gen_prop_path(&mut r, &["p", "q"], 2);
        let lhs = not(exists(psi.clone()));
        let rhs = forall(pnot(psi));
        for mode in [Mode::LeafLoop, Mode::Strict] {
            for v in t.node_ids() {
                let a = Assignment(vec![]);
                assert_eq!(
                    check_state(&t, v, &a, &lhs, mode).unwrap(),
                    check_state(&t, v, &a, &rhs, mode).unwrap()
                );
            }
        }
    }
}

#[test]
fn hybrid_translation_agrees_exhaustively() {
    // down x1 . E (F x1 & F p): the bound variable passes through the
    // translation like a proposition holding in one node
    let f = bind(
        1,
        exists(pand(
            eventually(lift(var(1))),
            eventually(lift(prop("p"))),
        )),
    );
    let g = btl::rewriter::ctlplus_to_ctl(&f).unwrap();
    assert!(g.classify().level <= Level::Ctl);
    let trees = btl::sat::enumerate_trees(&btl::sat::SearchBounds::new(6, 6, &["p"], 6)).unwrap();
    for t in &trees {
        for v in t.node_ids() {
            for u in t.node_ids() {
                let a = Assignment(vec![u]);
                assert_eq!(
                    check_state(t, v, &a, &f, Mode::LeafLoop).unwrap(),
                    check_state(t, v, &a, &g, Mode::LeafLoop).unwrap(),
                    "node {v}, assignment {u}"
                );
            }
        }
    }
}

#[test]
fn strategy_tree_check_rejects_bad_skeletons() {
    use btl::tiling::{counter_instance, strategy_tree_check};
    let inst = counter_instance(1);
    // a node labeled both o and c violates the marker partition
    let both = btl::models::Tree::leaf(&["o", "c"]);
    assert!(!strategy_tree_check(&both, &inst).unwrap());
    // a root lacking row_e violates the opening conjunct
    let wrong_root = btl::models::Tree::chain(&[&["o"], &["row_e"], &["pos_e"]]);
    assert!(!strategy_tree_check(&wrong_root, &inst).unwrap());
    // a node without any marker violates the partition as well
    let unmarked = btl::models::Tree::leaf(&[]);
    assert!(!strategy_tree_check(&unmarked, &inst).unwrap());
}

fn arb_lasso() -> impl Strategy<Value = LassoWord> {
    let letter = prop_oneof![
        Just(vec![]),
        Just(vec!["p"]),
        Just(vec!["q"]),
        Just(vec!["p", "q"]),
    ];
    (
        proptest::collection::vec(letter.clone(), 0..5),
        proptest::collection::vec(letter, 1..5),
    )
        .prop_map(|(prefix, period)| {
            let conv = |xs: Vec<Vec<&str>>| {
                xs.into_iter()
                    .map(|ps| ps.into_iter().map(str::to_string).collect())
                    .collect()
            };
            LassoWord::new(conv(prefix), conv(period)).unwrap()
        })
}

proptest! {
    #[test]
    fn inf_often_equals_always_eventually(w in arb_lasso(), i in 0usize..12) {
        let lhs = inf_often(lift(prop("p")));
        let rhs = always(eventually(lift(prop("p"))));
        prop_assert_eq!(
            lasso_eval_at(&w, &lhs, i).unwrap(),
            lasso_eval_at(&w, &rhs, i).unwrap()
        );
    }

    #[test]
    fn alm_always_equals_eventually_always(w in arb_lasso(), i in 0usize..12) {
        let lhs = alm_always(lift(prop("q")));
        let rhs = eventually(always(lift(prop("q"))));
        prop_assert_eq!(
            lasso_eval_at(&w, &lhs, i).unwrap(),
            lasso_eval_at(&w, &rhs, i).unwrap()
        );
    }

    #[test]
    fn next_negation_commutes_on_lassos(w in arb_lasso(), i in 0usize..12) {
        let lhs = pnot(next(lift(prop("p"))));
        let rhs = next(pnot(lift(prop("p"))));
        prop_assert_eq!(
            lasso_eval_at(&w, &lhs, i).unwrap(),
            lasso_eval_at(&w, &rhs, i).unwrap()
        );
    }
}
