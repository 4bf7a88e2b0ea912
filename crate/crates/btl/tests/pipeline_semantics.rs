//! Tree-level validation of the past/fairness elimination pipeline.
//!
//! Every step except the final fairness removal is a logical equivalence, so
//! for inputs whose negation normal form contains no positive `Finf` the
//! output must agree with the input on every tree. Extracted past conjuncts
//! are determined by the node at position 0, so a top-level path-formula
//! output has the same value at position 0 of every path from a node and can
//! be compared against the state-formula input there.

mod oracle;

use btl::checker::{check_path, check_state, Assignment, Mode};
use btl::formula::*;
use btl::models::Tree;
use btl::rewriter::{eliminate_past_fairness, EquivalenceKind};
use btl::sat::{enumerate_trees, SearchBounds};
use oracle::rng;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn gen_prop_state(r: &mut ChaCha8Rng, depth: usize) -> StateFormula {
    if depth == 0 || r.gen_bool(0.4) {
        match r.gen_range(0..5) {
            0 | 1 => prop("p"),
            2 => prop("q"),
            3 => not(prop("p")),
            _ => StateFormula::True,
        }
    } else {
        match r.gen_range(0..3) {
            0 => and(gen_prop_state(r, depth - 1), gen_prop_state(r, depth - 1)),
            1 => or(gen_prop_state(r, depth - 1), gen_prop_state(r, depth - 1)),
            _ => not(gen_prop_state(r, depth - 1)),
        }
    }
}

/// Positive Boolean combination of temporal basics with propositional
/// operands; `Finf` appears only under a negation, so the pipeline stays in
/// its logically-equivalent fragment.
fn gen_combo(r: &mut ChaCha8Rng, depth: usize) -> PathFormula {
    if depth == 0 || r.gen_bool(0.45) {
        let s = |r: &mut ChaCha8Rng| lift(gen_prop_state(r, 1));
        match r.gen_range(0..9) {
            0 => next(s(r)),
            1 => until(s(r), s(r)),
            2 => eventually(s(r)),
            3 => always(s(r)),
            4 => alm_always(s(r)),
            5 => pnot(inf_often(s(r))),
            6 => previous(s(r)),
            7 => weak_previous(s(r)),
            _ => since(s(r), s(r)),
        }
    } else {
        match r.gen_range(0..2) {
            0 => pand(gen_combo(r, depth - 1), gen_combo(r, depth - 1)),
            _ => por(gen_combo(r, depth - 1), gen_combo(r, depth - 1)),
        }
    }
}

fn agree_on_tree(t: &Tree, input: &StateFormula, output: &Formula) -> bool {
    let a = Assignment(vec![]);
    for v in t.node_ids() {
        let want = check_state(t, v, &a, input, Mode::LeafLoop).unwrap();
        let got = match output {
            Formula::State(s) => check_state(t, v, &a, s, Mode::LeafLoop).unwrap(),
            Formula::Path(psi) => {
                // a pure-past-and-lift combination: the value at position 0
                // must be the same on every path from v
                let mut value = None;
                for path in t.paths_from(v) {
                    let here = check_path(t, &path, 0, &a, psi, Mode::LeafLoop).unwrap();
                    match value {
                        None => value = Some(here),
                        Some(prev) => assert_eq!(
                            prev, here,
                            "path-formula output not position-0-determined"
                        ),
                    }
                }
                value.expect("every node has a path")
            }
        };
        if want != got {
            return false;
        }
    }
    true
}

#[test]
fn elimination_is_logically_equivalent_without_positive_finf() {
    let mut r = rng(4242);
    let trees = enumerate_trees(&SearchBounds::new(4, 4, &["p", "q"], 4)).unwrap();
    let mut random_trees = Vec::new();
    for _ in 0..20 {
        let nodes = r.gen_range(5..9);
        random_trees.push(oracle::gen_tree(&mut r, &["p", "q"], nodes));
    }
    for i in 0..120 {
        let combo = gen_combo(&mut r, 2);
        // alternate bare quantifications with state-level contexts around them
        let input = match i % 4 {
            0 => exists(combo),
            1 => not(exists(combo)),
            2 => and(prop("p"), exists(combo)),
            _ => or(exists(combo), not(exists(gen_combo(&mut r, 2)))),
        };
        let report = eliminate_past_fairness(&Formula::State(input.clone()))
            .unwrap_or_else(|e| panic!("pipeline rejected input #{i}: {e}"));
        assert_eq!(
            report.kind,
            EquivalenceKind::Logical,
            "no positive Finf was generated"
        );
        for t in trees.iter().chain(&random_trees) {
            assert!(
                agree_on_tree(t, &input, &report.output),
                "disagreement for input #{i}: {} -> {}",
                btl::parser::print_formula(&input),
                btl::parser::print_any_formula(&report.output)
            );
        }
    }
}

#[test]
fn elimination_handles_hybrid_contexts() {
    let mut r = rng(4343);
    let trees = enumerate_trees(&SearchBounds::new(4, 4, &["p", "q"], 4)).unwrap();
    for i in 0..40 {
        let combo = gen_combo(&mut r, 1);
        let input = bind(1, at_root(exists(pand(combo, eventually(lift(var(1)))))));
        let report = eliminate_past_fairness(&Formula::State(input.clone()))
            .unwrap_or_else(|e| panic!("pipeline rejected input #{i}: {e}"));
        for t in &trees {
            for v in t.node_ids() {
                for u in t.node_ids() {
                    let a = Assignment(vec![u]);
                    let want = check_state(t, v, &a, &input, Mode::LeafLoop).unwrap();
                    let got = match &report.output {
                        Formula::State(s) => check_state(t, v, &a, s, Mode::LeafLoop).unwrap(),
                        Formula::Path(_) => {
                            panic!("binder-wrapped input yields a state formula")
                        }
                    };
                    assert_eq!(want, got, "input #{i} at node {v}, assignment {u}");
                }
            }
        }
    }
}
