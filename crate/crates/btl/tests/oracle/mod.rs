//! Independent oracles used by the integration and acceptance tests. These
//! deliberately reimplement functionality of the crate with different
//! algorithms: a bounded-expansion path evaluator for the checker, a direct
//! game-tree search for the string Ehrenfeucht game, and a bottom-up
//! value-iteration solver for the tiling game.

#![allow(dead_code)]

use btl::checker::Mode;
use btl::formula::{PathFormula, StateFormula};
use btl::models::{ColoredString, NodeId, Tree};
use btl::tiling::{TilingInstance, TilingVerdict};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Naive model checker: explicit path enumeration with bounded expansion.
//
// On a leaf-looped path every subformula's truth sequence is eventually
// constant (the period has length one), reaching its limit no later than
// position m + size(psi), where m is the leaf position: atoms are constant
// from m, each operator adds at most one step, and `until`/`since` stabilize
// one step after their operands. Evaluating with all positions clamped to
// CAP = m + size + 2 is therefore exact.

pub fn naive_check_state(
    tree: &Tree,
    v: NodeId,
    assign: &[NodeId],
    f: &StateFormula,
    mode: Mode,
) -> bool {
    use StateFormula::*;
    match f {
        True => true,
        False => false,
        Prop(p) => tree.has_prop(v, p),
        Not(a) => !naive_check_state(tree, v, assign, a, mode),
        And(a, b) => {
            naive_check_state(tree, v, assign, a, mode)
                && naive_check_state(tree, v, assign, b, mode)
        }
        Or(a, b) => {
            naive_check_state(tree, v, assign, a, mode)
                || naive_check_state(tree, v, assign, b, mode)
        }
        Implies(a, b) => {
            !naive_check_state(tree, v, assign, a, mode)
                || naive_check_state(tree, v, assign, b, mode)
        }
        Exists(psi) => all_paths(tree, v)
            .iter()
            .any(|path| naive_eval_path(tree, path, 0, assign, psi, mode)),
        Forall(psi) => all_paths(tree, v)
            .iter()
            .all(|path| naive_eval_path(tree, path, 0, assign, psi, mode)),
        Bind(i, a) => {
            let mut a2 = assign.to_vec();
            a2[i - 1] = v;
            naive_check_state(tree, v, &a2, a, mode)
        }
        Var(i) => v == assign[i - 1],
        AtVar(i, a) => naive_check_state(tree, assign[i - 1], assign, a, mode),
        Root => v == tree.root(),
        AtRoot(a) => naive_check_state(tree, tree.root(), assign, a, mode),
    }
}

fn all_paths(tree: &Tree, v: NodeId) -> Vec<Vec<NodeId>> {
    fn go(tree: &Tree, path: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        let last = *path.last().unwrap();
        let kids = tree.children(last);
        if kids.is_empty() {
            out.push(path.clone());
        }
        for &c in kids {
            path.push(c);
            go(tree, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(tree, &mut vec![v], &mut out);
    out
}

fn psize(p: &PathFormula) -> usize {
    use PathFormula::*;
    match p {
        State(_) => 1,
        Not(a) | Next(a) | Eventually(a) | Always(a) | Previous(a) | WeakPrevious(a)
        | InfinitelyOften(a) | AlmostAlways(a) => 1 + psize(a),
        And(a, b) | Or(a, b) | Until(a, b) | Since(a, b) => 1 + psize(a) + psize(b),
    }
}

pub fn naive_eval_path(
    tree: &Tree,
    path: &[NodeId],
    i: usize,
    assign: &[NodeId],
    psi: &PathFormula,
    mode: Mode,
) -> bool {
    match mode {
        Mode::LeafLoop => {
            let cap = path.len() - 1 + psize(psi) + 2;
            loop_eval(tree, path, i.min(cap), assign, psi, cap)
        }
        Mode::Strict => strict_eval(tree, path, i, assign, psi),
    }
}

fn loop_eval(
    tree: &Tree,
    path: &[NodeId],
    i: usize,
    assign: &[NodeId],
    psi: &PathFormula,
    cap: usize,
) -> bool {
    use PathFormula::*;
    let last = path.len() - 1;
    let node = |j: usize| path[j.min(last)];
    match psi {
        State(s) => naive_check_state(tree, node(i), assign, s, Mode::LeafLoop),
        Not(a) => !loop_eval(tree, path, i, assign, a, cap),
        And(a, b) => {
            loop_eval(tree, path, i, assign, a, cap) && loop_eval(tree, path, i, assign, b, cap)
        }
        Or(a, b) => {
            loop_eval(tree, path, i, assign, a, cap) || loop_eval(tree, path, i, assign, b, cap)
        }
        Next(a) => loop_eval(tree, path, (i + 1).min(cap), assign, a, cap),
        Until(a, b) => (i..=cap).any(|j| {
            loop_eval(tree, path, j, assign, b, cap)
                && (i..j).all(|l| loop_eval(tree, path, l, assign, a, cap))
        }),
        Eventually(a) => (i..=cap).any(|j| loop_eval(tree, path, j, assign, a, cap)),
        Always(a) => (i..=cap).all(|j| loop_eval(tree, path, j, assign, a, cap)),
        Previous(a) => i > 0 && loop_eval(tree, path, i - 1, assign, a, cap),
        WeakPrevious(a) => i == 0 || loop_eval(tree, path, i - 1, assign, a, cap),
        Since(a, b) => (0..=i).rev().any(|j| {
            loop_eval(tree, path, j, assign, b, cap)
                && (j + 1..=i).all(|l| loop_eval(tree, path, l, assign, a, cap))
        }),
        // with an eventually constant tail, both mean "true in the limit"
        InfinitelyOften(a) => loop_eval(tree, path, cap, assign, a, cap),
        AlmostAlways(a) => loop_eval(tree, path, cap, assign, a, cap),
    }
}

fn strict_eval(
    tree: &Tree,
    path: &[NodeId],
    i: usize,
    assign: &[NodeId],
    psi: &PathFormula,
) -> bool {
    use PathFormula::*;
    let n = path.len();
    match psi {
        State(s) => naive_check_state(tree, path[i], assign, s, Mode::Strict),
        Not(a) => !strict_eval(tree, path, i, assign, a),
        And(a, b) => {
            strict_eval(tree, path, i, assign, a) && strict_eval(tree, path, i, assign, b)
        }
        Or(a, b) => {
            strict_eval(tree, path, i, assign, a) || strict_eval(tree, path, i, assign, b)
        }
        Next(a) => i + 1 < n && strict_eval(tree, path, i + 1, assign, a),
        Until(a, b) => (i..n).any(|j| {
            strict_eval(tree, path, j, assign, b)
                && (i..j).all(|l| strict_eval(tree, path, l, assign, a))
        }),
        Eventually(a) => (i..n).any(|j| strict_eval(tree, path, j, assign, a)),
        Always(a) => (i..n).all(|j| strict_eval(tree, path, j, assign, a)),
        Previous(a) => i > 0 && strict_eval(tree, path, i - 1, assign, a),
        WeakPrevious(a) => i == 0 || strict_eval(tree, path, i - 1, assign, a),
        Since(a, b) => (0..=i).rev().any(|j| {
            strict_eval(tree, path, j, assign, b)
                && (j + 1..=i).all(|l| strict_eval(tree, path, l, assign, a))
        }),
        InfinitelyOften(_) => false,
        AlmostAlways(_) => true,
    }
}

pub fn naive_models(tree: &Tree, f: &StateFormula, mode: Mode) -> bool {
    let k = f.classify().vars;
    naive_check_state(tree, tree.root(), &vec![tree.root(); k], f, mode)
}

// ---------------------------------------------------------------------------
// Direct game-tree search for the k-round Ehrenfeucht game on strings.

pub fn naive_string_ef(a: &ColoredString, b: &ColoredString, k: usize) -> bool {
    fn partial_iso(a: &[bool], b: &[bool], pa: &[usize], pb: &[usize]) -> bool {
        for i in 0..pa.len() {
            if a[pa[i]] != b[pb[i]] {
                return false;
            }
            for j in 0..pa.len() {
                if (pa[i] < pa[j]) != (pb[i] < pb[j]) || (pa[i] == pa[j]) != (pb[i] == pb[j]) {
                    return false;
                }
            }
        }
        true
    }
    fn dup_wins(a: &[bool], b: &[bool], pa: &mut Vec<usize>, pb: &mut Vec<usize>, k: usize) -> bool {
        if k == 0 {
            return partial_iso(a, b, pa, pb);
        }
        // spoiler picks either side, any position; duplicator answers
        let spoiler_beats_a = (0..a.len()).any(|i| {
            !(0..b.len()).any(|j| {
                pa.push(i);
                pb.push(j);
                let w = dup_wins(a, b, pa, pb, k - 1);
                pa.pop();
                pb.pop();
                w
            })
        });
        if spoiler_beats_a {
            return false;
        }
        let spoiler_beats_b = (0..b.len()).any(|j| {
            !(0..a.len()).any(|i| {
                pa.push(i);
                pb.push(j);
                let w = dup_wins(a, b, pa, pb, k - 1);
                pa.pop();
                pb.pop();
                w
            })
        });
        !spoiler_beats_b
    }
    dup_wins(&a.0, &b.0, &mut Vec::new(), &mut Vec::new(), k)
}

// ---------------------------------------------------------------------------
// Bottom-up value-iteration solver for the tiling game.

pub fn reference_solve_tiling(
    inst: &TilingInstance,
    width: usize,
    max_rows: usize,
) -> TilingVerdict {
    let tiles: Vec<usize> = (0..inst.tiles().len()).collect();
    let name = |t: usize| inst.tiles()[t].clone();
    let h: BTreeSet<(String, String)> = inst.h_pairs().into_iter().collect();
    let v: BTreeSet<(String, String)> = inst.v_pairs().into_iter().collect();
    let f: BTreeSet<String> = inst.f_tiles().into_iter().collect();
    let l: BTreeSet<String> = inst.l_tiles().into_iter().collect();

    // enumerate every state: (above row or none) x proper partial rows
    let mut rows: Vec<Option<Vec<usize>>> = vec![None];
    fn tuples(tiles: &[usize], len: usize) -> Vec<Vec<usize>> {
        if len == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for rest in tuples(tiles, len - 1) {
            for &t in tiles {
                let mut r = rest.clone();
                r.push(t);
                out.push(r);
            }
        }
        out
    }
    for r in tuples(&tiles, width) {
        rows.push(Some(r));
    }
    let mut partials: Vec<Vec<usize>> = Vec::new();
    for len in 0..width {
        partials.extend(tuples(&tiles, len));
    }
    let mut states: Vec<(Option<Vec<usize>>, Vec<usize>)> = Vec::new();
    for above in &rows {
        for p in &partials {
            states.push((above.clone(), p.clone()));
        }
    }
    let state_ix = |above: &Option<Vec<usize>>, p: &Vec<usize>| {
        states
            .iter()
            .position(|(a, q)| a == above && q == p)
            .expect("state enumerated")
    };

    let legal = |above: &Option<Vec<usize>>, p: &Vec<usize>| -> Vec<usize> {
        tiles
            .iter()
            .copied()
            .filter(|&t| {
                if above.is_none() && !f.contains(&name(t)) {
                    return false;
                }
                if let Some(&prev) = p.last() {
                    if !h.contains(&(name(prev), name(t))) {
                        return false;
                    }
                }
                if let Some(row) = above {
                    if !v.contains(&(name(row[p.len()]), name(t))) {
                        return false;
                    }
                }
                true
            })
            .collect()
    };

    // wins[r][s]: E forces a win from s completing at most r more rows
    let horizon = states.len() + 2;
    let mut wins: Vec<Vec<bool>> = vec![vec![false; states.len()]];
    for r in 1..=horizon {
        let mut cur = vec![false; states.len()];
        // evaluate states with longer partials first: placements within a
        // row only grow the partial
        let mut order: Vec<usize> = (0..states.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(states[i].1.len()));
        for &si in &order {
            let (above, partial) = &states[si];
            let moves = legal(above, partial);
            let e_turn = partial.len() % 2 == 0;
            let mut outcomes = Vec::new();
            for t in moves {
                let mut p2 = partial.clone();
                p2.push(t);
                let value = if p2.len() == width {
                    if p2.iter().all(|&x| l.contains(&name(x))) {
                        true
                    } else {
                        wins[r - 1][state_ix(&Some(p2.clone()), &Vec::new())]
                    }
                } else {
                    cur[state_ix(above, &p2)]
                };
                outcomes.push(value);
            }
            cur[si] = if e_turn {
                outcomes.iter().any(|&x| x)
            } else {
                outcomes.iter().all(|&x| x)
            };
        }
        wins.push(cur);
    }
    let start = state_ix(&None, &Vec::new());
    let bounded = max_rows.min(horizon);
    if wins[bounded][start] {
        TilingVerdict::EWins
    } else if wins[horizon][start] {
        TilingVerdict::Inconclusive
    } else {
        TilingVerdict::AWins
    }
}

// ---------------------------------------------------------------------------
// Random generators (deterministic via seeded RNG).

use btl::formula::*;

/// Random quantified-Boolean-combination formula with one variable over the
/// given propositions; never uses past or fairness operators, so the CTL+
/// translation accepts it.
pub fn gen_h1plus(rng: &mut ChaCha8Rng, props: &[&str], max_size: usize) -> StateFormula {
    loop {
        let f = gen_state(rng, props, 3);
        if f.size() <= max_size {
            return f;
        }
    }
}

fn gen_state(rng: &mut ChaCha8Rng, props: &[&str], depth: usize) -> StateFormula {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        match rng.gen_range(0..8) {
            0 | 1 | 2 => prop(props[rng.gen_range(0..props.len())]),
            3 => var(1),
            4 => StateFormula::Root,
            5 => StateFormula::True,
            _ => prop(props[rng.gen_range(0..props.len())]),
        }
    } else {
        match rng.gen_range(0..10) {
            0 => not(gen_state(rng, props, depth - 1)),
            1 => and(gen_state(rng, props, depth - 1), gen_state(rng, props, depth - 1)),
            2 => or(gen_state(rng, props, depth - 1), gen_state(rng, props, depth - 1)),
            3 => implies(gen_state(rng, props, depth - 1), gen_state(rng, props, depth - 1)),
            4 => bind(1, gen_state(rng, props, depth - 1)),
            5 => at_var(1, gen_state(rng, props, depth - 1)),
            6 => at_root(gen_state(rng, props, depth - 1)),
            7 => exists(gen_combo(rng, props, depth - 1)),
            _ => forall(gen_combo(rng, props, depth - 1)),
        }
    }
}

fn gen_combo(rng: &mut ChaCha8Rng, props: &[&str], depth: usize) -> PathFormula {
    if depth == 0 || rng.gen_bool(0.5) {
        gen_basic(rng, props, depth)
    } else {
        match rng.gen_range(0..3) {
            0 => pnot(gen_combo(rng, props, depth - 1)),
            1 => pand(gen_combo(rng, props, depth - 1), gen_combo(rng, props, depth - 1)),
            _ => por(gen_combo(rng, props, depth - 1), gen_combo(rng, props, depth - 1)),
        }
    }
}

fn gen_basic(rng: &mut ChaCha8Rng, props: &[&str], depth: usize) -> PathFormula {
    let d = depth.saturating_sub(1);
    match rng.gen_range(0..5) {
        0 => next(lift(gen_state(rng, props, d))),
        1 => until(lift(gen_state(rng, props, d)), lift(gen_state(rng, props, d))),
        2 => eventually(lift(gen_state(rng, props, d))),
        3 => always(lift(gen_state(rng, props, d))),
        _ => lift(gen_state(rng, props, d)),
    }
}

/// Random CTL-shaped hybrid formula (single temporal operators only).
pub fn gen_h1(rng: &mut ChaCha8Rng, props: &[&str], max_size: usize) -> StateFormula {
    loop {
        let f = gen_h1_state(rng, props, 3);
        if f.size() <= max_size {
            return f;
        }
    }
}

fn gen_h1_state(rng: &mut ChaCha8Rng, props: &[&str], depth: usize) -> StateFormula {
    if depth == 0 || rng.gen_bool(0.3) {
        match rng.gen_range(0..6) {
            0 | 1 => prop(props[rng.gen_range(0..props.len())]),
            2 => var(1),
            3 => StateFormula::Root,
            _ => prop(props[rng.gen_range(0..props.len())]),
        }
    } else {
        let quant: fn(PathFormula) -> StateFormula =
            if rng.gen_bool(0.5) { exists } else { forall };
        match rng.gen_range(0..10) {
            0 => not(gen_h1_state(rng, props, depth - 1)),
            1 => and(gen_h1_state(rng, props, depth - 1), gen_h1_state(rng, props, depth - 1)),
            2 => or(gen_h1_state(rng, props, depth - 1), gen_h1_state(rng, props, depth - 1)),
            3 => bind(1, gen_h1_state(rng, props, depth - 1)),
            4 => at_root(gen_h1_state(rng, props, depth - 1)),
            5 => quant(next(lift(gen_h1_state(rng, props, depth - 1)))),
            6 => quant(until(
                lift(gen_h1_state(rng, props, depth - 1)),
                lift(gen_h1_state(rng, props, depth - 1)),
            )),
            7 => quant(eventually(lift(gen_h1_state(rng, props, depth - 1)))),
            _ => quant(always(lift(gen_h1_state(rng, props, depth - 1)))),
        }
    }
}

/// Random propositional path formula (no quantifiers, no hybrid operators),
/// for instantiating the path-formula equivalences.
pub fn gen_prop_path(rng: &mut ChaCha8Rng, props: &[&str], depth: usize) -> PathFormula {
    if depth == 0 || rng.gen_bool(0.35) {
        match rng.gen_range(0..4) {
            0 => lift(prop(props[rng.gen_range(0..props.len())])),
            1 => lift(not(prop(props[rng.gen_range(0..props.len())]))),
            2 => lift(StateFormula::True),
            _ => lift(prop(props[rng.gen_range(0..props.len())])),
        }
    } else {
        match rng.gen_range(0..9) {
            0 => pnot(gen_prop_path(rng, props, depth - 1)),
            1 => pand(
                gen_prop_path(rng, props, depth - 1),
                gen_prop_path(rng, props, depth - 1),
            ),
            2 => por(
                gen_prop_path(rng, props, depth - 1),
                gen_prop_path(rng, props, depth - 1),
            ),
            3 => next(gen_prop_path(rng, props, depth - 1)),
            4 => until(
                gen_prop_path(rng, props, depth - 1),
                gen_prop_path(rng, props, depth - 1),
            ),
            5 => eventually(gen_prop_path(rng, props, depth - 1)),
            6 => always(gen_prop_path(rng, props, depth - 1)),
            7 => previous(gen_prop_path(rng, props, depth - 1)),
            _ => since(
                gen_prop_path(rng, props, depth - 1),
                gen_prop_path(rng, props, depth - 1),
            ),
        }
    }
}

/// Random lasso word over the propositions, with `|u| <= max_prefix` and
/// `1 <= |v| <= max_period`.
pub fn gen_lasso(
    rng: &mut ChaCha8Rng,
    props: &[&str],
    max_prefix: usize,
    max_period: usize,
) -> btl::checker::lasso::LassoWord {
    let letter = |rng: &mut ChaCha8Rng| -> BTreeSet<String> {
        props
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .map(|p| p.to_string())
            .collect()
    };
    let plen = rng.gen_range(0..=max_prefix);
    let clen = rng.gen_range(1..=max_period);
    let prefix = (0..plen).map(|_| letter(rng)).collect();
    let period = (0..clen).map(|_| letter(rng)).collect();
    btl::checker::lasso::LassoWord::new(prefix, period).expect("period is nonempty")
}

/// Random labeled tree with exactly `nodes` nodes over the propositions.
pub fn gen_tree(rng: &mut ChaCha8Rng, props: &[&str], nodes: usize) -> Tree {
    assert!(nodes >= 1);
    let mut parts: Vec<(u64, Vec<String>, Vec<u64>)> = Vec::new();
    for id in 0..nodes as u64 {
        let labels = props
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .map(|p| p.to_string())
            .collect();
        parts.push((id, labels, Vec::new()));
        if id > 0 {
            let parent = rng.gen_range(0..id);
            parts[parent as usize].2.push(id);
        }
    }
    Tree::from_parts(0, parts).expect("random tree construction is valid")
}

/// Random tiny tiling instance for cross-checking the two solvers.
pub fn gen_tiny_instance(rng: &mut ChaCha8Rng) -> TilingInstance {
    let count = rng.gen_range(1..=3);
    let tiles: Vec<String> = (0..count).map(|i| format!("t{i}")).collect();
    let mut pairs = Vec::new();
    for a in &tiles {
        for b in &tiles {
            pairs.push((a.clone(), b.clone()));
        }
    }
    let pick_rel = |rng: &mut ChaCha8Rng, pairs: &[(String, String)], p: f64| {
        pairs
            .iter()
            .filter(|_| rng.gen_bool(p))
            .cloned()
            .collect::<Vec<_>>()
    };
    let pick_set = |rng: &mut ChaCha8Rng, p: f64| {
        tiles
            .iter()
            .filter(|_| rng.gen_bool(p))
            .cloned()
            .collect::<Vec<_>>()
    };
    TilingInstance::new(
        tiles.clone(),
        pick_rel(rng, &pairs, 0.6),
        pick_rel(rng, &pairs, 0.6),
        pick_set(rng, 0.7),
        pick_set(rng, 0.4),
        1,
    )
    .expect("generated instance is well formed")
}
