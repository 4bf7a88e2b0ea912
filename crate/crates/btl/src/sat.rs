//! Bounded satisfiability search by exhaustive enumeration of small labeled
//! trees.
//!
//! Trees are enumerated up to label-respecting isomorphism: children are kept
//! as a sorted multiset, so sibling reorderings are generated once. This is
//! sound because permuting siblings induces a label-preserving bijection on
//! nodes and on downward paths, and formula truth (including the hybrid
//! operators, which only compare node identities) is invariant under such a
//! bijection.
//!
//! The enumeration order is fixed: by node count, then by a canonical code of
//! the unlabeled shape, then lexicographically by the preorder label vector.
//! Witnesses are therefore reproducible.

use crate::checker::{models, Mode};
use crate::formula::StateFormula;
use crate::models::Tree;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    #[error("candidate budget exceeded after {0} trees")]
    BudgetExceeded(usize),
    #[error("formula uses propositions outside the search universe: {0:?}")]
    PropsNotCovered(Vec<String>),
    #[error("bounds must allow at least one node")]
    EmptyBounds,
}

/// Bounds for the tree enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBounds {
    /// Maximum root-to-leaf edge count.
    pub max_depth: usize,
    /// Maximum children per node.
    pub max_branching: usize,
    /// Proposition universe; labels are subsets of this list.
    pub props: Vec<String>,
    /// Maximum node count.
    pub max_nodes: usize,
}

impl SearchBounds {
    pub fn new(max_depth: usize, max_branching: usize, props: &[&str], max_nodes: usize) -> Self {
        SearchBounds {
            max_depth,
            max_branching,
            props: props.iter().map(|s| s.to_string()).collect(),
            max_nodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatOutcome {
    /// First model in enumeration order.
    Satisfiable(Tree),
    /// No model within the bounds; not a global unsatisfiability claim.
    UnsatWithinBounds,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquisatOutcome {
    /// Same verdict on both formulas. With `both_satisfiable == false` the
    /// agreement only says "no model within bounds" for either.
    Agree { both_satisfiable: bool },
    /// One formula has a model within bounds, the other does not; the model
    /// is the witness. `first_satisfiable` tells which side it belongs to.
    Disagree { witness: Tree, first_satisfiable: bool },
    /// The search budget ran out before a verdict.
    Inconclusive,
}

/// Canonically-shaped labeled tree: children sorted by their own code.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct CanonTree {
    label: u32,
    children: Vec<CanonTree>,
}

impl CanonTree {
    /// Shape with labels erased, used as the primary sort key.
    fn shape_code(&self, out: &mut String) {
        out.push('(');
        for c in &self.children {
            c.shape_code(out);
        }
        out.push(')');
    }

    fn label_vec(&self, out: &mut Vec<u32>) {
        out.push(self.label);
        for c in &self.children {
            c.label_vec(out);
        }
    }
}

struct Enumerator<'b> {
    bounds: &'b SearchBounds,
    /// memo: (node count, depth budget) -> sorted canonical trees
    memo: HashMap<(usize, usize), Vec<CanonTree>>,
}

impl<'b> Enumerator<'b> {
    fn label_count(&self) -> u32 {
        1u32 << self.bounds.props.len()
    }

    /// All canonical trees with exactly `size` nodes and depth <= `depth`.
    fn trees(&mut self, size: usize, depth: usize) -> Vec<CanonTree> {
        if size == 0 {
            return Vec::new();
        }
        if let Some(v) = self.memo.get(&(size, depth)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if size == 1 {
            for label in 0..self.label_count() {
                out.push(CanonTree { label, children: Vec::new() });
            }
        } else if depth > 0 {
            let mut child_sets: Vec<Vec<CanonTree>> = Vec::new();
            let mut current = Vec::new();
            self.child_multisets(size - 1, depth - 1, None, &mut current, &mut child_sets);
            for children in child_sets {
                for label in 0..self.label_count() {
                    out.push(CanonTree { label, children: children.clone() });
                }
            }
        }
        out.sort_by(|a, b| {
            let mut sa = String::new();
            let mut sb = String::new();
            a.shape_code(&mut sa);
            b.shape_code(&mut sb);
            sa.cmp(&sb).then_with(|| {
                let mut la = Vec::new();
                let mut lb = Vec::new();
                a.label_vec(&mut la);
                b.label_vec(&mut lb);
                la.cmp(&lb)
            })
        });
        self.memo.insert((size, depth), out.clone());
        out
    }

    /// Nondecreasing sequences of canonical subtrees with the given total
    /// node count, each of depth <= `depth`, at most `max_branching` long.
    fn child_multisets(
        &mut self,
        total: usize,
        depth: usize,
        min: Option<&CanonTree>,
        current: &mut Vec<CanonTree>,
        out: &mut Vec<Vec<CanonTree>>,
    ) {
        if total == 0 {
            out.push(current.clone());
            return;
        }
        if current.len() >= self.bounds.max_branching {
            return;
        }
        for size in 1..=total {
            for t in self.trees(size, depth) {
                if let Some(m) = min {
                    if t < *m {
                        continue;
                    }
                }
                current.push(t.clone());
                self.child_multisets(total - size, depth, Some(&t), current, out);
                current.pop();
            }
        }
    }
}

fn to_tree(c: &CanonTree, props: &[String]) -> Tree {
    fn walk(
        c: &CanonTree,
        props: &[String],
        next: &mut u64,
        parts: &mut Vec<(u64, Vec<String>, Vec<u64>)>,
    ) -> u64 {
        let id = *next;
        *next += 1;
        let labels = props
            .iter()
            .enumerate()
            .filter(|(i, _)| c.label >> i & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect();
        parts.push((id, labels, Vec::new()));
        let slot = parts.len() - 1;
        let mut kids = Vec::new();
        for ch in &c.children {
            kids.push(walk(ch, props, next, parts));
        }
        parts[slot].2 = kids;
        id
    }
    let mut parts = Vec::new();
    let mut next = 0;
    walk(c, props, &mut next, &mut parts);
    Tree::from_parts(0, parts).expect("enumerated trees are valid")
}

const CANDIDATE_BUDGET: usize = 1_000_000;

/// All trees within the bounds, up to label-respecting isomorphism, in the
/// canonical enumeration order.
pub fn enumerate_trees(bounds: &SearchBounds) -> Result<Vec<Tree>, SatError> {
    if bounds.max_nodes == 0 {
        return Err(SatError::EmptyBounds);
    }
    let mut en = Enumerator { bounds, memo: HashMap::new() };
    let mut out = Vec::new();
    for size in 1..=bounds.max_nodes {
        for c in en.trees(size, bounds.max_depth) {
            if out.len() >= CANDIDATE_BUDGET {
                return Err(SatError::BudgetExceeded(out.len()));
            }
            out.push(to_tree(&c, &bounds.props));
        }
    }
    Ok(out)
}

/// Search for a model of `f` within the bounds under the default leaf-loop
/// path semantics. Note one corner this implies: the repeating leaf is its
/// own successor, so e.g. `down x1 . E X x1` has the single-node model.
pub fn bounded_sat(f: &StateFormula, bounds: &SearchBounds) -> Result<SatOutcome, SatError> {
    bounded_sat_in(f, bounds, Mode::LeafLoop)
}

/// Mode-explicit search. Every returned model is re-checked with [`models`]
/// before being handed out.
pub fn bounded_sat_in(
    f: &StateFormula,
    bounds: &SearchBounds,
    mode: Mode,
) -> Result<SatOutcome, SatError> {
    if bounds.max_nodes == 0 {
        return Err(SatError::EmptyBounds);
    }
    let missing: Vec<String> = f
        .propositions()
        .into_iter()
        .filter(|p| !bounds.props.contains(p))
        .collect();
    if !missing.is_empty() {
        return Err(SatError::PropsNotCovered(missing));
    }
    let mut tested = 0usize;
    let mut en = Enumerator { bounds, memo: HashMap::new() };
    for size in 1..=bounds.max_nodes {
        for c in en.trees(size, bounds.max_depth) {
            tested += 1;
            if tested > CANDIDATE_BUDGET {
                return Err(SatError::BudgetExceeded(tested));
            }
            let tree = to_tree(&c, &bounds.props);
            if models(&tree, f, mode) {
                debug_assert!(models(&tree, f, mode));
                return Ok(SatOutcome::Satisfiable(tree));
            }
        }
    }
    Ok(SatOutcome::UnsatWithinBounds)
}

/// Compare the bounded satisfiability of two formulas; the oracle for
/// satisfiability-preserving rewrite steps.
pub fn equisat_check(
    f: &StateFormula,
    g: &StateFormula,
    bounds: &SearchBounds,
) -> Result<EquisatOutcome, SatError> {
    let fo = match bounded_sat(f, bounds) {
        Ok(o) => o,
        Err(SatError::BudgetExceeded(_)) => return Ok(EquisatOutcome::Inconclusive),
        Err(e) => return Err(e),
    };
    let go = match bounded_sat(g, bounds) {
        Ok(o) => o,
        Err(SatError::BudgetExceeded(_)) => return Ok(EquisatOutcome::Inconclusive),
        Err(e) => return Err(e),
    };
    Ok(match (fo, go) {
        (SatOutcome::Satisfiable(_), SatOutcome::Satisfiable(_)) => {
            EquisatOutcome::Agree { both_satisfiable: true }
        }
        (SatOutcome::UnsatWithinBounds, SatOutcome::UnsatWithinBounds) => {
            EquisatOutcome::Agree { both_satisfiable: false }
        }
        (SatOutcome::Satisfiable(w), SatOutcome::UnsatWithinBounds) => {
            EquisatOutcome::Disagree { witness: w, first_satisfiable: true }
        }
        (SatOutcome::UnsatWithinBounds, SatOutcome::Satisfiable(w)) => {
            EquisatOutcome::Disagree { witness: w, first_satisfiable: false }
        }
    })
}
