//! Model checking of hybrid formulas on finite trees.
//!
//! Path quantifiers range over the maximal downward paths from the current
//! node; every such path ends at a leaf. In the default leaf-loop mode the
//! leaf then repeats forever, so every path is infinite and eventually
//! constant: all the usual dualities (`!X = X!`, `A = !E!`) hold without
//! end-of-path caveats, and fairness operators are meaningful. Strict mode
//! instead treats the finite sequence as the whole path (`X` is false at the
//! leaf, `Finf` is false, `Ginf` vacuously true); it is kept for experiments.
//!
//! Past operators look at earlier positions of the same path only; position 0
//! has no past even when the path starts below the root.

pub mod lasso;
mod eval;
mod seq;

use crate::formula::{PathFormula, StateFormula};
use crate::models::{NodeId, Tree};
use eval::Evaluator;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("assignment has {got} entries but the formula uses variable x{needed}")]
    AssignmentTooShort { needed: usize, got: usize },
    #[error("assignment entry {0} is not a node of the tree")]
    BadAssignmentNode(usize),
    #[error("node {0} is not a node of the tree")]
    BadNode(usize),
}

/// Path semantics at the end of a finite tree path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    LeafLoop,
    Strict,
}

/// Vector of nodes bound to the hybrid variables `x1 .. xk`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment(pub Vec<NodeId>);

impl Assignment {
    pub fn all(node: NodeId, k: usize) -> Assignment {
        Assignment(vec![node; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Truth of a state formula at node `v` under assignment `assign`.
pub fn check_state(
    tree: &Tree,
    v: NodeId,
    assign: &Assignment,
    f: &StateFormula,
    mode: Mode,
) -> Result<bool, CheckError> {
    if v >= tree.node_count() {
        return Err(CheckError::BadNode(v));
    }
    for &u in &assign.0 {
        if u >= tree.node_count() {
            return Err(CheckError::BadAssignmentNode(u));
        }
    }
    let needed = f.classify().vars;
    if assign.len() < needed {
        return Err(CheckError::AssignmentTooShort { needed, got: assign.len() });
    }
    Ok(Evaluator::new(tree, mode).check_state(v, &assign.0, f))
}

/// Truth of a path formula at position `i` of the path `path` (a downward
/// node sequence ending at a leaf). In leaf-loop mode any `i` is allowed,
/// positions past the end denoting the repeating leaf; in strict mode `i`
/// must lie within the path.
pub fn check_path(
    tree: &Tree,
    path: &[NodeId],
    i: usize,
    assign: &Assignment,
    psi: &PathFormula,
    mode: Mode,
) -> Result<bool, CheckError> {
    assert!(!path.is_empty(), "a path has at least its start node");
    for &u in path {
        if u >= tree.node_count() {
            return Err(CheckError::BadNode(u));
        }
    }
    for &u in &assign.0 {
        if u >= tree.node_count() {
            return Err(CheckError::BadAssignmentNode(u));
        }
    }
    if mode == Mode::Strict {
        assert!(i < path.len(), "position {i} lies outside the strict path");
    }
    Ok(Evaluator::new(tree, mode).check_path(path, i, &assign.0, psi))
}

/// Does the tree model `f`: satisfaction at the root under the all-root
/// assignment of the formula's variable count.
pub fn models(tree: &Tree, f: &StateFormula, mode: Mode) -> bool {
    let k = f.classify().vars;
    let assign = Assignment::all(tree.root(), k);
    Evaluator::new(tree, mode).check_state(tree.root(), &assign.0, f)
}
