//! Workbench for hybrid branching-time logics.
//!
//! The crate covers the pieces needed to experiment with CTL, CTL+ and CTL*
//! extended by node variables, past operators and fairness operators:
//!
//! - [`formula`]: state/path formula ASTs with size, depth and class metrics;
//! - [`parser`]: ASCII concrete syntax, pretty-printer, JSON fixtures;
//! - [`models`]: finite trees, transition systems, bounded unraveling, the
//!   `A_i`/`B_k` system families and string Ehrenfeucht-game utilities;
//! - [`checker`]: model checking on finite trees (leaf-loop or strict path
//!   semantics) and evaluation of path formulas on lasso words;
//! - [`rewriter`]: normal forms, the CTL+-to-CTL translation, and the
//!   pipeline eliminating past/fairness operators down to plain past;
//! - [`tiling`]: the corridor tiling game, its formula encoder, and a small
//!   exhaustive game solver;
//! - [`game`]: the spoiler/duplicator game on pairs of finite trees;
//! - [`sat`]: bounded satisfiability search by canonical tree enumeration.

pub mod checker;
pub mod formula;
pub mod game;
pub mod models;
pub mod parser;
pub mod rewriter;
pub mod sat;
pub mod tiling;
