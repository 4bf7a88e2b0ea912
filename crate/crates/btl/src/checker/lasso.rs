//! Evaluation of propositional path formulas on lasso words `u . v^w`.
//!
//! This is the validation substrate for the path-formula equivalences used by
//! the rewriter: both sides of an equivalence are evaluated on random lassos
//! and compared. State subformulas must be propositional; quantifiers and
//! hybrid operators have no meaning on a bare word.

use super::seq::EvSeq;
use crate::formula::{PathFormula, StateFormula};
use crate::parser::print_formula;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LassoError {
    #[error("unsupported atom on a lasso word: {0}")]
    UnsupportedAtom(String),
    #[error("lasso period must be nonempty")]
    EmptyPeriod,
}

/// Ultimately periodic propositional word: `prefix` then `period` forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoWord {
    pub prefix: Vec<BTreeSet<String>>,
    pub period: Vec<BTreeSet<String>>,
}

impl LassoWord {
    pub fn new(prefix: Vec<BTreeSet<String>>, period: Vec<BTreeSet<String>>) -> Result<LassoWord, LassoError> {
        if period.is_empty() {
            return Err(LassoError::EmptyPeriod);
        }
        Ok(LassoWord { prefix, period })
    }

    /// Convenience constructor from slices of proposition lists.
    pub fn from_props(prefix: &[&[&str]], period: &[&[&str]]) -> LassoWord {
        let conv = |xs: &[&[&str]]| {
            xs.iter()
                .map(|ps| ps.iter().map(|p| p.to_string()).collect())
                .collect()
        };
        LassoWord::new(conv(prefix), conv(period)).expect("nonempty period")
    }
}

fn eval_prop_state(s: &StateFormula, props: &BTreeSet<String>) -> Result<bool, LassoError> {
    use StateFormula::*;
    match s {
        True => Ok(true),
        False => Ok(false),
        Prop(p) => Ok(props.contains(p)),
        Not(a) => Ok(!eval_prop_state(a, props)?),
        And(a, b) => Ok(eval_prop_state(a, props)? && eval_prop_state(b, props)?),
        Or(a, b) => Ok(eval_prop_state(a, props)? || eval_prop_state(b, props)?),
        Implies(a, b) => Ok(!eval_prop_state(a, props)? || eval_prop_state(b, props)?),
        other => Err(LassoError::UnsupportedAtom(print_formula(other))),
    }
}

fn eval_seq(w: &LassoWord, psi: &PathFormula) -> Result<EvSeq, LassoError> {
    use PathFormula::*;
    Ok(match psi {
        State(s) => {
            let prefix = w
                .prefix
                .iter()
                .map(|ps| eval_prop_state(s, ps))
                .collect::<Result<Vec<_>, _>>()?;
            let cycle = w
                .period
                .iter()
                .map(|ps| eval_prop_state(s, ps))
                .collect::<Result<Vec<_>, _>>()?;
            EvSeq::new(prefix, cycle)
        }
        Not(a) => eval_seq(w, a)?.not(),
        And(a, b) => eval_seq(w, a)?.and(&eval_seq(w, b)?),
        Or(a, b) => eval_seq(w, a)?.or(&eval_seq(w, b)?),
        Next(a) => eval_seq(w, a)?.next(),
        Until(a, b) => eval_seq(w, a)?.until(&eval_seq(w, b)?),
        Eventually(a) => eval_seq(w, a)?.eventually(),
        Always(a) => eval_seq(w, a)?.always(),
        Previous(a) => eval_seq(w, a)?.previous(false),
        WeakPrevious(a) => eval_seq(w, a)?.previous(true),
        Since(a, b) => eval_seq(w, a)?.since(&eval_seq(w, b)?),
        InfinitelyOften(a) => eval_seq(w, a)?.infinitely_often(),
        AlmostAlways(a) => eval_seq(w, a)?.almost_always(),
    })
}

/// Truth of `psi` at position 0 of the word.
pub fn lasso_eval(w: &LassoWord, psi: &PathFormula) -> Result<bool, LassoError> {
    lasso_eval_at(w, psi, 0)
}

/// Truth of `psi` at an arbitrary position.
pub fn lasso_eval_at(w: &LassoWord, psi: &PathFormula, i: usize) -> Result<bool, LassoError> {
    Ok(eval_seq(w, psi)?.at(i))
}
