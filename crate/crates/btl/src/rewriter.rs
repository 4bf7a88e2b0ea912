//! Formula-to-formula transformations: `U`-normal and `E`-normal forms,
//! negation normal form, the CTL+-to-CTL translation, and the pipeline that
//! eliminates past and fairness operators from quantified Boolean
//! combinations.
//!
//! Hybrid subformulas pass through all transformations untouched: a bound
//! variable behaves like a proposition holding in exactly one node, so the
//! path-level equivalences are insensitive to them.
//!
//! The negation dual of `since` needs one disjunct more than the dual of
//! `until` spelled the same way: `!(a S b)` also holds when `b` never held at
//! all, which on a path with a starting point is expressible as
//! `!b S (!b & wY false)` (the anchor `wY false` marks position 0). The dual
//! of `Y` similarly lands on `wY` because position 0 has no predecessor.

use crate::formula::*;
use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("formula is not CTL-shaped: {0}")]
    NotCtlShaped(String),
    #[error("path formula nests temporal operators beyond CTL+: {0}")]
    BeyondCtlPlus(String),
    #[error("operator not supported by this transformation: {0}")]
    UnsupportedOperator(String),
    #[error("proposition {0} collides with the reserved fresh-proposition namespace p1, p2, ...")]
    ReservedProposition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceKind {
    /// Input and output agree on every tree, node and assignment.
    Logical,
    /// Input and output agree on satisfiability only (the fairness
    /// elimination step introduces fresh propositions).
    SatisfiabilityPreserving,
}

/// Summary of a pipeline run.
#[derive(Debug, Clone)]
pub struct RewriteReport {
    pub input: Formula,
    pub output: Formula,
    pub input_size: usize,
    pub output_size: usize,
    pub kind: EquivalenceKind,
    pub fresh_propositions: Vec<String>,
}

impl RewriteReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "input": crate::parser::print_any_formula(&self.input),
            "output": crate::parser::print_any_formula(&self.output),
            "input_size": self.input_size,
            "output_size": self.output_size,
            "equivalence": self.kind,
            "fresh_propositions": self.fresh_propositions,
        })
    }
}

// ---------------------------------------------------------------------------
// Simplifying constructors: unit laws for true/false only, nothing cleverer.

fn sand(a: StateFormula, b: StateFormula) -> StateFormula {
    use StateFormula::*;
    match (a, b) {
        (True, x) | (x, True) => x,
        (False, _) | (_, False) => False,
        (a, b) => and(a, b),
    }
}

fn sor(a: StateFormula, b: StateFormula) -> StateFormula {
    use StateFormula::*;
    match (a, b) {
        (False, x) | (x, False) => x,
        (True, _) | (_, True) => True,
        (a, b) => or(a, b),
    }
}

fn sand_all<I: IntoIterator<Item = StateFormula>>(items: I) -> StateFormula {
    items.into_iter().fold(StateFormula::True, sand)
}

fn sor_all<I: IntoIterator<Item = StateFormula>>(items: I) -> StateFormula {
    items.into_iter().fold(StateFormula::False, sor)
}

// ---------------------------------------------------------------------------
// U-normal form: only the combinations EX, EU, AU.

pub fn to_u_normal(f: &StateFormula) -> Result<StateFormula, RewriteError> {
    use StateFormula::*;
    Ok(match f {
        True | False | Prop(_) | Var(_) | Root => f.clone(),
        Not(a) => not(to_u_normal(a)?),
        And(a, b) => and(to_u_normal(a)?, to_u_normal(b)?),
        Or(a, b) => or(to_u_normal(a)?, to_u_normal(b)?),
        Implies(a, b) => implies(to_u_normal(a)?, to_u_normal(b)?),
        Bind(i, a) => bind(*i, to_u_normal(a)?),
        AtVar(i, a) => at_var(*i, to_u_normal(a)?),
        AtRoot(a) => at_root(to_u_normal(a)?),
        Exists(p) => match basic_parts(p)? {
            Basic::Lift(s) => to_u_normal(&s)?,
            Basic::Next(a) => ex(to_u_normal(&a)?),
            Basic::Until(a, b) => eu(to_u_normal(&a)?, to_u_normal(&b)?),
            Basic::Eventually(b) => eu(StateFormula::True, to_u_normal(&b)?),
            Basic::Always(a) => not(au(StateFormula::True, not(to_u_normal(&a)?))),
        },
        Forall(p) => match basic_parts(p)? {
            Basic::Lift(s) => to_u_normal(&s)?,
            Basic::Next(a) => not(ex(not(to_u_normal(&a)?))),
            Basic::Until(a, b) => au(to_u_normal(&a)?, to_u_normal(&b)?),
            Basic::Eventually(b) => au(StateFormula::True, to_u_normal(&b)?),
            Basic::Always(a) => not(eu(StateFormula::True, not(to_u_normal(&a)?))),
        },
    })
}

/// E-normal form: no `A` quantifier at all. `A(psi U chi)` becomes
/// `!E(!chi U (!chi & !psi)) & !E G !chi`; repeated application may blow up
/// exponentially.
pub fn to_e_normal(f: &StateFormula) -> Result<StateFormula, RewriteError> {
    use StateFormula::*;
    Ok(match f {
        True | False | Prop(_) | Var(_) | Root => f.clone(),
        Not(a) => not(to_e_normal(a)?),
        And(a, b) => and(to_e_normal(a)?, to_e_normal(b)?),
        Or(a, b) => or(to_e_normal(a)?, to_e_normal(b)?),
        Implies(a, b) => implies(to_e_normal(a)?, to_e_normal(b)?),
        Bind(i, a) => bind(*i, to_e_normal(a)?),
        AtVar(i, a) => at_var(*i, to_e_normal(a)?),
        AtRoot(a) => at_root(to_e_normal(a)?),
        Exists(p) => match basic_parts(p)? {
            Basic::Lift(s) => to_e_normal(&s)?,
            Basic::Next(a) => ex(to_e_normal(&a)?),
            Basic::Until(a, b) => eu(to_e_normal(&a)?, to_e_normal(&b)?),
            Basic::Eventually(b) => ef(to_e_normal(&b)?),
            Basic::Always(a) => eg(to_e_normal(&a)?),
        },
        Forall(p) => match basic_parts(p)? {
            Basic::Lift(s) => to_e_normal(&s)?,
            Basic::Next(a) => not(ex(not(to_e_normal(&a)?))),
            Basic::Until(psi, chi) => {
                let psi = to_e_normal(&psi)?;
                let chi = to_e_normal(&chi)?;
                and(
                    not(eu(not(chi.clone()), and(not(chi.clone()), not(psi)))),
                    not(eg(not(chi))),
                )
            }
            Basic::Eventually(b) => not(eg(not(to_e_normal(&b)?))),
            Basic::Always(a) => not(ef(not(to_e_normal(&a)?))),
        },
    })
}

enum Basic {
    Lift(StateFormula),
    Next(StateFormula),
    Until(StateFormula, StateFormula),
    Eventually(StateFormula),
    Always(StateFormula),
}

fn basic_parts(p: &PathFormula) -> Result<Basic, RewriteError> {
    use PathFormula::*;
    let state = |q: &PathFormula| -> Result<StateFormula, RewriteError> {
        match q {
            State(s) => Ok((**s).clone()),
            other => Err(RewriteError::NotCtlShaped(crate::parser::print_path_formula(other))),
        }
    };
    match p {
        State(s) => Ok(Basic::Lift((**s).clone())),
        Next(a) => Ok(Basic::Next(state(a)?)),
        Until(a, b) => Ok(Basic::Until(state(a)?, state(b)?)),
        Eventually(a) => Ok(Basic::Eventually(state(a)?)),
        Always(a) => Ok(Basic::Always(state(a)?)),
        other => Err(RewriteError::NotCtlShaped(crate::parser::print_path_formula(other))),
    }
}

// ---------------------------------------------------------------------------
// Negation normal form

/// Push negations down to atoms at both the state and the path level. At the
/// path level this uses the duals of `X`/`Y`/`U`/`S` and of the fairness
/// operators.
pub fn push_negations(f: &Formula) -> Formula {
    match f {
        Formula::State(s) => Formula::State(nnf_state(s)),
        Formula::Path(p) => Formula::Path(nnf_path(p, false)),
    }
}

/// Path-level-only NNF used inside the translation pipelines: lifted state
/// formulas are opaque atoms (their contents were already translated), so a
/// negated lift stays a state-level negation instead of being dualized back
/// into a quantified Boolean combination.
fn nnf_path_over_atoms(p: &PathFormula, keep_neg_finf: bool) -> PathFormula {
    use PathFormula::*;
    match p {
        State(_) => p.clone(),
        Not(a) => nnf_path_over_atoms_neg(a, keep_neg_finf),
        And(a, b) => cpand(
            nnf_path_over_atoms(a, keep_neg_finf),
            nnf_path_over_atoms(b, keep_neg_finf),
        ),
        Or(a, b) => cpor(
            nnf_path_over_atoms(a, keep_neg_finf),
            nnf_path_over_atoms(b, keep_neg_finf),
        ),
        Next(a) => next(nnf_path_over_atoms(a, keep_neg_finf)),
        Until(a, b) => until(
            nnf_path_over_atoms(a, keep_neg_finf),
            nnf_path_over_atoms(b, keep_neg_finf),
        ),
        Eventually(a) => eventually(nnf_path_over_atoms(a, keep_neg_finf)),
        Always(a) => always(nnf_path_over_atoms(a, keep_neg_finf)),
        Previous(a) => previous(nnf_path_over_atoms(a, keep_neg_finf)),
        WeakPrevious(a) => weak_previous(nnf_path_over_atoms(a, keep_neg_finf)),
        Since(a, b) => since(
            nnf_path_over_atoms(a, keep_neg_finf),
            nnf_path_over_atoms(b, keep_neg_finf),
        ),
        InfinitelyOften(a) => inf_often(nnf_path_over_atoms(a, keep_neg_finf)),
        AlmostAlways(a) => alm_always(nnf_path_over_atoms(a, keep_neg_finf)),
    }
}

fn nnf_path_over_atoms_neg(p: &PathFormula, keep_neg_finf: bool) -> PathFormula {
    use PathFormula::*;
    match p {
        State(s) => lift(not((**s).clone())),
        Not(a) => nnf_path_over_atoms(a, keep_neg_finf),
        And(a, b) => cpor(
            nnf_path_over_atoms_neg(a, keep_neg_finf),
            nnf_path_over_atoms_neg(b, keep_neg_finf),
        ),
        Or(a, b) => cpand(
            nnf_path_over_atoms_neg(a, keep_neg_finf),
            nnf_path_over_atoms_neg(b, keep_neg_finf),
        ),
        Next(a) => next(nnf_path_over_atoms_neg(a, keep_neg_finf)),
        Previous(a) => weak_previous(nnf_path_over_atoms_neg(a, keep_neg_finf)),
        WeakPrevious(a) => previous(nnf_path_over_atoms_neg(a, keep_neg_finf)),
        Until(a, b) => {
            let pa = nnf_path_over_atoms(a, keep_neg_finf);
            let na = nnf_path_over_atoms_neg(a, keep_neg_finf);
            let nb = nnf_path_over_atoms_neg(b, keep_neg_finf);
            cpor(
                until(cpand(pa, nb.clone()), cpand(na, nb.clone())),
                always(nb),
            )
        }
        Since(a, b) => {
            let pa = nnf_path_over_atoms(a, keep_neg_finf);
            let na = nnf_path_over_atoms_neg(a, keep_neg_finf);
            let nb = nnf_path_over_atoms_neg(b, keep_neg_finf);
            let never = since(
                nb.clone(),
                cpand(nb.clone(), weak_previous(lift(StateFormula::False))),
            );
            cpor(since(cpand(pa, nb.clone()), cpand(na, nb)), never)
        }
        Eventually(a) => always(nnf_path_over_atoms_neg(a, keep_neg_finf)),
        Always(a) => eventually(nnf_path_over_atoms_neg(a, keep_neg_finf)),
        InfinitelyOften(a) => {
            if keep_neg_finf {
                pnot(inf_often(nnf_path_over_atoms(a, keep_neg_finf)))
            } else {
                alm_always(nnf_path_over_atoms_neg(a, keep_neg_finf))
            }
        }
        AlmostAlways(a) => inf_often(nnf_path_over_atoms_neg(a, keep_neg_finf)),
    }
}

fn nnf_state(f: &StateFormula) -> StateFormula {
    use StateFormula::*;
    match f {
        True | False | Prop(_) | Var(_) | Root => f.clone(),
        Not(a) => nnf_state_neg(a),
        And(a, b) => and(nnf_state(a), nnf_state(b)),
        Or(a, b) => or(nnf_state(a), nnf_state(b)),
        Implies(a, b) => or(nnf_state_neg(a), nnf_state(b)),
        Exists(p) => exists(nnf_path(p, false)),
        Forall(p) => forall(nnf_path(p, false)),
        Bind(i, a) => bind(*i, nnf_state(a)),
        AtVar(i, a) => at_var(*i, nnf_state(a)),
        AtRoot(a) => at_root(nnf_state(a)),
    }
}

fn nnf_state_neg(f: &StateFormula) -> StateFormula {
    use StateFormula::*;
    match f {
        True => False,
        False => True,
        Prop(_) | Var(_) | Root => not(f.clone()),
        Not(a) => nnf_state(a),
        And(a, b) => or(nnf_state_neg(a), nnf_state_neg(b)),
        Or(a, b) => and(nnf_state_neg(a), nnf_state_neg(b)),
        Implies(a, b) => and(nnf_state(a), nnf_state_neg(b)),
        Exists(p) => forall(nnf_path_neg(p, false)),
        Forall(p) => exists(nnf_path_neg(p, false)),
        Bind(i, a) => bind(*i, nnf_state_neg(a)),
        AtVar(i, a) => at_var(*i, nnf_state_neg(a)),
        AtRoot(a) => at_root(nnf_state_neg(a)),
    }
}

fn nnf_path(p: &PathFormula, keep_neg_finf: bool) -> PathFormula {
    use PathFormula::*;
    match p {
        State(s) => lift(nnf_state(s)),
        Not(a) => nnf_path_neg(a, keep_neg_finf),
        And(a, b) => cpand(nnf_path(a, keep_neg_finf), nnf_path(b, keep_neg_finf)),
        Or(a, b) => cpor(nnf_path(a, keep_neg_finf), nnf_path(b, keep_neg_finf)),
        Next(a) => next(nnf_path(a, keep_neg_finf)),
        Until(a, b) => until(nnf_path(a, keep_neg_finf), nnf_path(b, keep_neg_finf)),
        Eventually(a) => eventually(nnf_path(a, keep_neg_finf)),
        Always(a) => always(nnf_path(a, keep_neg_finf)),
        Previous(a) => previous(nnf_path(a, keep_neg_finf)),
        WeakPrevious(a) => weak_previous(nnf_path(a, keep_neg_finf)),
        Since(a, b) => since(nnf_path(a, keep_neg_finf), nnf_path(b, keep_neg_finf)),
        InfinitelyOften(a) => inf_often(nnf_path(a, keep_neg_finf)),
        AlmostAlways(a) => alm_always(nnf_path(a, keep_neg_finf)),
    }
}

fn nnf_path_neg(p: &PathFormula, keep_neg_finf: bool) -> PathFormula {
    use PathFormula::*;
    match p {
        State(s) => lift(nnf_state_neg(s)),
        Not(a) => nnf_path(a, keep_neg_finf),
        And(a, b) => cpor(nnf_path_neg(a, keep_neg_finf), nnf_path_neg(b, keep_neg_finf)),
        Or(a, b) => cpand(nnf_path_neg(a, keep_neg_finf), nnf_path_neg(b, keep_neg_finf)),
        // !X a = X !a
        Next(a) => next(nnf_path_neg(a, keep_neg_finf)),
        // !Y a = wY !a (both are false resp. true at position 0)
        Previous(a) => weak_previous(nnf_path_neg(a, keep_neg_finf)),
        WeakPrevious(a) => previous(nnf_path_neg(a, keep_neg_finf)),
        // !(a U b) = ((a & !b) U (!a & !b)) | G !b
        Until(a, b) => {
            let pa = nnf_path(a, keep_neg_finf);
            let na = nnf_path_neg(a, keep_neg_finf);
            let nb = nnf_path_neg(b, keep_neg_finf);
            cpor(
                until(cpand(pa, nb.clone()), cpand(na, nb.clone())),
                always(nb),
            )
        }
        // !(a S b) = ((a & !b) S (!a & !b)) | (!b S (!b & wY false)):
        // the second disjunct says b never held up to now.
        Since(a, b) => {
            let pa = nnf_path(a, keep_neg_finf);
            let na = nnf_path_neg(a, keep_neg_finf);
            let nb = nnf_path_neg(b, keep_neg_finf);
            let never = since(
                nb.clone(),
                cpand(nb.clone(), weak_previous(lift(StateFormula::False))),
            );
            cpor(since(cpand(pa, nb.clone()), cpand(na, nb)), never)
        }
        Eventually(a) => always(nnf_path_neg(a, keep_neg_finf)),
        Always(a) => eventually(nnf_path_neg(a, keep_neg_finf)),
        // !Finf a is kept as a leaf in the elimination pipeline, where a
        // dedicated step removes it; otherwise it dualizes to Ginf !a.
        InfinitelyOften(a) => {
            if keep_neg_finf {
                pnot(inf_often(nnf_path(a, keep_neg_finf)))
            } else {
                alm_always(nnf_path_neg(a, keep_neg_finf))
            }
        }
        // !Ginf a = Finf !a
        AlmostAlways(a) => inf_often(nnf_path_neg(a, keep_neg_finf)),
    }
}

// ---------------------------------------------------------------------------
// CTL+ to CTL

/// Translate a CTL+(-level hybrid) formula into an equivalent CTL-level one.
/// Past and fairness operators are not accepted here; they go through
/// [`eliminate_past_fairness`] first.
pub fn ctlplus_to_ctl(f: &StateFormula) -> Result<StateFormula, RewriteError> {
    use StateFormula::*;
    Ok(match f {
        True | False | Prop(_) | Var(_) | Root => f.clone(),
        Not(a) => not(ctlplus_to_ctl(a)?),
        And(a, b) => and(ctlplus_to_ctl(a)?, ctlplus_to_ctl(b)?),
        Or(a, b) => or(ctlplus_to_ctl(a)?, ctlplus_to_ctl(b)?),
        Implies(a, b) => implies(ctlplus_to_ctl(a)?, ctlplus_to_ctl(b)?),
        Bind(i, a) => bind(*i, ctlplus_to_ctl(a)?),
        AtVar(i, a) => at_var(*i, ctlplus_to_ctl(a)?),
        AtRoot(a) => at_root(ctlplus_to_ctl(a)?),
        Exists(p) => translate_exists(p)?,
        Forall(p) => not(translate_exists(&pnot((**p).clone()))?),
    })
}

fn translate_exists(p: &PathFormula) -> Result<StateFormula, RewriteError> {
    let rewritten = rewrite_path_atoms(p)?;
    let nnf = nnf_path_over_atoms(&rewritten, false);
    let disjuncts = dnf(&nnf)?;
    let mut out = Vec::new();
    for conj in disjuncts {
        out.push(translate_conjunct(conj)?);
    }
    Ok(sor_all(out))
}

/// Recursively translate the state-formula operands of a path formula.
fn rewrite_path_atoms(p: &PathFormula) -> Result<PathFormula, RewriteError> {
    use PathFormula::*;
    Ok(match p {
        State(s) => lift(ctlplus_to_ctl(s)?),
        Not(a) => pnot(rewrite_path_atoms(a)?),
        And(a, b) => pand(rewrite_path_atoms(a)?, rewrite_path_atoms(b)?),
        Or(a, b) => por(rewrite_path_atoms(a)?, rewrite_path_atoms(b)?),
        Next(a) => next(rewrite_path_atoms(a)?),
        Until(a, b) => until(rewrite_path_atoms(a)?, rewrite_path_atoms(b)?),
        Eventually(a) => eventually(rewrite_path_atoms(a)?),
        Always(a) => always(rewrite_path_atoms(a)?),
        Previous(_) | WeakPrevious(_) | Since(_, _) | InfinitelyOften(_) | AlmostAlways(_) => {
            return Err(RewriteError::UnsupportedOperator(
                crate::parser::print_path_formula(p),
            ))
        }
    })
}

/// Disjunctive normal form over an NNF path formula whose leaves are basics,
/// lifted state formulas, or (in the pipeline) negated fairness leaves.
fn dnf(p: &PathFormula) -> Result<Vec<Vec<PathFormula>>, RewriteError> {
    use PathFormula::*;
    Ok(match p {
        Or(a, b) => {
            let mut l = dnf(a)?;
            l.extend(dnf(b)?);
            l
        }
        And(a, b) => {
            let l = dnf(a)?;
            let r = dnf(b)?;
            let mut out = Vec::with_capacity(l.len() * r.len());
            for x in &l {
                for y in &r {
                    let mut c = x.clone();
                    c.extend(y.iter().cloned());
                    out.push(c);
                }
            }
            out
        }
        other => vec![vec![other.clone()]],
    })
}

fn operand_state(p: &PathFormula) -> Result<StateFormula, RewriteError> {
    match p {
        PathFormula::State(s) => Ok((**s).clone()),
        other => Err(RewriteError::BeyondCtlPlus(crate::parser::print_path_formula(
            other,
        ))),
    }
}

/// Translate `E[conjunction of basics]` into CTL. After merging the `X` and
/// `G` conjuncts there is one of each at most; position-0 state conjuncts
/// move outside the quantifier.
fn translate_conjunct(conjuncts: Vec<PathFormula>) -> Result<StateFormula, RewriteError> {
    use PathFormula::*;
    let mut states = Vec::new();
    let mut nexts: Vec<StateFormula> = Vec::new();
    let mut alwayses: Vec<StateFormula> = Vec::new();
    let mut untils: Vec<(StateFormula, StateFormula)> = Vec::new();
    for c in conjuncts {
        match c {
            State(s) => states.push(*s),
            Next(a) => nexts.push(operand_state(&a)?),
            Always(a) => alwayses.push(operand_state(&a)?),
            Until(a, b) => untils.push((operand_state(&a)?, operand_state(&b)?)),
            Eventually(b) => untils.push((StateFormula::True, operand_state(&b)?)),
            other => {
                return Err(RewriteError::BeyondCtlPlus(
                    crate::parser::print_path_formula(&other),
                ))
            }
        }
    }
    // (4): X a & X b = X (a & b); (5): G a & G b = G (a & b)
    let chi_next = if nexts.is_empty() { None } else { Some(sand_all(nexts)) };
    let xi = if alwayses.is_empty() { None } else { Some(sand_all(alwayses)) };
    let quantified = match chi_next {
        Some(chi) => emit_untils_with_next(&untils, chi, xi),
        None => emit_untils(&untils, xi),
    };
    Ok(sand(sand_all(states), quantified))
}

/// `E[/\ (a_i U b_i) & X chi & G xi]`: a disjunction over the set `I` of
/// untils fulfilled at the current position; the rest step through the `X`.
fn emit_untils_with_next(
    untils: &[(StateFormula, StateFormula)],
    chi: StateFormula,
    xi: Option<StateFormula>,
) -> StateFormula {
    let n = untils.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let mut here = Vec::new();
        let mut remaining = Vec::new();
        for (i, u) in untils.iter().enumerate() {
            if mask >> i & 1 == 1 {
                here.push(u.1.clone());
            } else {
                here.push(u.0.clone());
                remaining.push(u.clone());
            }
        }
        if let Some(xi) = &xi {
            here.push(xi.clone());
        }
        let inner = emit_untils(&remaining, xi.clone());
        out.push(sand(sand_all(here), ex(sand(chi.clone(), inner))));
    }
    sor_all(out)
}

/// `E[/\ (a_i U b_i) & G chi]`: the disjunction over all orders in which the
/// `b_i` can first occur, each order a chain of nested `EU`s ending in
/// `EG chi`.
fn emit_untils(untils: &[(StateFormula, StateFormula)], chi: Option<StateFormula>) -> StateFormula {
    let n = untils.len();
    if n == 0 {
        return match chi {
            Some(c) => {
                if c == StateFormula::True {
                    StateFormula::True
                } else {
                    eg(c)
                }
            }
            None => StateFormula::True,
        };
    }
    let tail = match &chi {
        Some(c) if *c != StateFormula::True => eg(c.clone()),
        _ => StateFormula::True,
    };
    let mut out = Vec::new();
    for perm in (0..n).permutations(n) {
        let mut inner = tail.clone();
        // build from the innermost level outwards
        for j in (0..n).rev() {
            let fulfilled: Vec<usize> = perm[..j].to_vec();
            let mut lhs: Vec<StateFormula> = untils
                .iter()
                .enumerate()
                .filter(|(i, _)| !fulfilled.contains(i))
                .map(|(_, u)| u.0.clone())
                .collect();
            if let Some(c) = &chi {
                lhs.push(c.clone());
            }
            inner = eu(sand_all(lhs), sand(untils[perm[j]].1.clone(), inner));
        }
        out.push(inner);
    }
    sor_all(out)
}

// ---------------------------------------------------------------------------
// Elimination of past and fairness operators

/// Rewrite a quantified-Boolean-combination formula with `Y`, `S`, `Finf`,
/// `Ginf` into one whose quantifiers carry single temporal operators, with
/// `Y` and `S` retained and the fairness operators gone.
///
/// All steps are logical equivalences except the final fairness elimination,
/// which preserves satisfiability with the help of fresh propositions
/// `p1, p2, ...`; inputs already using that namespace are rejected.
///
/// Past conjuncts extracted from the outermost quantifier are position-0
/// facts; at the top level they stay as path-formula conjuncts (so the result
/// can be a path formula), in nested state positions each extracted conjunct
/// `beta` is wrapped back as `E beta`, which is sound because the value of a
/// pure-past formula at position 0 does not depend on the chosen path.
pub fn eliminate_past_fairness(f: &Formula) -> Result<RewriteReport, RewriteError> {
    for p in f.propositions() {
        if is_reserved_prop(&p) {
            return Err(RewriteError::ReservedProposition(p));
        }
    }
    let mut ctx = ElimCtx { fresh: Vec::new(), fired_sat_step: false };
    let output = match f {
        Formula::State(s) => match s {
            StateFormula::Exists(p) => {
                let disjuncts = rewrite_exists(p, &mut ctx)?;
                assemble_top(disjuncts)
            }
            other => Formula::State(elim_state(other, &mut ctx)?),
        },
        Formula::Path(p) => Formula::Path(elim_path_shallow(p, &mut ctx)?),
    };
    let kind = if ctx.fired_sat_step {
        EquivalenceKind::SatisfiabilityPreserving
    } else {
        EquivalenceKind::Logical
    };
    Ok(RewriteReport {
        input: f.clone(),
        output_size: output.size(),
        output,
        input_size: f.size(),
        kind,
        fresh_propositions: ctx.fresh,
    })
}

fn is_reserved_prop(p: &str) -> bool {
    p.len() > 1 && p.starts_with('p') && p[1..].chars().all(|c| c.is_ascii_digit())
}

struct ElimCtx {
    fresh: Vec<String>,
    fired_sat_step: bool,
}

impl ElimCtx {
    fn fresh_prop(&mut self) -> StateFormula {
        let name = format!("p{}", self.fresh.len() + 1);
        self.fresh.push(name.clone());
        prop(&name)
    }
}

/// One disjunct of a rewritten quantifier: extracted position-0 path
/// conjuncts plus the state-formula core.
struct ElimDisjunct {
    pasts: Vec<PathFormula>,
    state: StateFormula,
}

fn assemble_top(disjuncts: Vec<ElimDisjunct>) -> Formula {
    if disjuncts.iter().all(|d| d.pasts.is_empty()) {
        return Formula::State(sor_all(disjuncts.into_iter().map(|d| d.state)));
    }
    let parts: Vec<PathFormula> = disjuncts
        .into_iter()
        .map(|d| {
            let mut conj = d.pasts;
            if d.state != StateFormula::True || conj.is_empty() {
                conj.push(lift(d.state));
            }
            pand_all(conj)
        })
        .collect();
    Formula::Path(por_all(parts))
}

fn embed_nested(disjuncts: Vec<ElimDisjunct>) -> StateFormula {
    sor_all(disjuncts.into_iter().map(|d| {
        let wrapped = d.pasts.into_iter().map(exists);
        sand(sand_all(wrapped), d.state)
    }))
}

fn elim_state(f: &StateFormula, ctx: &mut ElimCtx) -> Result<StateFormula, RewriteError> {
    use StateFormula::*;
    Ok(match f {
        True | False | Prop(_) | Var(_) | Root => f.clone(),
        Not(a) => not(elim_state(a, ctx)?),
        And(a, b) => and(elim_state(a, ctx)?, elim_state(b, ctx)?),
        Or(a, b) => or(elim_state(a, ctx)?, elim_state(b, ctx)?),
        Implies(a, b) => implies(elim_state(a, ctx)?, elim_state(b, ctx)?),
        Bind(i, a) => bind(*i, elim_state(a, ctx)?),
        AtVar(i, a) => at_var(*i, elim_state(a, ctx)?),
        AtRoot(a) => at_root(elim_state(a, ctx)?),
        Exists(p) => embed_nested(rewrite_exists(p, ctx)?),
        // A psi = !E !psi
        Forall(p) => not(embed_nested(rewrite_exists(&pnot((**p).clone()), ctx)?)),
    })
}

/// Top-level path formulas only get their quantified state subformulas
/// rewritten; the surrounding path structure stays.
fn elim_path_shallow(p: &PathFormula, ctx: &mut ElimCtx) -> Result<PathFormula, RewriteError> {
    use PathFormula::*;
    Ok(match p {
        State(s) => lift(elim_state(s, ctx)?),
        Not(a) => pnot(elim_path_shallow(a, ctx)?),
        And(a, b) => pand(elim_path_shallow(a, ctx)?, elim_path_shallow(b, ctx)?),
        Or(a, b) => por(elim_path_shallow(a, ctx)?, elim_path_shallow(b, ctx)?),
        Next(a) => next(elim_path_shallow(a, ctx)?),
        Until(a, b) => until(elim_path_shallow(a, ctx)?, elim_path_shallow(b, ctx)?),
        Eventually(a) => eventually(elim_path_shallow(a, ctx)?),
        Always(a) => always(elim_path_shallow(a, ctx)?),
        Previous(a) => previous(elim_path_shallow(a, ctx)?),
        WeakPrevious(a) => weak_previous(elim_path_shallow(a, ctx)?),
        Since(a, b) => since(elim_path_shallow(a, ctx)?, elim_path_shallow(b, ctx)?),
        InfinitelyOften(_) | AlmostAlways(_) => {
            return Err(RewriteError::UnsupportedOperator(
                "fairness operators on a bare top-level path formula".into(),
            ))
        }
    })
}

/// The conjunct classification of one DNF disjunct of a quantified body.
#[derive(Default)]
struct Bundle {
    states: Vec<StateFormula>,
    pasts: Vec<PathFormula>,
    nexts: Vec<StateFormula>,
    always: Vec<StateFormula>,
    alm_always: Vec<StateFormula>,
    untils: Vec<(StateFormula, StateFormula)>,
    finfs: Vec<StateFormula>,
    neg_finfs: Vec<StateFormula>,
}

/// Formulas built from lifted state formulas with `Y`, `wY`, `S` and Boolean
/// connectives only. Their value at position 0 of a path is determined by the
/// start node, so they can be pulled out of a path quantifier.
fn is_past_only(p: &PathFormula) -> bool {
    use PathFormula::*;
    match p {
        State(_) => true,
        Not(a) | Previous(a) | WeakPrevious(a) => is_past_only(a),
        And(a, b) | Or(a, b) | Since(a, b) => is_past_only(a) && is_past_only(b),
        Next(_) | Until(_, _) | Eventually(_) | Always(_) | InfinitelyOften(_)
        | AlmostAlways(_) => false,
    }
}

fn rewrite_exists(
    p: &PathFormula,
    ctx: &mut ElimCtx,
) -> Result<Vec<ElimDisjunct>, RewriteError> {
    let atoms_done = elim_path_atoms(p, ctx)?;
    let nnf = nnf_path_over_atoms(&atoms_done, true);
    let disjuncts = dnf(&nnf)?;
    let mut out = Vec::new();
    for conj in disjuncts {
        let mut b = Bundle::default();
        let mut prev_ops: Vec<StateFormula> = Vec::new();
        let mut weak_prev_ops: Vec<StateFormula> = Vec::new();
        for c in conj {
            use PathFormula::*;
            match c {
                State(s) => b.states.push(*s),
                Next(a) => b.nexts.push(operand_state(&a)?),
                Always(a) => b.always.push(operand_state(&a)?),
                AlmostAlways(a) => b.alm_always.push(operand_state(&a)?),
                Until(a, x) => b.untils.push((operand_state(&a)?, operand_state(&x)?)),
                Eventually(x) => b.untils.push((StateFormula::True, operand_state(&x)?)),
                InfinitelyOften(a) => b.finfs.push(operand_state(&a)?),
                Not(inner) => match *inner {
                    InfinitelyOften(a) => b.neg_finfs.push(operand_state(&a)?),
                    other => {
                        return Err(RewriteError::UnsupportedOperator(
                            crate::parser::print_path_formula(&other),
                        ))
                    }
                },
                Previous(a) => match *a {
                    State(s) => prev_ops.push(*s),
                    other => {
                        if is_past_only(&other) {
                            b.pasts.push(previous(other));
                        } else {
                            return Err(RewriteError::UnsupportedOperator(
                                crate::parser::print_path_formula(&other),
                            ));
                        }
                    }
                },
                WeakPrevious(a) => match *a {
                    State(s) => weak_prev_ops.push(*s),
                    other => {
                        if is_past_only(&other) {
                            b.pasts.push(weak_previous(other));
                        } else {
                            return Err(RewriteError::UnsupportedOperator(
                                crate::parser::print_path_formula(&other),
                            ));
                        }
                    }
                },
                Since(a, x) => {
                    if is_past_only(&a) && is_past_only(&x) {
                        b.pasts.push(since((*a).clone(), (*x).clone()));
                    } else {
                        return Err(RewriteError::UnsupportedOperator(
                            crate::parser::print_path_formula(&since(
                                (*a).clone(),
                                (*x).clone(),
                            )),
                        ));
                    }
                }
                other @ (And(_, _) | Or(_, _)) => {
                    return Err(RewriteError::UnsupportedOperator(
                        crate::parser::print_path_formula(&other),
                    ))
                }
            }
        }
        // (8): Y a & Y b = Y (a & b); likewise for wY.
        if !prev_ops.is_empty() {
            b.pasts.push(previous(lift(sand_all(prev_ops))));
        }
        if !weak_prev_ops.is_empty() {
            b.pasts.push(weak_previous(lift(sand_all(weak_prev_ops))));
        }
        let core = emit_bundle(&b, ctx);
        out.push(ElimDisjunct {
            pasts: b.pasts,
            state: sand(sand_all(b.states.clone()), core),
        });
    }
    Ok(out)
}

fn elim_path_atoms(p: &PathFormula, ctx: &mut ElimCtx) -> Result<PathFormula, RewriteError> {
    use PathFormula::*;
    Ok(match p {
        State(s) => lift(elim_state(s, ctx)?),
        Not(a) => pnot(elim_path_atoms(a, ctx)?),
        And(a, b) => pand(elim_path_atoms(a, ctx)?, elim_path_atoms(b, ctx)?),
        Or(a, b) => por(elim_path_atoms(a, ctx)?, elim_path_atoms(b, ctx)?),
        Next(a) => next(elim_path_atoms(a, ctx)?),
        Until(a, b) => until(elim_path_atoms(a, ctx)?, elim_path_atoms(b, ctx)?),
        Eventually(a) => eventually(elim_path_atoms(a, ctx)?),
        Always(a) => always(elim_path_atoms(a, ctx)?),
        Previous(a) => previous(elim_path_atoms(a, ctx)?),
        WeakPrevious(a) => weak_previous(elim_path_atoms(a, ctx)?),
        Since(a, b) => since(elim_path_atoms(a, ctx)?, elim_path_atoms(b, ctx)?),
        InfinitelyOften(a) => inf_often(elim_path_atoms(a, ctx)?),
        AlmostAlways(a) => alm_always(elim_path_atoms(a, ctx)?),
    })
}

/// Emit the quantified core of one disjunct, applying the elimination steps
/// in their pipeline order: the `X` step, then the until permutations, then
/// `Ginf` removal, then `!Finf` removal, then the satisfiability-preserving
/// `Finf` removal.
fn emit_bundle(b: &Bundle, ctx: &mut ElimCtx) -> StateFormula {
    let g = if b.always.is_empty() { None } else { Some(sand_all(b.always.clone())) };
    let ginf = if b.alm_always.is_empty() {
        None
    } else {
        // (10): Ginf a & Ginf b = Ginf (a & b)
        Some(sand_all(b.alm_always.clone()))
    };
    if b.nexts.is_empty() {
        emit_after_next(&b.untils, g, ginf, &b.finfs, &b.neg_finfs, ctx)
    } else {
        // (7): X a & X b = X (a & b), then the X-elimination step
        let chi = sand_all(b.nexts.clone());
        let n = b.untils.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let mut here = Vec::new();
            let mut remaining = Vec::new();
            for (i, u) in b.untils.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    here.push(u.1.clone());
                } else {
                    here.push(u.0.clone());
                    remaining.push(u.clone());
                }
            }
            if let Some(gv) = &g {
                here.push(gv.clone());
            }
            let inner = emit_after_next(&remaining, g.clone(), ginf.clone(), &b.finfs, &b.neg_finfs, ctx);
            out.push(sand(sand_all(here), ex(sand(chi.clone(), inner))));
        }
        sor_all(out)
    }
}

fn emit_after_next(
    untils: &[(StateFormula, StateFormula)],
    g: Option<StateFormula>,
    ginf: Option<StateFormula>,
    finfs: &[StateFormula],
    neg_finfs: &[StateFormula],
    ctx: &mut ElimCtx,
) -> StateFormula {
    if !untils.is_empty() {
        // until permutations; each chain ends in the until-free core
        let n = untils.len();
        let mut out = Vec::new();
        for perm in (0..n).permutations(n) {
            let mut inner = emit_after_next(&[], g.clone(), ginf.clone(), finfs, neg_finfs, ctx);
            for j in (0..n).rev() {
                let fulfilled: Vec<usize> = perm[..j].to_vec();
                let mut lhs: Vec<StateFormula> = untils
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !fulfilled.contains(i))
                    .map(|(_, u)| u.0.clone())
                    .collect();
                if let Some(gv) = &g {
                    lhs.push(gv.clone());
                }
                inner = eu(sand_all(lhs), sand(untils[perm[j]].1.clone(), inner));
            }
            out.push(inner);
        }
        return sor_all(out);
    }
    if let Some(chi) = ginf {
        // Ginf removal: E[G psi & Ginf chi & ...] = E[psi U E[G(psi & chi) & ...]]
        let psi = g.clone().unwrap_or(StateFormula::True);
        let inner = emit_after_next(&[], Some(sand(psi.clone(), chi)), None, finfs, neg_finfs, ctx);
        return wrap_eu(psi, inner);
    }
    if !neg_finfs.is_empty() {
        // !Finf removal: E[G psi & /\ Finf k & /\ !Finf l]
        //   = E[psi U E[G(psi & /\ !l) & /\ Finf k]]
        let psi = g.clone().unwrap_or(StateFormula::True);
        let blocked = sand_all(neg_finfs.iter().cloned().map(not));
        let inner = emit_after_next(&[], Some(sand(psi.clone(), blocked)), None, finfs, &[], ctx);
        return wrap_eu(psi, inner);
    }
    if !finfs.is_empty() {
        // Finf removal, satisfiability-preserving: E[G phi & /\ Finf k_i] is
        // satisfiable iff /\ AG !EG(p_i & !k_i) & EG(phi & /\ p_i) is, with
        // fresh propositions p_i.
        ctx.fired_sat_step = true;
        let phi = g.unwrap_or(StateFormula::True);
        let mut guards = Vec::new();
        let mut ps = Vec::new();
        for kappa in finfs {
            let p = ctx.fresh_prop();
            guards.push(ag(not(eg(sand(p.clone(), not(kappa.clone()))))));
            ps.push(p);
        }
        return sand(sand_all(guards), eg(sand(phi, sand_all(ps))));
    }
    match g {
        Some(psi) if psi != StateFormula::True => eg(psi),
        _ => StateFormula::True,
    }
}

fn wrap_eu(psi: StateFormula, inner: StateFormula) -> StateFormula {
    if inner == StateFormula::True && psi == StateFormula::True {
        StateFormula::True
    } else {
        eu(psi, inner)
    }
}

// ---------------------------------------------------------------------------
// Syntactic postcondition helpers (used by tests and the CLI report)

/// No fairness operator anywhere, and no Boolean connective as the immediate
/// operand of a quantifier.
pub fn is_past_fairness_free(f: &Formula) -> bool {
    fn state_ok(s: &StateFormula) -> bool {
        use StateFormula::*;
        match s {
            True | False | Prop(_) | Var(_) | Root => true,
            Not(a) | Bind(_, a) | AtVar(_, a) | AtRoot(a) => state_ok(a),
            And(a, b) | Or(a, b) | Implies(a, b) => state_ok(a) && state_ok(b),
            Exists(p) | Forall(p) => {
                !matches!(
                    **p,
                    PathFormula::And(_, _) | PathFormula::Or(_, _) | PathFormula::Not(_)
                ) && path_ok(p)
            }
        }
    }
    fn path_ok(p: &PathFormula) -> bool {
        use PathFormula::*;
        match p {
            State(s) => state_ok(s),
            Not(a) | Next(a) | Eventually(a) | Always(a) | Previous(a) | WeakPrevious(a) => {
                path_ok(a)
            }
            And(a, b) | Or(a, b) | Until(a, b) | Since(a, b) => path_ok(a) && path_ok(b),
            InfinitelyOften(_) | AlmostAlways(_) => false,
        }
    }
    match f {
        Formula::State(s) => state_ok(s),
        // top-level Boolean structure is fine; quantifiers inside are checked
        Formula::Path(p) => {
            use PathFormula::*;
            match p {
                And(a, b) | Or(a, b) => {
                    is_past_fairness_free(&Formula::Path((**a).clone()))
                        && is_past_fairness_free(&Formula::Path((**b).clone()))
                }
                State(s) => state_ok(s),
                Not(a) | Next(a) | Eventually(a) | Always(a) | Previous(a) | WeakPrevious(a) => {
                    is_past_fairness_free(&Formula::Path((**a).clone()))
                }
                Until(a, b) | Since(a, b) => {
                    is_past_fairness_free(&Formula::Path((**a).clone()))
                        && is_past_fairness_free(&Formula::Path((**b).clone()))
                }
                InfinitelyOften(_) | AlmostAlways(_) => false,
            }
        }
    }
}

// ---------------------------------------------------------------------------
// The individual path-formula equivalences, exposed for validation on lasso
// words. Quantified equivalences are stated in their word form, where a
// nested `E` collapses to its body (a word has a single suffix per position).

pub mod equivalences {
    use crate::formula::*;

    /// (1) `!X a = X !a`
    pub fn eq1(a: PathFormula) -> (PathFormula, PathFormula) {
        (pnot(next(a.clone())), next(pnot(a)))
    }

    /// The naive self-dual reading `!Y a = Y !a`; fails at position 0,
    /// where `Y` is false on both sides.
    pub fn eq2_strict_dual(a: PathFormula) -> (PathFormula, PathFormula) {
        (pnot(previous(a.clone())), previous(pnot(a)))
    }

    /// (2): `!Y a = wY !a`, valid at every position.
    pub fn eq2(a: PathFormula) -> (PathFormula, PathFormula) {
        (pnot(previous(a.clone())), weak_previous(pnot(a)))
    }

    /// (3) `!(a U b) = ((a & !b) U (!a & !b)) | G !b`
    pub fn eq3(a: PathFormula, b: PathFormula) -> (PathFormula, PathFormula) {
        let lhs = pnot(until(a.clone(), b.clone()));
        let rhs = por(
            until(
                pand(a.clone(), pnot(b.clone())),
                pand(pnot(a), pnot(b.clone())),
            ),
            always(pnot(b)),
        );
        (lhs, rhs)
    }

    /// The bare since-dual `!(a S b) = (a & !b) S (!a & !b)`; misses the
    /// case where `b` never held, e.g. `a = true, b = false`.
    pub fn eq4_without_never(a: PathFormula, b: PathFormula) -> (PathFormula, PathFormula) {
        let lhs = pnot(since(a.clone(), b.clone()));
        let rhs = since(
            pand(a.clone(), pnot(b.clone())),
            pand(pnot(a), pnot(b)),
        );
        (lhs, rhs)
    }

    /// (4) with the "never" disjunct the bare dual misses:
    /// `!(a S b) = ((a & !b) S (!a & !b)) | (!b S (!b & wY false))`.
    pub fn eq4(a: PathFormula, b: PathFormula) -> (PathFormula, PathFormula) {
        let (lhs, first) = eq4_without_never(a, b.clone());
        let nb = pnot(b);
        let never = since(
            nb.clone(),
            pand(nb, weak_previous(lift(StateFormula::False))),
        );
        (lhs, por(first, never))
    }

    /// (5) `!Ginf a = Finf !a`
    pub fn eq5(a: PathFormula) -> (PathFormula, PathFormula) {
        (pnot(alm_always(a.clone())), inf_often(pnot(a)))
    }

    /// (6) `E(psi | psi') = E psi | E psi'`, in word form (E collapses).
    pub fn eq6(a: PathFormula, b: PathFormula) -> (PathFormula, PathFormula) {
        (por(a.clone(), b.clone()), por(a, b))
    }

    /// (7) `X a & X b = X (a & b)`
    pub fn eq7(a: PathFormula, b: PathFormula) -> (PathFormula, PathFormula) {
        (pand(next(a.clone()), next(b.clone())), next(pand(a, b)))
    }

    /// (8) `Y a & Y b = Y (a & b)`
    pub fn eq8(a: PathFormula, b: PathFormula) -> (PathFormula, PathFormula) {
        (
            pand(previous(a.clone()), previous(b.clone())),
            previous(pand(a, b)),
        )
    }

    /// (9) `G a & G b = G (a & b)`
    pub fn eq9(a: PathFormula, b: PathFormula) -> (PathFormula, PathFormula) {
        (pand(always(a.clone()), always(b.clone())), always(pand(a, b)))
    }

    /// (10) `Ginf a & Ginf b = Ginf (a & b)`
    pub fn eq10(a: PathFormula, b: PathFormula) -> (PathFormula, PathFormula) {
        (
            pand(alm_always(a.clone()), alm_always(b.clone())),
            alm_always(pand(a, b)),
        )
    }

    fn big_and(items: Vec<PathFormula>) -> PathFormula {
        pand_all(items)
    }

    fn side_conditions(
        finfs: &[PathFormula],
        neg_finfs: &[PathFormula],
    ) -> Vec<PathFormula> {
        let mut out: Vec<PathFormula> = finfs.iter().cloned().map(inf_often).collect();
        out.extend(neg_finfs.iter().cloned().map(|l| pnot(inf_often(l))));
        out
    }

    /// (13) word form: the untils under `G psi & Ginf chi` expand into the
    /// disjunction over the orders in which their right sides can first hold.
    pub fn eq13(
        psi: PathFormula,
        chi: PathFormula,
        untils: Vec<(PathFormula, PathFormula)>,
        finfs: Vec<PathFormula>,
        neg_finfs: Vec<PathFormula>,
    ) -> (PathFormula, PathFormula) {
        use itertools::Itertools;
        let mut lhs_parts = vec![always(psi.clone()), alm_always(chi.clone())];
        lhs_parts.extend(untils.iter().map(|(a, b)| until(a.clone(), b.clone())));
        lhs_parts.extend(side_conditions(&finfs, &neg_finfs));
        let lhs = big_and(lhs_parts);

        let n = untils.len();
        let mut tail_parts = vec![always(psi.clone()), alm_always(chi)];
        tail_parts.extend(side_conditions(&finfs, &neg_finfs));
        let tail = big_and(tail_parts);
        let mut disjuncts = Vec::new();
        for perm in (0..n).permutations(n) {
            let mut inner = tail.clone();
            for j in (0..n).rev() {
                let fulfilled: Vec<usize> = perm[..j].to_vec();
                let mut lhs_here: Vec<PathFormula> = untils
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !fulfilled.contains(i))
                    .map(|(_, u)| u.0.clone())
                    .collect();
                lhs_here.push(psi.clone());
                inner = until(big_and(lhs_here), pand(untils[perm[j]].1.clone(), inner));
            }
            disjuncts.push(inner);
        }
        (lhs, por_all(disjuncts))
    }

    /// (14) word form: `G psi & Ginf chi & Phi = psi U (G(psi & chi) & Phi)`.
    pub fn eq14(
        psi: PathFormula,
        chi: PathFormula,
        finfs: Vec<PathFormula>,
        neg_finfs: Vec<PathFormula>,
    ) -> (PathFormula, PathFormula) {
        let mut lhs_parts = vec![always(psi.clone()), alm_always(chi.clone())];
        lhs_parts.extend(side_conditions(&finfs, &neg_finfs));
        let lhs = big_and(lhs_parts);
        let mut rhs_tail = vec![always(pand(psi.clone(), chi))];
        rhs_tail.extend(side_conditions(&finfs, &neg_finfs));
        let rhs = until(psi, big_and(rhs_tail));
        (lhs, rhs)
    }

    /// (15) word form:
    /// `G psi & /\ Finf k & /\ !Finf l = psi U (G(psi & /\ !l) & /\ Finf k)`.
    pub fn eq15(
        psi: PathFormula,
        finfs: Vec<PathFormula>,
        neg_finfs: Vec<PathFormula>,
    ) -> (PathFormula, PathFormula) {
        let mut lhs_parts = vec![always(psi.clone())];
        lhs_parts.extend(side_conditions(&finfs, &neg_finfs));
        let lhs = big_and(lhs_parts);
        let blocked = big_and(
            std::iter::once(psi.clone())
                .chain(neg_finfs.iter().cloned().map(pnot))
                .collect(),
        );
        let mut rhs_tail = vec![always(blocked)];
        rhs_tail.extend(finfs.iter().cloned().map(inf_often));
        let rhs = until(psi, big_and(rhs_tail));
        (lhs, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn p(s: &str) -> StateFormula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn u_normal_dualities() {
        assert_eq!(to_u_normal(&ax(prop("p"))).unwrap(), not(ex(not(prop("p")))));
        assert_eq!(
            to_u_normal(&eg(prop("p"))).unwrap(),
            not(au(StateFormula::True, not(prop("p"))))
        );
        assert_eq!(
            to_u_normal(&ef(prop("p"))).unwrap(),
            eu(StateFormula::True, prop("p"))
        );
    }

    #[test]
    fn u_normal_output_uses_only_ex_eu_au() {
        fn check_path_shape(p: &PathFormula, under: char) -> bool {
            use PathFormula::*;
            match (p, under) {
                (Next(a), 'E') | (Until(_, a), 'E') | (Until(_, a), 'A') => {
                    matches!(**a, State(_))
                        && match p {
                            Until(l, _) => matches!(**l, State(_)),
                            _ => true,
                        }
                }
                _ => false,
            }
        }
        fn check(s: &StateFormula) -> bool {
            use StateFormula::*;
            match s {
                True | False | Prop(_) | Var(_) | Root => true,
                Not(a) | Bind(_, a) | AtVar(_, a) | AtRoot(a) => check(a),
                And(a, b) | Or(a, b) | Implies(a, b) => check(a) && check(b),
                Exists(p) => check_path_shape(p, 'E') && quantifier_operands_ok(p),
                Forall(p) => check_path_shape(p, 'A') && quantifier_operands_ok(p),
            }
        }
        fn quantifier_operands_ok(p: &PathFormula) -> bool {
            use PathFormula::*;
            match p {
                State(s) => check(s),
                Next(a) | Eventually(a) | Always(a) => quantifier_operands_ok(a),
                Until(a, b) => quantifier_operands_ok(a) && quantifier_operands_ok(b),
                _ => false,
            }
        }
        let inputs = [
            p("A G (p -> A F q)"),
            p("E G (p & E X q)"),
            p("down x1 . A G (x1 | E F root)"),
        ];
        for f in &inputs {
            let out = to_u_normal(f).unwrap();
            assert!(check(&out), "not U-normal: {}", crate::parser::print_formula(&out));
        }
    }

    #[test]
    fn e_normal_matches_quoted_expansion() {
        let out = to_e_normal(&au(prop("p"), prop("q"))).unwrap();
        let expected = and(
            not(eu(not(prop("q")), and(not(prop("q")), not(prop("p"))))),
            not(eg(not(prop("q")))),
        );
        assert_eq!(out, expected);
        // already E-normal formulas are fixpoints
        assert_eq!(to_e_normal(&ex(prop("p"))).unwrap(), ex(prop("p")));
    }

    #[test]
    fn e_normal_output_has_no_forall() {
        fn no_forall_state(s: &StateFormula) -> bool {
            use StateFormula::*;
            match s {
                True | False | Prop(_) | Var(_) | Root => true,
                Not(a) | Bind(_, a) | AtVar(_, a) | AtRoot(a) => no_forall_state(a),
                And(a, b) | Or(a, b) | Implies(a, b) => no_forall_state(a) && no_forall_state(b),
                Exists(p) => no_forall_path(p),
                Forall(_) => false,
            }
        }
        fn no_forall_path(p: &PathFormula) -> bool {
            use PathFormula::*;
            match p {
                State(s) => no_forall_state(s),
                Not(a) | Next(a) | Eventually(a) | Always(a) | Previous(a)
                | WeakPrevious(a) | InfinitelyOften(a) | AlmostAlways(a) => no_forall_path(a),
                And(a, b) | Or(a, b) | Until(a, b) | Since(a, b) => {
                    no_forall_path(a) && no_forall_path(b)
                }
            }
        }
        let f = forall(until(
            lift(au(prop("p"), prop("q"))),
            lift(prop("r")),
        ));
        let out = to_e_normal(&f).unwrap();
        assert!(no_forall_state(&out));
    }

    #[test]
    fn non_ctl_input_is_rejected() {
        let f = exists(pand(eventually(lift(prop("p"))), eventually(lift(prop("q")))));
        assert!(matches!(to_u_normal(&f), Err(RewriteError::NotCtlShaped(_))));
        assert!(matches!(to_e_normal(&f), Err(RewriteError::NotCtlShaped(_))));
    }

    #[test]
    fn nnf_pushes_until_dual() {
        let f = Formula::Path(pnot(until(lift(prop("p")), lift(prop("q")))));
        let out = push_negations(&f);
        let expected = Formula::Path(por(
            until(
                lift(and(prop("p"), not(prop("q")))),
                lift(and(not(prop("p")), not(prop("q")))),
            ),
            always(lift(not(prop("q")))),
        ));
        assert_eq!(out, expected);
    }

    #[test]
    fn nnf_double_negation_and_fairness_dual() {
        assert_eq!(
            push_negations(&Formula::State(not(not(prop("p"))))),
            Formula::State(prop("p"))
        );
        let f = Formula::Path(pnot(alm_always(lift(prop("p")))));
        assert_eq!(
            push_negations(&f),
            Formula::Path(inf_often(lift(not(prop("p")))))
        );
    }

    #[test]
    fn nnf_leaves_negations_on_atoms_only() {
        fn atoms_only_state(s: &StateFormula) -> bool {
            use StateFormula::*;
            match s {
                True | False | Prop(_) | Var(_) | Root => true,
                Not(a) => matches!(**a, Prop(_) | Var(_) | Root),
                And(a, b) | Or(a, b) => atoms_only_state(a) && atoms_only_state(b),
                Implies(_, _) => false,
                Exists(p) | Forall(p) => atoms_only_path(p),
                Bind(_, a) | AtVar(_, a) | AtRoot(a) => atoms_only_state(a),
            }
        }
        fn atoms_only_path(p: &PathFormula) -> bool {
            use PathFormula::*;
            match p {
                State(s) => atoms_only_state(s),
                Not(_) => false,
                And(a, b) | Or(a, b) | Until(a, b) | Since(a, b) => {
                    atoms_only_path(a) && atoms_only_path(b)
                }
                Next(a) | Eventually(a) | Always(a) | Previous(a) | WeakPrevious(a)
                | InfinitelyOften(a) | AlmostAlways(a) => atoms_only_path(a),
            }
        }
        let inputs = [
            Formula::State(not(and(prop("p"), exists(pnot(until(lift(prop("q")), lift(var(1)))))))),
            Formula::State(not(implies(prop("p"), at_root(not(prop("q")))))),
            Formula::Path(pnot(since(lift(prop("p")), next(lift(prop("q")))))),
        ];
        for f in &inputs {
            match push_negations(f) {
                Formula::State(s) => assert!(atoms_only_state(&s)),
                Formula::Path(p) => assert!(atoms_only_path(&p)),
            }
        }
    }

    #[test]
    fn ctlplus_canonical_example() {
        // E[F p1 & F p2] = EF(p1 & EF p2) | EF(p2 & EF p1)
        let f = exists(pand(
            eventually(lift(prop("p1"))),
            eventually(lift(prop("p2"))),
        ));
        let out = ctlplus_to_ctl(&f).unwrap();
        let expected = or(
            eu(StateFormula::True, and(prop("p1"), eu(StateFormula::True, prop("p2")))),
            eu(StateFormula::True, and(prop("p2"), eu(StateFormula::True, prop("p1")))),
        );
        assert_eq!(out, expected);
    }

    #[test]
    fn ctlplus_distributes_exists_over_or() {
        let f = exists(por(next(lift(prop("p"))), next(lift(prop("q")))));
        let out = ctlplus_to_ctl(&f).unwrap();
        assert_eq!(out, or(ex(prop("p")), ex(prop("q"))));
    }

    #[test]
    fn ctlplus_output_is_ctl_level() {
        let inputs = [
            p("E (F p & F q)"),
            p("E (p U q & X r)"),
            p("down x1 . E (F x1 & F p)"),
            p("A (F p | G q)"),
            p("E (!(p U q) & F r)"),
        ];
        for f in &inputs {
            let out = ctlplus_to_ctl(f).unwrap();
            assert!(
                out.classify().level <= Level::Ctl,
                "not CTL: {}",
                crate::parser::print_formula(&out)
            );
        }
    }

    #[test]
    fn ctlplus_rejects_star_nesting_and_past() {
        let star = exists(eventually(always(lift(prop("p")))));
        assert!(matches!(
            ctlplus_to_ctl(&star),
            Err(RewriteError::BeyondCtlPlus(_))
        ));
        let past = exists(previous(lift(prop("p"))));
        assert!(matches!(
            ctlplus_to_ctl(&past),
            Err(RewriteError::UnsupportedOperator(_))
        ));
    }

    #[test]
    fn pipeline_extracts_past_conjuncts() {
        // E(Y p & X q) -> Y p & E X q
        let f = Formula::State(exists(pand(
            previous(lift(prop("p"))),
            next(lift(prop("q"))),
        )));
        let report = eliminate_past_fairness(&f).unwrap();
        let expected = Formula::Path(pand(previous(lift(prop("p"))), lift(ex(prop("q")))));
        assert_eq!(report.output, expected);
        assert_eq!(report.kind, EquivalenceKind::Logical);
        assert!(report.fresh_propositions.is_empty());
    }

    #[test]
    fn pipeline_ginf_elimination_example() {
        // E(G p & Ginf q) -> E(p U E G (p & q))
        let f = Formula::State(exists(pand(
            always(lift(prop("p"))),
            alm_always(lift(prop("q"))),
        )));
        let report = eliminate_past_fairness(&f).unwrap();
        let expected = Formula::State(eu(prop("p"), eg(and(prop("p"), prop("q")))));
        assert_eq!(report.output, expected);
        assert_eq!(report.kind, EquivalenceKind::Logical);
    }

    #[test]
    fn pipeline_finf_elimination_example() {
        // E(G p & Finf q) -> AG !EG(p1 & !q) & EG(p & p1), fresh p1,
        // satisfiability-preserving.
        let f = Formula::State(exists(pand(
            always(lift(prop("p"))),
            inf_often(lift(prop("q"))),
        )));
        let report = eliminate_past_fairness(&f).unwrap();
        let expected = Formula::State(and(
            ag(not(eg(and(prop("p1"), not(prop("q")))))),
            eg(and(prop("p"), prop("p1"))),
        ));
        assert_eq!(report.output, expected);
        assert_eq!(report.kind, EquivalenceKind::SatisfiabilityPreserving);
        assert_eq!(report.fresh_propositions, vec!["p1".to_string()]);
    }

    #[test]
    fn pipeline_rejects_reserved_propositions() {
        let f = Formula::State(exists(inf_often(lift(prop("p1")))));
        assert!(matches!(
            eliminate_past_fairness(&f),
            Err(RewriteError::ReservedProposition(_))
        ));
    }

    #[test]
    fn pipeline_output_postcondition() {
        let inputs = [
            Formula::State(p("E (G p & Finf q & !Finf r)")),
            Formula::State(p("E (Y p & q S r & X s & G t)")),
            Formula::State(p("E (p U q & Finf r & Ginf s)")),
            Formula::State(p("E !(p S q)")),
            Formula::State(p("A (Finf p -> Ginf q)")),
            Formula::State(p("down x1 . E (F x1 & Ginf p)")),
        ];
        for f in &inputs {
            let report = eliminate_past_fairness(&f).unwrap();
            assert!(
                is_past_fairness_free(&report.output),
                "postcondition failed for {} -> {}",
                crate::parser::print_any_formula(f),
                crate::parser::print_any_formula(&report.output)
            );
        }
    }

    #[test]
    fn u_normal_size_stays_linear() {
        let inputs = [
            p("A G (p -> A F q)"),
            p("E G E X A X p"),
            p("A (p U A (q U r))"),
        ];
        for f in &inputs {
            let out = to_u_normal(f).unwrap();
            assert!(out.size() <= 4 * f.size(), "blowup on {}", f.size());
        }
    }
}
