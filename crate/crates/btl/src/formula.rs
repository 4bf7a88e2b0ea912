//! Formula ASTs for hybrid branching-time logics.
//!
//! State formulas are evaluated at a tree node, path formulas at a position
//! of a path. The hybrid constructs (`down x_i`, `x_i`, `@x_i`, `root`,
//! `@root`) bind and test node variables with indices `1..=k`.
//!
//! `F` and `G` are stored as explicit variants but are defined as the usual
//! abbreviations (`F psi = true U psi`, `G psi = !F !psi`); [`StateFormula::size`]
//! counts nodes of the expanded form so size measurements are stable across
//! rewrites. Implication is likewise counted as `!a | b`.

use std::fmt;

/// Index of a hybrid variable. Valid indices start at 1.
pub type VarIndex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StateFormula {
    True,
    False,
    Prop(String),
    Not(Box<StateFormula>),
    And(Box<StateFormula>, Box<StateFormula>),
    Or(Box<StateFormula>, Box<StateFormula>),
    Implies(Box<StateFormula>, Box<StateFormula>),
    /// `E psi`: some path starting at the current node satisfies `psi`.
    Exists(Box<PathFormula>),
    /// `A psi`: every path starting at the current node satisfies `psi`.
    Forall(Box<PathFormula>),
    /// `down x_i . phi`: bind variable `i` to the current node.
    Bind(VarIndex, Box<StateFormula>),
    /// `x_i`: the current node is the one bound to variable `i`.
    Var(VarIndex),
    /// `@x_i phi`: evaluate `phi` at the node bound to variable `i`.
    AtVar(VarIndex, Box<StateFormula>),
    /// `root`: the current node is the root.
    Root,
    /// `@root phi`: evaluate `phi` at the root.
    AtRoot(Box<StateFormula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathFormula {
    /// A state formula evaluated at the current position's node.
    State(Box<StateFormula>),
    Not(Box<PathFormula>),
    And(Box<PathFormula>, Box<PathFormula>),
    Or(Box<PathFormula>, Box<PathFormula>),
    Next(Box<PathFormula>),
    Until(Box<PathFormula>, Box<PathFormula>),
    /// `F psi`, abbreviation for `true U psi`.
    Eventually(Box<PathFormula>),
    /// `G psi`, abbreviation for `!F !psi`.
    Always(Box<PathFormula>),
    /// `Y psi`: previous position, false at position 0.
    Previous(Box<PathFormula>),
    /// `wY psi`: weak previous, true at position 0.
    WeakPrevious(Box<PathFormula>),
    /// `psi S psi'`: since.
    Since(Box<PathFormula>, Box<PathFormula>),
    /// `Finf psi`: psi holds at infinitely many positions.
    InfinitelyOften(Box<PathFormula>),
    /// `Ginf psi`: psi holds at all but finitely many positions.
    AlmostAlways(Box<PathFormula>),
}

/// Either kind of formula. Rewrites that pull past operators out of a path
/// quantifier produce top-level path formulas, so transformation entry
/// points work on this union.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    State(StateFormula),
    Path(PathFormula),
}

/// Syntactic class of a state formula, ordered by inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    /// Every quantified path formula is a single temporal operator with
    /// state-formula operands.
    Ctl,
    /// Quantified path formulas are Boolean combinations of such operators.
    CtlPlus,
    /// No restriction.
    CtlStar,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Ctl => write!(f, "CTL"),
            Level::CtlPlus => write!(f, "CTL+"),
            Level::CtlStar => write!(f, "CTL*"),
        }
    }
}

/// Result of [`StateFormula::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub level: Level,
    /// Highest variable index used; 0 when no hybrid operators occur.
    pub vars: usize,
    pub uses_past: bool,
    pub uses_fairness: bool,
}

impl StateFormula {
    /// Node count of the formula with `F`, `G` and `->` expanded to the
    /// `U`/`!`/`&`/`|` basis.
    pub fn size(&self) -> usize {
        use StateFormula::*;
        match self {
            True | False | Prop(_) | Var(_) | Root => 1,
            Not(a) | Bind(_, a) | AtVar(_, a) | AtRoot(a) => 1 + a.size(),
            And(a, b) | Or(a, b) => 1 + a.size() + b.size(),
            // a -> b counts as !a | b
            Implies(a, b) => 2 + a.size() + b.size(),
            Exists(p) | Forall(p) => 1 + p.size(),
        }
    }

    /// Nesting depth with respect to the path quantifiers `E` and `A`.
    pub fn depth(&self) -> usize {
        use StateFormula::*;
        match self {
            True | False | Prop(_) | Var(_) | Root => 0,
            Not(a) | Bind(_, a) | AtVar(_, a) | AtRoot(a) => a.depth(),
            And(a, b) | Or(a, b) | Implies(a, b) => a.depth().max(b.depth()),
            Exists(p) | Forall(p) => 1 + p.depth(),
        }
    }

    /// Expand `F`, `G` and `->` everywhere. [`StateFormula::size`] equals the
    /// plain node count of the result.
    pub fn normalize(&self) -> StateFormula {
        use StateFormula::*;
        match self {
            True | False | Prop(_) | Var(_) | Root => self.clone(),
            Not(a) => Not(Box::new(a.normalize())),
            And(a, b) => And(Box::new(a.normalize()), Box::new(b.normalize())),
            Or(a, b) => Or(Box::new(a.normalize()), Box::new(b.normalize())),
            Implies(a, b) => Or(
                Box::new(Not(Box::new(a.normalize()))),
                Box::new(b.normalize()),
            ),
            Exists(p) => Exists(Box::new(p.normalize())),
            Forall(p) => Forall(Box::new(p.normalize())),
            Bind(i, a) => Bind(*i, Box::new(a.normalize())),
            AtVar(i, a) => AtVar(*i, Box::new(a.normalize())),
            AtRoot(a) => AtRoot(Box::new(a.normalize())),
        }
    }

    /// Least syntactic class containing the formula, plus variable count and
    /// operator usage flags.
    pub fn classify(&self) -> Classification {
        let mut c = Classification {
            level: Level::Ctl,
            vars: 0,
            uses_past: false,
            uses_fairness: false,
        };
        self.classify_into(&mut c);
        c
    }

    fn classify_into(&self, c: &mut Classification) {
        use StateFormula::*;
        match self {
            True | False | Prop(_) | Root => {}
            Var(i) => c.vars = c.vars.max(*i),
            Not(a) | AtRoot(a) => a.classify_into(c),
            Bind(i, a) | AtVar(i, a) => {
                c.vars = c.vars.max(*i);
                a.classify_into(c);
            }
            And(a, b) | Or(a, b) | Implies(a, b) => {
                a.classify_into(c);
                b.classify_into(c);
            }
            Exists(p) | Forall(p) => {
                let lvl = if p.is_basic() {
                    Level::Ctl
                } else if p.is_boolean_combination_of_basics() {
                    Level::CtlPlus
                } else {
                    Level::CtlStar
                };
                c.level = c.level.max(lvl);
                p.classify_operands_into(c);
            }
        }
    }

    /// Collect the proposition names occurring in the formula.
    pub fn propositions(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_props(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_props(&self, out: &mut Vec<String>) {
        use StateFormula::*;
        match self {
            Prop(p) => out.push(p.clone()),
            True | False | Var(_) | Root => {}
            Not(a) | Bind(_, a) | AtVar(_, a) | AtRoot(a) => a.collect_props(out),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
            Exists(p) | Forall(p) => p.collect_props(out),
        }
    }
}

impl PathFormula {
    /// Size contribution under the expansion rules; the `State` wrapper is
    /// transparent.
    pub fn size(&self) -> usize {
        use PathFormula::*;
        match self {
            State(s) => s.size(),
            Not(a) | Next(a) | Previous(a) | WeakPrevious(a) | InfinitelyOften(a)
            | AlmostAlways(a) => 1 + a.size(),
            And(a, b) | Or(a, b) => 1 + a.size() + b.size(),
            Until(a, b) | Since(a, b) => 1 + a.size() + b.size(),
            // F psi = true U psi
            Eventually(a) => 2 + a.size(),
            // G psi = !(true U !psi)
            Always(a) => 4 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        use PathFormula::*;
        match self {
            State(s) => s.depth(),
            Not(a) | Next(a) | Previous(a) | WeakPrevious(a) | InfinitelyOften(a)
            | AlmostAlways(a) | Eventually(a) | Always(a) => a.depth(),
            And(a, b) | Or(a, b) | Until(a, b) | Since(a, b) => a.depth().max(b.depth()),
        }
    }

    pub fn normalize(&self) -> PathFormula {
        use PathFormula::*;
        match self {
            State(s) => State(Box::new(s.normalize())),
            Not(a) => Not(Box::new(a.normalize())),
            And(a, b) => And(Box::new(a.normalize()), Box::new(b.normalize())),
            Or(a, b) => Or(Box::new(a.normalize()), Box::new(b.normalize())),
            Next(a) => Next(Box::new(a.normalize())),
            Until(a, b) => Until(Box::new(a.normalize()), Box::new(b.normalize())),
            Eventually(a) => Until(
                Box::new(State(Box::new(StateFormula::True))),
                Box::new(a.normalize()),
            ),
            Always(a) => Not(Box::new(Until(
                Box::new(State(Box::new(StateFormula::True))),
                Box::new(Not(Box::new(a.normalize()))),
            ))),
            Previous(a) => Previous(Box::new(a.normalize())),
            WeakPrevious(a) => WeakPrevious(Box::new(a.normalize())),
            Since(a, b) => Since(Box::new(a.normalize()), Box::new(b.normalize())),
            InfinitelyOften(a) => InfinitelyOften(Box::new(a.normalize())),
            AlmostAlways(a) => AlmostAlways(Box::new(a.normalize())),
        }
    }

    /// A single temporal operator applied to state-formula operands, or a
    /// bare state formula. These are the path formulas CTL-level quantifiers
    /// may carry (including the derived and past/fairness operators).
    pub fn is_basic(&self) -> bool {
        use PathFormula::*;
        match self {
            State(_) => true,
            Next(a) | Eventually(a) | Always(a) | Previous(a) | WeakPrevious(a)
            | InfinitelyOften(a) | AlmostAlways(a) => matches!(**a, State(_)),
            Until(a, b) | Since(a, b) => matches!(**a, State(_)) && matches!(**b, State(_)),
            Not(_) | And(_, _) | Or(_, _) => false,
        }
    }

    /// Boolean combination (`!`, `&`, `|`) of basic path formulas.
    pub fn is_boolean_combination_of_basics(&self) -> bool {
        use PathFormula::*;
        match self {
            Not(a) => a.is_boolean_combination_of_basics(),
            And(a, b) | Or(a, b) => {
                a.is_boolean_combination_of_basics() && b.is_boolean_combination_of_basics()
            }
            other => other.is_basic(),
        }
    }

    fn classify_operands_into(&self, c: &mut Classification) {
        use PathFormula::*;
        match self {
            State(s) => s.classify_into(c),
            Not(a) | Next(a) | Eventually(a) | Always(a) => a.classify_operands_into(c),
            Previous(a) | WeakPrevious(a) => {
                c.uses_past = true;
                a.classify_operands_into(c);
            }
            Since(a, b) => {
                c.uses_past = true;
                a.classify_operands_into(c);
                b.classify_operands_into(c);
            }
            InfinitelyOften(a) | AlmostAlways(a) => {
                c.uses_fairness = true;
                a.classify_operands_into(c);
            }
            And(a, b) | Or(a, b) | Until(a, b) => {
                a.classify_operands_into(c);
                b.classify_operands_into(c);
            }
        }
    }

    fn collect_props(&self, out: &mut Vec<String>) {
        use PathFormula::*;
        match self {
            State(s) => s.collect_props(out),
            Not(a) | Next(a) | Eventually(a) | Always(a) | Previous(a) | WeakPrevious(a)
            | InfinitelyOften(a) | AlmostAlways(a) => a.collect_props(out),
            And(a, b) | Or(a, b) | Until(a, b) | Since(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
        }
    }
}

impl Formula {
    pub fn size(&self) -> usize {
        match self {
            Formula::State(s) => s.size(),
            Formula::Path(p) => p.size(),
        }
    }

    pub fn propositions(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            Formula::State(s) => s.collect_props(&mut out),
            Formula::Path(p) => p.collect_props(&mut out),
        }
        out.sort();
        out.dedup();
        out
    }
}

// Construction helpers. Binary Boolean helpers take owned operands; the
// `*_all` variants fold a list, returning the unit for an empty one.

pub fn prop(name: &str) -> StateFormula {
    StateFormula::Prop(name.to_string())
}

pub fn not(a: StateFormula) -> StateFormula {
    StateFormula::Not(Box::new(a))
}

pub fn and(a: StateFormula, b: StateFormula) -> StateFormula {
    StateFormula::And(Box::new(a), Box::new(b))
}

pub fn or(a: StateFormula, b: StateFormula) -> StateFormula {
    StateFormula::Or(Box::new(a), Box::new(b))
}

pub fn implies(a: StateFormula, b: StateFormula) -> StateFormula {
    StateFormula::Implies(Box::new(a), Box::new(b))
}

/// Biconditional, expanded at construction: `(a -> b) & (b -> a)`.
pub fn iff(a: StateFormula, b: StateFormula) -> StateFormula {
    and(implies(a.clone(), b.clone()), implies(b, a))
}

pub fn exists(p: PathFormula) -> StateFormula {
    StateFormula::Exists(Box::new(p))
}

pub fn forall(p: PathFormula) -> StateFormula {
    StateFormula::Forall(Box::new(p))
}

pub fn bind(i: VarIndex, a: StateFormula) -> StateFormula {
    StateFormula::Bind(i, Box::new(a))
}

pub fn var(i: VarIndex) -> StateFormula {
    StateFormula::Var(i)
}

pub fn at_var(i: VarIndex, a: StateFormula) -> StateFormula {
    StateFormula::AtVar(i, Box::new(a))
}

pub fn at_root(a: StateFormula) -> StateFormula {
    StateFormula::AtRoot(Box::new(a))
}

pub fn and_all<I: IntoIterator<Item = StateFormula>>(items: I) -> StateFormula {
    let mut it = items.into_iter();
    match it.next() {
        None => StateFormula::True,
        Some(first) => it.fold(first, and),
    }
}

pub fn or_all<I: IntoIterator<Item = StateFormula>>(items: I) -> StateFormula {
    let mut it = items.into_iter();
    match it.next() {
        None => StateFormula::False,
        Some(first) => it.fold(first, or),
    }
}

pub fn lift(s: StateFormula) -> PathFormula {
    PathFormula::State(Box::new(s))
}

pub fn pnot(a: PathFormula) -> PathFormula {
    PathFormula::Not(Box::new(a))
}

pub fn pand(a: PathFormula, b: PathFormula) -> PathFormula {
    PathFormula::And(Box::new(a), Box::new(b))
}

pub fn por(a: PathFormula, b: PathFormula) -> PathFormula {
    PathFormula::Or(Box::new(a), Box::new(b))
}

/// Path negation that keeps a pure-state operand inside its lift, matching
/// how the parser reads Boolean structure below temporal operators.
pub fn cpnot(a: PathFormula) -> PathFormula {
    match a {
        PathFormula::State(s) => lift(not(*s)),
        a => pnot(a),
    }
}

pub fn cpand(a: PathFormula, b: PathFormula) -> PathFormula {
    match (a, b) {
        (PathFormula::State(x), PathFormula::State(y)) => lift(and(*x, *y)),
        (a, b) => pand(a, b),
    }
}

pub fn cpor(a: PathFormula, b: PathFormula) -> PathFormula {
    match (a, b) {
        (PathFormula::State(x), PathFormula::State(y)) => lift(or(*x, *y)),
        (a, b) => por(a, b),
    }
}

/// Path-level implication is sugar for `!a | b`; there is no AST variant.
pub fn pimplies(a: PathFormula, b: PathFormula) -> PathFormula {
    cpor(cpnot(a), b)
}

/// Path-level biconditional: `(a & b) | (!a & !b)`.
pub fn piff(a: PathFormula, b: PathFormula) -> PathFormula {
    cpor(
        cpand(a.clone(), b.clone()),
        cpand(cpnot(a), cpnot(b)),
    )
}

pub fn next(a: PathFormula) -> PathFormula {
    PathFormula::Next(Box::new(a))
}

pub fn until(a: PathFormula, b: PathFormula) -> PathFormula {
    PathFormula::Until(Box::new(a), Box::new(b))
}

pub fn eventually(a: PathFormula) -> PathFormula {
    PathFormula::Eventually(Box::new(a))
}

pub fn always(a: PathFormula) -> PathFormula {
    PathFormula::Always(Box::new(a))
}

pub fn previous(a: PathFormula) -> PathFormula {
    PathFormula::Previous(Box::new(a))
}

pub fn weak_previous(a: PathFormula) -> PathFormula {
    PathFormula::WeakPrevious(Box::new(a))
}

pub fn since(a: PathFormula, b: PathFormula) -> PathFormula {
    PathFormula::Since(Box::new(a), Box::new(b))
}

pub fn inf_often(a: PathFormula) -> PathFormula {
    PathFormula::InfinitelyOften(Box::new(a))
}

pub fn alm_always(a: PathFormula) -> PathFormula {
    PathFormula::AlmostAlways(Box::new(a))
}

pub fn pand_all<I: IntoIterator<Item = PathFormula>>(items: I) -> PathFormula {
    let mut it = items.into_iter();
    match it.next() {
        None => lift(StateFormula::True),
        Some(first) => it.fold(first, pand),
    }
}

pub fn por_all<I: IntoIterator<Item = PathFormula>>(items: I) -> PathFormula {
    let mut it = items.into_iter();
    match it.next() {
        None => lift(StateFormula::False),
        Some(first) => it.fold(first, por),
    }
}

// Common quantifier/temporal combinations.

pub fn ex(a: StateFormula) -> StateFormula {
    exists(next(lift(a)))
}

pub fn ax(a: StateFormula) -> StateFormula {
    forall(next(lift(a)))
}

pub fn ef(a: StateFormula) -> StateFormula {
    exists(eventually(lift(a)))
}

pub fn af(a: StateFormula) -> StateFormula {
    forall(eventually(lift(a)))
}

pub fn eg(a: StateFormula) -> StateFormula {
    exists(always(lift(a)))
}

pub fn ag(a: StateFormula) -> StateFormula {
    forall(always(lift(a)))
}

pub fn eu(a: StateFormula, b: StateFormula) -> StateFormula {
    exists(until(lift(a), lift(b)))
}

pub fn au(a: StateFormula, b: StateFormula) -> StateFormula {
    forall(until(lift(a), lift(b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_counts_single_nodes() {
        assert_eq!(prop("p").size(), 1);
        assert_eq!(ex(prop("p")).size(), 3);
    }

    #[test]
    fn size_counts_expanded_derived_operators() {
        // down x1 . @root E F (p & E F x1) expands F to (true U _), giving
        // bind, at-root, E, U, true, &, p, E, U, true, x1 = 11 nodes.
        let f = bind(
            1,
            at_root(exists(eventually(lift(and(
                prop("p"),
                exists(eventually(lift(var(1)))),
            ))))),
        );
        assert_eq!(f.size(), 11);
        // Size agrees with the raw node count of the normalized formula.
        fn raw_state(s: &StateFormula) -> usize {
            use StateFormula::*;
            match s {
                True | False | Prop(_) | Var(_) | Root => 1,
                Not(a) | Bind(_, a) | AtVar(_, a) | AtRoot(a) => 1 + raw_state(a),
                And(a, b) | Or(a, b) | Implies(a, b) => 1 + raw_state(a) + raw_state(b),
                Exists(p) | Forall(p) => 1 + raw_path(p),
            }
        }
        fn raw_path(p: &PathFormula) -> usize {
            use PathFormula::*;
            match p {
                State(s) => raw_state(s),
                Not(a) | Next(a) | Eventually(a) | Always(a) | Previous(a) | WeakPrevious(a)
                | InfinitelyOften(a) | AlmostAlways(a) => 1 + raw_path(a),
                And(a, b) | Or(a, b) | Until(a, b) | Since(a, b) => 1 + raw_path(a) + raw_path(b),
            }
        }
        assert_eq!(f.size(), raw_state(&f.normalize()));
    }

    #[test]
    fn depth_counts_path_quantifiers_only() {
        assert_eq!(prop("p").depth(), 0);
        assert_eq!(ef(prop("p")).depth(), 1);
        assert_eq!(ef(and(prop("p"), ef(prop("q")))).depth(), 2);
        // Hybrid operators and temporal nesting do not add depth.
        let f = bind(1, exists(eventually(always(lift(var(1))))));
        assert_eq!(f.depth(), 1);
    }

    #[test]
    fn depth_bounded_by_size() {
        let fs = [
            prop("p"),
            ef(and(prop("p"), ef(prop("q")))),
            eg(implies(prop("p"), prop("q"))),
            bind(1, at_root(ef(var(1)))),
        ];
        for f in fs {
            assert!(f.depth() <= f.size());
        }
    }

    #[test]
    fn classify_levels() {
        let c = eu(prop("p"), prop("q")).classify();
        assert_eq!(c.level, Level::Ctl);
        assert_eq!(c.vars, 0);
        assert!(!c.uses_past && !c.uses_fairness);

        // E (F p & F q) is the canonical CTL+ shape.
        let c = exists(pand(
            eventually(lift(prop("p"))),
            eventually(lift(prop("q"))),
        ))
        .classify();
        assert_eq!(c.level, Level::CtlPlus);

        // E F G p nests temporal operators without a quantifier in between.
        let c = exists(eventually(always(lift(prop("p"))))).classify();
        assert_eq!(c.level, Level::CtlStar);
    }

    #[test]
    fn classify_tracks_vars_and_flags() {
        let f = bind(1, exists(pand(lift(var(1)), previous(lift(prop("p"))))));
        let c = f.classify();
        assert_eq!(c.vars, 1);
        assert!(c.uses_past);
        assert!(!c.uses_fairness);

        let f = at_var(2, exists(inf_often(lift(prop("p")))));
        let c = f.classify();
        assert_eq!(c.vars, 2);
        assert!(c.uses_fairness);
    }

    #[test]
    fn classify_monotone_under_boolean_connectives() {
        let base = exists(pand(
            eventually(lift(prop("p"))),
            eventually(lift(prop("q"))),
        ));
        let wrapped = and(base.clone(), prop("r"));
        assert!(wrapped.classify().level >= base.classify().level);
        let orred = or(not(base.clone()), base.clone());
        assert!(orred.classify().level >= base.classify().level);
    }
}
