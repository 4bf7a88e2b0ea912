//! Evaluation engine behind the checker: formulas are hash-consed into
//! arenas so structurally equal subformulas (rewriter output repeats them
//! liberally) are evaluated once per (node, assignment), and the downward
//! paths from each node are enumerated once per query.

use super::seq::EvSeq;
use super::Mode;
use crate::formula::{PathFormula, StateFormula};
use crate::models::{NodeId, Tree};
use std::collections::HashMap;
use std::rc::Rc;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum SKind {
    True,
    False,
    Prop(u32),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
    Implies(u32, u32),
    Exists(u32),
    Forall(u32),
    Bind(u32, u32),
    Var(u32),
    AtVar(u32, u32),
    Root,
    AtRoot(u32),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum PKind {
    State(u32),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
    Next(u32),
    Until(u32, u32),
    Eventually(u32),
    Always(u32),
    Previous(u32),
    WeakPrevious(u32),
    Since(u32, u32),
    InfOften(u32),
    AlmAlways(u32),
}

#[derive(Default)]
struct Interner {
    snodes: Vec<SKind>,
    smap: HashMap<SKind, u32>,
    pnodes: Vec<PKind>,
    pmap: HashMap<PKind, u32>,
    props: Vec<String>,
    prop_map: HashMap<String, u32>,
}

impl Interner {
    fn prop_id(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.prop_map.get(name) {
            return id;
        }
        let id = self.props.len() as u32;
        self.props.push(name.to_string());
        self.prop_map.insert(name.to_string(), id);
        id
    }

    fn put_s(&mut self, kind: SKind) -> u32 {
        if let Some(&id) = self.smap.get(&kind) {
            return id;
        }
        let id = self.snodes.len() as u32;
        self.snodes.push(kind);
        self.smap.insert(kind, id);
        id
    }

    fn put_p(&mut self, kind: PKind) -> u32 {
        if let Some(&id) = self.pmap.get(&kind) {
            return id;
        }
        let id = self.pnodes.len() as u32;
        self.pnodes.push(kind);
        self.pmap.insert(kind, id);
        id
    }

    fn intern_state(&mut self, f: &StateFormula) -> u32 {
        use StateFormula::*;
        let kind = match f {
            True => SKind::True,
            False => SKind::False,
            Prop(p) => SKind::Prop(self.prop_id(p)),
            Not(a) => SKind::Not(self.intern_state(a)),
            And(a, b) => SKind::And(self.intern_state(a), self.intern_state(b)),
            Or(a, b) => SKind::Or(self.intern_state(a), self.intern_state(b)),
            Implies(a, b) => SKind::Implies(self.intern_state(a), self.intern_state(b)),
            Exists(p) => SKind::Exists(self.intern_path(p)),
            Forall(p) => SKind::Forall(self.intern_path(p)),
            Bind(i, a) => SKind::Bind(*i as u32, self.intern_state(a)),
            Var(i) => SKind::Var(*i as u32),
            AtVar(i, a) => SKind::AtVar(*i as u32, self.intern_state(a)),
            Root => SKind::Root,
            AtRoot(a) => SKind::AtRoot(self.intern_state(a)),
        };
        self.put_s(kind)
    }

    fn intern_path(&mut self, p: &PathFormula) -> u32 {
        use PathFormula::*;
        let kind = match p {
            State(s) => PKind::State(self.intern_state(s)),
            Not(a) => PKind::Not(self.intern_path(a)),
            And(a, b) => PKind::And(self.intern_path(a), self.intern_path(b)),
            Or(a, b) => PKind::Or(self.intern_path(a), self.intern_path(b)),
            Next(a) => PKind::Next(self.intern_path(a)),
            Until(a, b) => PKind::Until(self.intern_path(a), self.intern_path(b)),
            Eventually(a) => PKind::Eventually(self.intern_path(a)),
            Always(a) => PKind::Always(self.intern_path(a)),
            Previous(a) => PKind::Previous(self.intern_path(a)),
            WeakPrevious(a) => PKind::WeakPrevious(self.intern_path(a)),
            Since(a, b) => PKind::Since(self.intern_path(a), self.intern_path(b)),
            InfinitelyOften(a) => PKind::InfOften(self.intern_path(a)),
            AlmostAlways(a) => PKind::AlmAlways(self.intern_path(a)),
        };
        self.put_p(kind)
    }
}

pub(super) struct Evaluator<'t> {
    tree: &'t Tree,
    mode: Mode,
    int: Interner,
    state_memo: HashMap<(u32, NodeId, Rc<Vec<NodeId>>), bool>,
    paths: Vec<Option<Rc<Vec<Vec<NodeId>>>>>,
}

impl<'t> Evaluator<'t> {
    pub(super) fn new(tree: &'t Tree, mode: Mode) -> Evaluator<'t> {
        Evaluator {
            tree,
            mode,
            int: Interner::default(),
            state_memo: HashMap::new(),
            paths: vec![None; tree.node_count()],
        }
    }

    pub(super) fn check_state(
        &mut self,
        v: NodeId,
        assign: &[NodeId],
        f: &StateFormula,
    ) -> bool {
        let id = self.int.intern_state(f);
        self.eval_state(id, v, &Rc::new(assign.to_vec()))
    }

    pub(super) fn check_path(
        &mut self,
        path: &[NodeId],
        i: usize,
        assign: &[NodeId],
        psi: &PathFormula,
    ) -> bool {
        let id = self.int.intern_path(psi);
        let assign = Rc::new(assign.to_vec());
        match self.mode {
            Mode::LeafLoop => self.path_seq(id, path, &assign).at(i),
            Mode::Strict => self.path_vec(id, path, &assign)[i],
        }
    }

    fn paths_from(&mut self, v: NodeId) -> Rc<Vec<Vec<NodeId>>> {
        if let Some(p) = &self.paths[v] {
            return Rc::clone(p);
        }
        let p = Rc::new(self.tree.paths_from(v));
        self.paths[v] = Some(Rc::clone(&p));
        p
    }

    fn eval_state(&mut self, id: u32, v: NodeId, assign: &Rc<Vec<NodeId>>) -> bool {
        let key = (id, v, Rc::clone(assign));
        if let Some(&b) = self.state_memo.get(&key) {
            return b;
        }
        let kind = self.int.snodes[id as usize];
        let value = match kind {
            SKind::True => true,
            SKind::False => false,
            SKind::Prop(p) => {
                let name = self.int.props[p as usize].clone();
                self.tree.has_prop(v, &name)
            }
            SKind::Not(a) => !self.eval_state(a, v, assign),
            SKind::And(a, b) => self.eval_state(a, v, assign) && self.eval_state(b, v, assign),
            SKind::Or(a, b) => self.eval_state(a, v, assign) || self.eval_state(b, v, assign),
            SKind::Implies(a, b) => !self.eval_state(a, v, assign) || self.eval_state(b, v, assign),
            SKind::Exists(p) => {
                let paths = self.paths_from(v);
                paths.iter().any(|path| self.path_holds_at_start(p, path, assign))
            }
            SKind::Forall(p) => {
                let paths = self.paths_from(v);
                paths.iter().all(|path| self.path_holds_at_start(p, path, assign))
            }
            SKind::Bind(i, a) => {
                let mut a2 = (**assign).clone();
                a2[i as usize - 1] = v;
                self.eval_state(a, v, &Rc::new(a2))
            }
            SKind::Var(i) => v == assign[i as usize - 1],
            SKind::AtVar(i, a) => self.eval_state(a, assign[i as usize - 1], assign),
            SKind::Root => v == self.tree.root(),
            SKind::AtRoot(a) => self.eval_state(a, self.tree.root(), assign),
        };
        self.state_memo.insert(key, value);
        value
    }

    fn path_holds_at_start(&mut self, id: u32, path: &[NodeId], assign: &Rc<Vec<NodeId>>) -> bool {
        match self.mode {
            Mode::LeafLoop => self.path_seq(id, path, assign).at(0),
            Mode::Strict => self.path_vec(id, path, assign)[0],
        }
    }

    /// Leaf-loop evaluation: truth of the path formula as an eventually
    /// periodic sequence over positions of `prefix . leaf^w`.
    fn path_seq(&mut self, id: u32, path: &[NodeId], assign: &Rc<Vec<NodeId>>) -> EvSeq {
        let kind = self.int.pnodes[id as usize];
        match kind {
            PKind::State(s) => {
                let m = path.len() - 1;
                let prefix = path[..m]
                    .iter()
                    .map(|&v| self.eval_state(s, v, assign))
                    .collect();
                let cycle = vec![self.eval_state(s, path[m], assign)];
                EvSeq::new(prefix, cycle)
            }
            PKind::Not(a) => self.path_seq(a, path, assign).not(),
            PKind::And(a, b) => {
                let left = self.path_seq(a, path, assign);
                left.and(&self.path_seq(b, path, assign))
            }
            PKind::Or(a, b) => {
                let left = self.path_seq(a, path, assign);
                left.or(&self.path_seq(b, path, assign))
            }
            PKind::Next(a) => self.path_seq(a, path, assign).next(),
            PKind::Until(a, b) => {
                let left = self.path_seq(a, path, assign);
                left.until(&self.path_seq(b, path, assign))
            }
            PKind::Eventually(a) => self.path_seq(a, path, assign).eventually(),
            PKind::Always(a) => self.path_seq(a, path, assign).always(),
            PKind::Previous(a) => self.path_seq(a, path, assign).previous(false),
            PKind::WeakPrevious(a) => self.path_seq(a, path, assign).previous(true),
            PKind::Since(a, b) => {
                let left = self.path_seq(a, path, assign);
                left.since(&self.path_seq(b, path, assign))
            }
            PKind::InfOften(a) => self.path_seq(a, path, assign).infinitely_often(),
            PKind::AlmAlways(a) => self.path_seq(a, path, assign).almost_always(),
        }
    }

    /// Strict evaluation: one truth value per position of the finite path.
    /// `Finf` is false and `Ginf` vacuously true on finite paths.
    fn path_vec(&mut self, id: u32, path: &[NodeId], assign: &Rc<Vec<NodeId>>) -> Vec<bool> {
        let kind = self.int.pnodes[id as usize];
        let n = path.len();
        match kind {
            PKind::State(s) => path
                .iter()
                .map(|&v| self.eval_state(s, v, assign))
                .collect(),
            PKind::Not(a) => {
                let mut va = self.path_vec(a, path, assign);
                va.iter_mut().for_each(|b| *b = !*b);
                va
            }
            PKind::And(a, b) => {
                let va = self.path_vec(a, path, assign);
                let vb = self.path_vec(b, path, assign);
                va.into_iter().zip(vb).map(|(x, y)| x && y).collect()
            }
            PKind::Or(a, b) => {
                let va = self.path_vec(a, path, assign);
                let vb = self.path_vec(b, path, assign);
                va.into_iter().zip(vb).map(|(x, y)| x || y).collect()
            }
            PKind::Next(a) => {
                let va = self.path_vec(a, path, assign);
                (0..n).map(|i| i + 1 < n && va[i + 1]).collect()
            }
            PKind::Until(a, b) => {
                let va = self.path_vec(a, path, assign);
                let vb = self.path_vec(b, path, assign);
                let mut out = vec![false; n];
                let mut after = false;
                for i in (0..n).rev() {
                    after = vb[i] || (va[i] && after);
                    out[i] = after;
                }
                out
            }
            PKind::Eventually(a) => {
                let va = self.path_vec(a, path, assign);
                let mut out = vec![false; n];
                let mut seen = false;
                for i in (0..n).rev() {
                    seen = seen || va[i];
                    out[i] = seen;
                }
                out
            }
            PKind::Always(a) => {
                let va = self.path_vec(a, path, assign);
                let mut out = vec![false; n];
                let mut all = true;
                for i in (0..n).rev() {
                    all = all && va[i];
                    out[i] = all;
                }
                out
            }
            PKind::Previous(a) => {
                let va = self.path_vec(a, path, assign);
                (0..n).map(|i| i > 0 && va[i - 1]).collect()
            }
            PKind::WeakPrevious(a) => {
                let va = self.path_vec(a, path, assign);
                (0..n).map(|i| i == 0 || va[i - 1]).collect()
            }
            PKind::Since(a, b) => {
                let va = self.path_vec(a, path, assign);
                let vb = self.path_vec(b, path, assign);
                let mut out = vec![false; n];
                let mut carry = false;
                for i in 0..n {
                    carry = vb[i] || (va[i] && carry);
                    out[i] = carry;
                }
                out
            }
            PKind::InfOften(_) => vec![false; n],
            PKind::AlmAlways(_) => vec![true; n],
        }
    }
}
