//! The Ehrenfeucht-style game on pairs of finite trees.
//!
//! Each round selects one node in each tree. In a node move the spoiler picks
//! any node of either tree and the duplicator answers in the other. In a path
//! move the spoiler picks an already selected node `a_j` with no other
//! selected node strictly below it (on the side she plays) and a downward
//! path from it; the duplicator answers with a path from the counterpart
//! `a'_j`; the spoiler then picks a node on the *duplicator's* path and the
//! duplicator picks one on the spoiler's. Paths are identified with
//! anchor-to-leaf node sequences (leaf-loop reading: positions past the leaf
//! repeat it and add no new picks).
//!
//! The duplicator wins when the final selections agree on rootness, equality,
//! propositions, downward reachability and the child relation.

use crate::models::{NodeId, Tree};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    Spoiler,
    Duplicator,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("line {line}: illegal move: {reason}")]
    IllegalMove { line: usize, reason: String },
    #[error("line {line}: cannot parse move: {reason}")]
    BadScript { line: usize, reason: String },
    #[error("script ends in the middle of a path move")]
    IncompleteTranscript,
    #[error("preselected node {0} is not a node of its tree")]
    BadPreselection(usize),
    #[error("no rounds remaining")]
    NoRoundsLeft,
}

/// A move as offered by [`GameState::legal_moves`] and consumed by
/// [`GameState::apply`]. Node and leaf arguments are internal node ids;
/// `anchor` indexes the selection list; `position` indexes a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    SpoilerNode { side: Side, node: NodeId },
    DuplicatorNode { node: NodeId },
    SpoilerPath { side: Side, anchor: usize, leaf: NodeId },
    DuplicatorPath { leaf: NodeId },
    SpoilerPick { position: usize },
    DuplicatorPick { position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Phase {
    SpoilerTurn,
    /// Spoiler picked `node` on `side`; duplicator answers in the other tree.
    NodeReply { side: Side, node: NodeId },
    /// Spoiler fixed a path on `side`; duplicator answers with a path from
    /// the counterpart anchor in the other tree.
    PathReply { side: Side, anchor: usize, path: Vec<NodeId> },
    /// Both paths fixed; spoiler picks a position on the duplicator's path.
    SpoilerPick { side: Side, path: Vec<NodeId>, reply: Vec<NodeId> },
    /// Spoiler picked; duplicator picks a position on the spoiler's path.
    DuplicatorPick { side: Side, path: Vec<NodeId>, reply: Vec<NodeId>, picked: NodeId },
}

/// State of a core game in progress.
#[derive(Debug, Clone)]
pub struct GameState<'t> {
    pub left: &'t Tree,
    pub right: &'t Tree,
    pairs: Vec<(NodeId, NodeId)>,
    rounds_left: usize,
    phase: Phase,
}

impl<'t> GameState<'t> {
    /// Fresh game. `preselected` pairs support the extended game where some
    /// nodes (and assignment entries) are fixed before play starts.
    pub fn new(
        left: &'t Tree,
        right: &'t Tree,
        rounds: usize,
        preselected: &[(NodeId, NodeId)],
    ) -> Result<GameState<'t>, GameError> {
        for &(a, b) in preselected {
            if a >= left.node_count() {
                return Err(GameError::BadPreselection(a));
            }
            if b >= right.node_count() {
                return Err(GameError::BadPreselection(b));
            }
        }
        Ok(GameState {
            left,
            right,
            pairs: preselected.to_vec(),
            rounds_left: rounds,
            phase: Phase::SpoilerTurn,
        })
    }

    pub fn selections(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn rounds_left(&self) -> usize {
        self.rounds_left
    }

    pub fn round_in_progress(&self) -> bool {
        self.phase != Phase::SpoilerTurn
    }

    fn tree(&self, side: Side) -> &Tree {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }

    fn selected_on(&self, side: Side, i: usize) -> NodeId {
        match side {
            Side::Left => self.pairs[i].0,
            Side::Right => self.pairs[i].1,
        }
    }

    /// A path move may start at `a_j` only if no other selected node on the
    /// same side lies strictly below it.
    pub fn anchor_is_legal(&self, side: Side, anchor: usize) -> bool {
        if anchor >= self.pairs.len() {
            return false;
        }
        let t = self.tree(side);
        let a = self.selected_on(side, anchor);
        self.pairs.iter().enumerate().all(|(l, _)| {
            let other = self.selected_on(side, l);
            l == anchor || other == a || !t.descendant_or_self(a, other)
        })
    }

    /// All moves available in the current phase.
    pub fn legal_moves(&self) -> Vec<Move> {
        let mut out = Vec::new();
        match &self.phase {
            Phase::SpoilerTurn => {
                if self.rounds_left == 0 {
                    return out;
                }
                for side in [Side::Left, Side::Right] {
                    for node in self.tree(side).node_ids() {
                        out.push(Move::SpoilerNode { side, node });
                    }
                }
                for side in [Side::Left, Side::Right] {
                    for anchor in 0..self.pairs.len() {
                        if !self.anchor_is_legal(side, anchor) {
                            continue;
                        }
                        let start = self.selected_on(side, anchor);
                        for leaf in self.tree(side).leaves_below(start) {
                            out.push(Move::SpoilerPath { side, anchor, leaf });
                        }
                    }
                }
            }
            Phase::NodeReply { side, .. } => {
                for node in self.tree(side.other()).node_ids() {
                    out.push(Move::DuplicatorNode { node });
                }
            }
            Phase::PathReply { side, anchor, .. } => {
                let reply_side = side.other();
                let start = self.selected_on(reply_side, *anchor);
                for leaf in self.tree(reply_side).leaves_below(start) {
                    out.push(Move::DuplicatorPath { leaf });
                }
            }
            Phase::SpoilerPick { reply, .. } => {
                for position in 0..reply.len() {
                    out.push(Move::SpoilerPick { position });
                }
            }
            Phase::DuplicatorPick { path, .. } => {
                for position in 0..path.len() {
                    out.push(Move::DuplicatorPick { position });
                }
            }
        }
        out
    }

    /// Apply a move, checking it against the rules; `line` only labels the
    /// error.
    pub fn apply(&mut self, m: &Move, line: usize) -> Result<(), GameError> {
        let illegal = |reason: &str| GameError::IllegalMove { line, reason: reason.to_string() };
        match (&self.phase.clone(), m) {
            (Phase::SpoilerTurn, Move::SpoilerNode { side, node }) => {
                if self.rounds_left == 0 {
                    return Err(GameError::NoRoundsLeft);
                }
                if *node >= self.tree(*side).node_count() {
                    return Err(illegal("unknown node id"));
                }
                self.phase = Phase::NodeReply { side: *side, node: *node };
            }
            (Phase::SpoilerTurn, Move::SpoilerPath { side, anchor, leaf }) => {
                if self.rounds_left == 0 {
                    return Err(GameError::NoRoundsLeft);
                }
                if !self.anchor_is_legal(*side, *anchor) {
                    return Err(illegal("bad anchor: missing or has a selected node below it"));
                }
                let start = self.selected_on(*side, *anchor);
                let path = self
                    .tree(*side)
                    .path_to_leaf(start, *leaf)
                    .ok_or_else(|| illegal("leaf does not lie below the anchor"))?;
                self.phase = Phase::PathReply { side: *side, anchor: *anchor, path };
            }
            (Phase::NodeReply { side, node }, Move::DuplicatorNode { node: reply }) => {
                if *reply >= self.tree(side.other()).node_count() {
                    return Err(illegal("unknown node id"));
                }
                let pair = match side {
                    Side::Left => (*node, *reply),
                    Side::Right => (*reply, *node),
                };
                self.pairs.push(pair);
                self.rounds_left -= 1;
                self.phase = Phase::SpoilerTurn;
            }
            (Phase::PathReply { side, anchor, path }, Move::DuplicatorPath { leaf }) => {
                let reply_side = side.other();
                let start = self.selected_on(reply_side, *anchor);
                let reply = self
                    .tree(reply_side)
                    .path_to_leaf(start, *leaf)
                    .ok_or_else(|| illegal("leaf does not lie below the anchor"))?;
                self.phase = Phase::SpoilerPick { side: *side, path: path.clone(), reply };
            }
            (Phase::SpoilerPick { side, path, reply }, Move::SpoilerPick { position }) => {
                let picked = *reply
                    .get(*position)
                    .ok_or_else(|| illegal("position is not on the path"))?;
                self.phase = Phase::DuplicatorPick {
                    side: *side,
                    path: path.clone(),
                    reply: reply.clone(),
                    picked,
                };
            }
            (Phase::DuplicatorPick { side, path, picked, .. }, Move::DuplicatorPick { position }) => {
                let own = *path
                    .get(*position)
                    .ok_or_else(|| illegal("position is not on the path"))?;
                // the spoiler picked on the duplicator's (other-side) path
                let pair = match side {
                    Side::Left => (own, *picked),
                    Side::Right => (*picked, own),
                };
                self.pairs.push(pair);
                self.rounds_left -= 1;
                self.phase = Phase::SpoilerTurn;
            }
            _ => return Err(illegal("move out of turn")),
        }
        Ok(())
    }
}

/// Evaluate the five winning-condition clauses on the final selections.
pub fn winner(left: &Tree, right: &Tree, pairs: &[(NodeId, NodeId)]) -> Player {
    for (i, &(a, a2)) in pairs.iter().enumerate() {
        if (a == left.root()) != (a2 == right.root()) {
            return Player::Spoiler;
        }
        if left.props(a) != right.props(a2) {
            return Player::Spoiler;
        }
        for &(b, b2) in &pairs[i..] {
            if (a == b) != (a2 == b2) {
                return Player::Spoiler;
            }
            // downward reachability both ways, then the child relation
            if left.descendant_or_self(a, b) != right.descendant_or_self(a2, b2) {
                return Player::Spoiler;
            }
            if left.descendant_or_self(b, a) != right.descendant_or_self(b2, a2) {
                return Player::Spoiler;
            }
            if (left.parent(b) == Some(a)) != (right.parent(b2) == Some(a2)) {
                return Player::Spoiler;
            }
            if (left.parent(a) == Some(b)) != (right.parent(a2) == Some(b2)) {
                return Player::Spoiler;
            }
        }
    }
    Player::Duplicator
}

/// Who wins the `k`-round core game, by exhaustive search with memoization
/// on the (order-irrelevant) set of selected pairs.
pub fn solve_game(left: &Tree, right: &Tree, rounds: usize) -> Player {
    solve_game_from(left, right, rounds, &[])
}

/// Extended-game variant with preselected pairs.
pub fn solve_game_from(
    left: &Tree,
    right: &Tree,
    rounds: usize,
    preselected: &[(NodeId, NodeId)],
) -> Player {
    let mut memo = HashMap::new();
    let mut pairs = preselected.to_vec();
    if spoiler_wins(left, right, &mut pairs, rounds, &mut memo) {
        Player::Spoiler
    } else {
        Player::Duplicator
    }
}

fn canon(pairs: &[(NodeId, NodeId)]) -> Vec<(NodeId, NodeId)> {
    let mut v = pairs.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn anchor_legal(tree: &Tree, nodes: &[NodeId], anchor: usize) -> bool {
    let a = nodes[anchor];
    nodes
        .iter()
        .enumerate()
        .all(|(l, &other)| l == anchor || other == a || !tree.descendant_or_self(a, other))
}

type SolveMemo = HashMap<(Vec<(NodeId, NodeId)>, usize), bool>;

fn spoiler_wins(
    left: &Tree,
    right: &Tree,
    pairs: &mut Vec<(NodeId, NodeId)>,
    rounds: usize,
    memo: &mut SolveMemo,
) -> bool {
    if rounds == 0 {
        return winner(left, right, pairs) == Player::Spoiler;
    }
    let key = (canon(pairs), rounds);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut wins = false;

    // node moves
    'node_moves: for side in [Side::Left, Side::Right] {
        let (mine, other) = match side {
            Side::Left => (left, right),
            Side::Right => (right, left),
        };
        for v in mine.node_ids() {
            let mut all = true;
            for w in other.node_ids() {
                let pair = match side {
                    Side::Left => (v, w),
                    Side::Right => (w, v),
                };
                pairs.push(pair);
                let r = spoiler_wins(left, right, pairs, rounds - 1, memo);
                pairs.pop();
                if !r {
                    all = false;
                    break;
                }
            }
            if all {
                wins = true;
                break 'node_moves;
            }
        }
    }

    // path moves
    if !wins {
        'path_moves: for side in [Side::Left, Side::Right] {
            let (mine, other) = match side {
                Side::Left => (left, right),
                Side::Right => (right, left),
            };
            let my_nodes: Vec<NodeId> = pairs
                .iter()
                .map(|&(a, b)| if side == Side::Left { a } else { b })
                .collect();
            let other_nodes: Vec<NodeId> = pairs
                .iter()
                .map(|&(a, b)| if side == Side::Left { b } else { a })
                .collect();
            for anchor in 0..pairs.len() {
                if !anchor_legal(mine, &my_nodes, anchor) {
                    continue;
                }
                for leaf in mine.leaves_below(my_nodes[anchor]) {
                    let pi = mine.path_to_leaf(my_nodes[anchor], leaf).unwrap();
                    // duplicator answers with any path from the counterpart
                    let mut all_replies = true;
                    for leaf2 in other.leaves_below(other_nodes[anchor]) {
                        let pi2 = other.path_to_leaf(other_nodes[anchor], leaf2).unwrap();
                        // spoiler picks on the reply path, duplicator on pi
                        let mut spoiler_has_pick = false;
                        for &pick2 in &pi2 {
                            let mut dup_can_answer = false;
                            for &pick in &pi {
                                let pair = match side {
                                    Side::Left => (pick, pick2),
                                    Side::Right => (pick2, pick),
                                };
                                pairs.push(pair);
                                let r = spoiler_wins(left, right, pairs, rounds - 1, memo);
                                pairs.pop();
                                if !r {
                                    dup_can_answer = true;
                                    break;
                                }
                            }
                            if !dup_can_answer {
                                spoiler_has_pick = true;
                                break;
                            }
                        }
                        if !spoiler_has_pick {
                            all_replies = false;
                            break;
                        }
                    }
                    if all_replies {
                        wins = true;
                        break 'path_moves;
                    }
                }
            }
        }
    }

    memo.insert(key, wins);
    wins
}

// ---------------------------------------------------------------------------
// Scripted replay

/// One line of a replayed game, with the resolved move.
#[derive(Debug, Clone)]
pub struct TranscriptEntry {
    pub line: usize,
    pub description: String,
}

#[derive(Debug, Clone)]
pub struct Transcript {
    pub entries: Vec<TranscriptEntry>,
    pub selections: Vec<(NodeId, NodeId)>,
    pub winner: Player,
}

/// Play a script against a pair of trees. Node and leaf references use the
/// trees' external ids; anchors index the selection list from 0. The format
/// is one move per line:
///
/// ```text
/// S node <L|R> <id>
/// D node <L|R> <id>
/// S path <L|R> <anchor-index> <leaf-id>
/// D path <leaf-id>
/// S pick <position>
/// D pick <position>
/// ```
///
/// `#` starts a comment.
pub fn replay(script: &str, left: &Tree, right: &Tree) -> Result<Transcript, GameError> {
    let mut state = GameState::new(left, right, usize::MAX, &[])
        .expect("empty preselection is valid");
    let mut entries = Vec::new();
    for (ix, raw) in script.lines().enumerate() {
        let line = ix + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let words: Vec<&str> = text.split_whitespace().collect();
        let bad = |reason: &str| GameError::BadScript { line, reason: reason.to_string() };
        let side_of = |w: &str| match w {
            "L" => Ok(Side::Left),
            "R" => Ok(Side::Right),
            other => Err(bad(&format!("expected L or R, got {other}"))),
        };
        let num = |w: &str| {
            w.parse::<usize>()
                .map_err(|_| bad(&format!("expected a number, got {w}")))
        };
        let node_by_ext = |side: Side, id: u64| {
            let t = if side == Side::Left { left } else { right };
            t.node_by_ext_id(id)
                .map_err(|_| GameError::IllegalMove { line, reason: format!("unknown id {id}") })
        };
        let mv = match words.as_slice() {
            ["S", "node", s, id] => {
                let side = side_of(s)?;
                Move::SpoilerNode { side, node: node_by_ext(side, num(id)? as u64)? }
            }
            ["D", "node", s, id] => {
                let side = side_of(s)?;
                // the duplicator's side is forced; reject a mismatched label
                match &state.phase {
                    Phase::NodeReply { side: sp_side, .. } if sp_side.other() == side => {}
                    _ => {
                        return Err(GameError::IllegalMove {
                            line,
                            reason: "duplicator must answer in the other tree".into(),
                        })
                    }
                }
                Move::DuplicatorNode { node: node_by_ext(side, num(id)? as u64)? }
            }
            ["S", "path", s, anchor, leaf] => {
                let side = side_of(s)?;
                Move::SpoilerPath {
                    side,
                    anchor: num(anchor)?,
                    leaf: node_by_ext(side, num(leaf)? as u64)?,
                }
            }
            ["D", "path", leaf] => {
                let side = match &state.phase {
                    Phase::PathReply { side, .. } => side.other(),
                    _ => {
                        return Err(GameError::IllegalMove {
                            line,
                            reason: "no path move awaiting an answer".into(),
                        })
                    }
                };
                Move::DuplicatorPath { leaf: node_by_ext(side, num(leaf)? as u64)? }
            }
            ["S", "pick", pos] => Move::SpoilerPick { position: num(pos)? },
            ["D", "pick", pos] => Move::DuplicatorPick { position: num(pos)? },
            _ => return Err(bad("unrecognized move")),
        };
        state.apply(&mv, line)?;
        entries.push(TranscriptEntry { line, description: text.to_string() });
    }
    if state.round_in_progress() {
        return Err(GameError::IncompleteTranscript);
    }
    let selections = state.selections().to_vec();
    let who = winner(left, right, &selections);
    Ok(Transcript { entries, selections, winner: who })
}
