//! The corridor tiling game: instances, the reduction to satisfiability of
//! one-variable quantified-Boolean-combination formulas, and a small
//! exhaustive solver for the game itself.
//!
//! The encoder emits a conjunction of seventeen named subformulas: `chi1`
//! through `chi10` describe the tree skeleton that carries a strategy
//! (position sequences of `2^n` bit nodes, copy-node shadows, row markers),
//! `psi1` through `psi7` constrain the tiles so that every branch of the tree
//! is a play won by player E. Position numbers are compared with linear-size
//! carry chains over the auxiliary propositions `d_i`/`e_i` (`d_i` holds when
//! all lower bits are 1, `e_i` when all lower bits are 0).
//!
//! The solver plays the game directly on a `width`-column board and is
//! independent of the encoder; it serves as the semantic oracle in tests.

use crate::checker::{models, Mode};
use crate::formula::{self, *};
use crate::models::Tree;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingError {
    #[error("duplicate tile name {0}")]
    DuplicateTile(String),
    #[error("tile name {0} is not a bare identifier fragment ([A-Za-z0-9_]+)")]
    BadTileName(String),
    #[error("relation references unknown tile {0}")]
    UnknownTile(String),
    #[error("encoding needs n >= 1, got {0}")]
    BadParameter(usize),
    #[error("encoding needs a nonempty tile set")]
    NoTiles,
    #[error("tile proposition {0} clashes with a reserved encoding proposition")]
    ReservedClash(String),
    #[error("unknown subformula {0}; use chi1..chi10 or psi1..psi7")]
    UnknownSubformula(String),
    #[error("state budget exceeded while solving ({0} states)")]
    StateBudgetExceeded(usize),
    #[error("width must be positive")]
    BadWidth,
}

/// Instance `(T, H, V, F, L, n)` of the corridor tiling game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingInstance {
    tiles: Vec<String>,
    h: BTreeSet<(usize, usize)>,
    v: BTreeSet<(usize, usize)>,
    f: BTreeSet<usize>,
    l: BTreeSet<usize>,
    n: usize,
}

impl TilingInstance {
    pub fn new(
        tiles: Vec<String>,
        h: Vec<(String, String)>,
        v: Vec<(String, String)>,
        f: Vec<String>,
        l: Vec<String>,
        n: usize,
    ) -> Result<TilingInstance, TilingError> {
        let mut index = HashMap::new();
        for (i, t) in tiles.iter().enumerate() {
            if t.is_empty() || !t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(TilingError::BadTileName(t.clone()));
            }
            if index.insert(t.clone(), i).is_some() {
                return Err(TilingError::DuplicateTile(t.clone()));
            }
        }
        let look = |t: &String| -> Result<usize, TilingError> {
            index.get(t).copied().ok_or_else(|| TilingError::UnknownTile(t.clone()))
        };
        let mut hs = BTreeSet::new();
        for (a, b) in &h {
            hs.insert((look(a)?, look(b)?));
        }
        let mut vs = BTreeSet::new();
        for (a, b) in &v {
            vs.insert((look(a)?, look(b)?));
        }
        let fs = f.iter().map(&look).collect::<Result<_, _>>()?;
        let ls = l.iter().map(&look).collect::<Result<_, _>>()?;
        Ok(TilingInstance { tiles, h: hs, v: vs, f: fs, l: ls, n })
    }

    pub fn tiles(&self) -> &[String] {
        &self.tiles
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    pub fn h_pairs(&self) -> Vec<(String, String)> {
        self.h
            .iter()
            .map(|&(a, b)| (self.tiles[a].clone(), self.tiles[b].clone()))
            .collect()
    }

    pub fn v_pairs(&self) -> Vec<(String, String)> {
        self.v
            .iter()
            .map(|&(a, b)| (self.tiles[a].clone(), self.tiles[b].clone()))
            .collect()
    }

    pub fn f_tiles(&self) -> Vec<String> {
        self.f.iter().map(|&i| self.tiles[i].clone()).collect()
    }

    pub fn l_tiles(&self) -> Vec<String> {
        self.l.iter().map(|&i| self.tiles[i].clone()).collect()
    }

    /// Drop the end condition (player E can then never win by completion).
    pub fn with_empty_l(&self) -> TilingInstance {
        TilingInstance { l: BTreeSet::new(), ..self.clone() }
    }

    pub fn with_empty_f(&self) -> TilingInstance {
        TilingInstance { f: BTreeSet::new(), ..self.clone() }
    }
}

/// The instance family forcing a binary counter: tiles `{0,1} x {l,f,s}`
/// (`l` lowest bit, `f` flip, `s` same), first row all zero, each row the
/// successor of the one below, and E wins exactly when the all-ones row
/// appears.
pub fn counter_instance(n: usize) -> TilingInstance {
    let t = |s: &str| s.to_string();
    let bits = ["0", "1"];
    let xs = ["f", "s"];
    let mut h = Vec::new();
    for b in bits {
        h.push((t("0l"), format!("{b}s")));
        h.push((t("1l"), format!("{b}f")));
        h.push((t("0f"), format!("{b}s")));
        h.push((t("1f"), format!("{b}f")));
        h.push((t("0s"), format!("{b}s")));
        h.push((t("1s"), format!("{b}s")));
    }
    let mut v = vec![(t("0l"), t("1l")), (t("1l"), t("0l"))];
    for x in xs {
        v.push((t("0f"), format!("1{x}")));
        v.push((t("1f"), format!("0{x}")));
        v.push((t("0s"), format!("0{x}")));
        v.push((t("1s"), format!("1{x}")));
    }
    TilingInstance::new(
        vec![t("0l"), t("1l"), t("0f"), t("1f"), t("0s"), t("1s")],
        h,
        v,
        vec![t("0l"), t("0s")],
        vec![t("1l"), t("1f")],
        n,
    )
    .expect("counter instance is well formed")
}

// ---------------------------------------------------------------------------
// Encoder

const MARKERS: [&str; 7] = ["row_e", "row_o", "pos_e", "pos_o", "q_sharp", "o", "c"];

struct Enc<'a> {
    inst: &'a TilingInstance,
}

impl<'a> Enc<'a> {
    fn n(&self) -> usize {
        self.inst.n
    }

    fn b(&self, i: usize) -> StateFormula {
        prop(&format!("b{i}"))
    }

    fn d(&self, i: usize) -> StateFormula {
        prop(&format!("d{i}"))
    }

    fn e(&self, i: usize) -> StateFormula {
        prop(&format!("e{i}"))
    }

    fn tile_prop(&self, t: usize) -> StateFormula {
        prop(&format!("p_{}", self.inst.tiles[t]))
    }

    fn pos(&self) -> StateFormula {
        or(prop("pos_e"), prop("pos_o"))
    }

    fn row(&self) -> StateFormula {
        or(prop("row_e"), prop("row_o"))
    }

    /// First (original) node of a position sequence: `o` with all bits 0.
    fn phi_first(&self) -> StateFormula {
        and_all(std::iter::once(prop("o")).chain((0..self.n()).map(|i| not(self.b(i)))))
    }

    /// Last node of a position sequence: all bits 1.
    fn phi_last(&self) -> StateFormula {
        and_all((0..self.n()).map(|i| self.b(i)))
    }

    /// The path runs to the end of the current position sequence and then
    /// into copy nodes.
    fn psi_cur(&self) -> PathFormula {
        pand(
            always(lift(not(self.pos()))),
            eventually(lift(and(prop("c"), self.phi_last()))),
        )
    }

    /// The path meets exactly one position marker.
    fn psi_pos(&self) -> PathFormula {
        por(
            pand(
                eventually(lift(prop("pos_e"))),
                pnot(eventually(lift(prop("pos_o")))),
            ),
            pand(
                eventually(lift(prop("pos_o"))),
                pnot(eventually(lift(prop("pos_e")))),
            ),
        )
    }

    /// The path meets exactly one row marker.
    fn psi_row(&self) -> PathFormula {
        por(
            pand(
                eventually(lift(prop("row_e"))),
                pnot(eventually(lift(prop("row_o")))),
            ),
            pand(
                eventually(lift(prop("row_o"))),
                pnot(eventually(lift(prop("row_e")))),
            ),
        )
    }

    fn chi1(&self) -> StateFormula {
        let one_of = or_all(MARKERS.iter().map(|m| prop(m)));
        let mut conj = vec![one_of];
        for (i, m) in MARKERS.iter().enumerate() {
            let others = and_all(
                MARKERS
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, m2)| not(prop(m2))),
            );
            conj.push(implies(prop(m), others));
        }
        ag(and_all(conj))
    }

    fn chi2(&self) -> StateFormula {
        // the row node has exactly one pos_e child: some node has x1 as its
        // only child, after binding x1 to the witness child
        let unique_child = bind(1, at_root(ef(and(ex(var(1)), formula::ax(var(1))))));
        and(
            prop("row_e"),
            ag(implies(self.row(), ex(and(prop("pos_e"), unique_child)))),
        )
    }

    fn chi3(&self) -> StateFormula {
        ag(implies(self.pos(), formula::ax(self.phi_first())))
    }

    fn chi4(&self) -> StateFormula {
        and(self.chi4a(), self.chi4b())
    }

    /// Pin the carry chains: `d_i` iff all lower bits are 1, `e_i` iff all
    /// lower bits are 0.
    fn chi4a(&self) -> StateFormula {
        let n = self.n();
        let mut conj = vec![self.d(0)];
        for i in 1..n {
            conj.push(iff(self.d(i), and(self.d(i - 1), self.b(i - 1))));
        }
        conj.push(self.e(0));
        for i in 1..n {
            conj.push(iff(self.e(i), and(self.e(i - 1), not(self.b(i - 1)))));
        }
        ag(and_all(conj))
    }

    /// The original child of a non-final bit node carries the incremented
    /// bit number.
    fn chi4b(&self) -> StateFormula {
        let n = self.n();
        // at the child: either the top bit flips 0 -> 1 with all lower child
        // bits 0, or it is unchanged
        let top = or(
            and_all([
                self.e(n - 1),
                self.b(n - 1),
                at_var(1, not(self.b(n - 1))),
            ]),
            and(not(self.e(n - 1)), iff(self.b(n - 1), at_var(1, self.b(n - 1)))),
        );
        let lower = and_all((0..n.saturating_sub(1)).map(|i| {
            or_all([
                and(self.e(i + 1), at_var(1, self.d(i + 1))),
                and_all([self.e(i), self.b(i), at_var(1, not(self.b(i)))]),
                and(not(self.e(i)), iff(self.b(i), at_var(1, self.b(i)))),
            ])
        }));
        ag(implies(
            and(prop("o"), not(self.phi_last())),
            bind(1, ex(and_all([prop("o"), top, lower]))),
        ))
    }

    fn chi5(&self) -> StateFormula {
        let same_bits = |this: &Enc| {
            and_all(
                (0..this.n())
                    .map(|i| iff(this.b(i), at_var(1, this.b(i))))
                    .chain(std::iter::once(iff(prop("b"), at_var(1, prop("b"))))),
            )
        };
        let original = implies(
            prop("o"),
            bind(1, ex(and(prop("c"), same_bits(self)))),
        );
        let copies = implies(
            prop("c"),
            bind(1, ag(and(prop("c"), same_bits(self)))),
        );
        ag(and(original, copies))
    }

    fn chi6(&self) -> StateFormula {
        and(self.chi6a(), self.chi6b())
    }

    fn chi6a(&self) -> StateFormula {
        let unique = |marker: StateFormula| {
            bind(
                1,
                at_root(ef(and(
                    ex(var(1)),
                    formula::ax(implies(marker, var(1))),
                ))),
            )
        };
        ag(implies(
            and(prop("o"), not(self.phi_last())),
            and_all([
                ex(and(prop("o"), unique(prop("o")))),
                ex(and(prop("c"), unique(prop("c")))),
                formula::ax(or(prop("o"), prop("c"))),
            ]),
        ))
    }

    fn chi6b(&self) -> StateFormula {
        let unique = |marker: StateFormula| {
            bind(
                1,
                at_root(ef(and(
                    ex(var(1)),
                    formula::ax(implies(marker, var(1))),
                ))),
            )
        };
        ag(implies(
            and(prop("o"), self.phi_last()),
            and_all([
                ex(and(prop("c"), unique(prop("c")))),
                ex(and(not(prop("c")), unique(not(prop("c"))))),
                formula::ax(or_all([prop("c"), self.pos(), self.row(), prop("q_sharp")])),
            ]),
        ))
    }

    fn chi7(&self) -> StateFormula {
        let fresh_count = exists(pand(self.psi_cur(), always(lift(not(prop("b"))))));
        ag(implies(self.row(), ex(formula::ax(fresh_count))))
    }

    fn chi8(&self) -> StateFormula {
        and_all([self.chi8a(), self.chi8b(), self.chi8c()])
    }

    fn chi8a(&self) -> StateFormula {
        let guard = and(
            self.phi_first(),
            exists(pand(self.psi_cur(), always(lift(prop("b"))))),
        );
        let then = exists(pand(
            always(lift(not(self.pos()))),
            eventually(lift(and_all([
                prop("o"),
                self.phi_last(),
                ex(or(self.row(), prop("q_sharp"))),
            ]))),
        ));
        ag(implies(guard, then))
    }

    fn chi8b(&self) -> StateFormula {
        let guard = and_all([
            self.phi_first(),
            exists(pand(
                always(lift(not(self.pos()))),
                eventually(lift(and_all([prop("c"), self.phi_last(), prop("b")]))),
            )),
            exists(pand(self.psi_cur(), eventually(lift(not(prop("b")))))),
        ]);
        ag(implies(guard, self.theta()))
    }

    /// Find the highest bit that flips; `theta_prime` transfers the flip to
    /// the next position sequence.
    fn theta(&self) -> StateFormula {
        exists(pand(
            self.psi_cur(),
            eventually(lift(and_all([
                prop("o"),
                not(prop("b")),
                ex(and(
                    not(prop("c")),
                    implies(
                        prop("o"),
                        exists(pand(self.psi_cur(), always(lift(prop("b"))))),
                    ),
                )),
                self.theta_prime(),
            ]))),
        ))
    }

    fn theta_prime(&self) -> StateFormula {
        let inner_flip = ex(and(
            not(prop("c")),
            implies(
                prop("o"),
                exists(pand(self.psi_cur(), always(lift(not(prop("b")))))),
            ),
        ));
        let same_pos_bits = and_all(
            (0..self.n())
                .map(|i| iff(self.b(i), at_var(1, self.b(i))))
                .chain(std::iter::once(iff(prop("b"), at_var(1, prop("b"))))),
        );
        bind(
            1,
            and(
                self.theta_second(),
                exists(pand(
                    self.psi_cur(),
                    eventually(lift(and_all([
                        prop("o"),
                        self.phi_last(),
                        ex(and(
                            self.pos(),
                            formula::ax(exists(pand(
                                self.psi_cur(),
                                eventually(lift(and_all([
                                    prop("o"),
                                    same_pos_bits,
                                    inner_flip,
                                ]))),
                            ))),
                        )),
                    ]))),
                )),
            ),
        )
    }

    /// Bits above the flipped one carry over to the next position sequence.
    fn theta_second(&self) -> StateFormula {
        let bits_track = pand_all(
            (0..self.n())
                .map(|i| {
                    piff(
                        lift(self.b(i)),
                        eventually(lift(and(prop("c"), self.b(i)))),
                    )
                })
                .collect::<Vec<_>>(),
        );
        let b_track = piff(
            lift(prop("b")),
            eventually(lift(and(prop("c"), prop("b")))),
        );
        let carry = forall(pimplies(pand(self.psi_pos(), bits_track), b_track));
        at_root(ef(and(
            self.phi_first(),
            exists(pand_all([
                always(lift(not(self.pos()))),
                eventually(lift(var(1))),
                eventually(lift(and(
                    prop("c"),
                    and_all((0..self.n()).map(|i| iff(self.b(i), at_var(1, self.b(i))))),
                ))),
                always(lift(implies(and(prop("o"), not(var(1))), carry))),
            ])),
        )))
    }

    fn chi8c(&self) -> StateFormula {
        let guard = and(
            self.phi_first(),
            exists(pand(
                always(lift(not(self.pos()))),
                eventually(lift(and_all([prop("c"), self.phi_last(), not(prop("b"))]))),
            )),
        );
        let game_over = exists(pand(
            self.psi_cur(),
            eventually(lift(and_all([
                prop("o"),
                self.phi_last(),
                ex(prop("q_sharp")),
            ]))),
        ));
        ag(implies(guard, or(game_over, self.theta())))
    }

    fn chi9(&self) -> StateFormula {
        and(self.chi9a(), self.chi9b())
    }

    fn chi9a(&self) -> StateFormula {
        let reaches_x = exists(pand(
            self.psi_cur(),
            eventually(lift(and_all([prop("o"), self.phi_last(), ex(var(1))]))),
        ));
        let alternates = ag(implies(
            and(self.pos(), ex(reaches_x)),
            iff(prop("pos_e"), at_var(1, prop("pos_o"))),
        ));
        ag(implies(self.pos(), bind(1, at_root(alternates))))
    }

    fn chi9b(&self) -> StateFormula {
        let reaches_x = exists(pand_all([
            always(lift(not(self.row()))),
            eventually(lift(and(prop("c"), self.phi_last()))),
            eventually(lift(and_all([prop("o"), self.phi_last(), ex(var(1))]))),
        ]));
        let alternates = ag(implies(
            and(self.row(), ex(reaches_x)),
            iff(prop("row_e"), at_var(1, prop("row_o"))),
        ));
        ag(implies(self.row(), bind(1, at_root(alternates))))
    }

    fn chi10(&self) -> StateFormula {
        let unique_child = bind(1, at_root(ef(and(ex(var(1)), formula::ax(var(1))))));
        ag(implies(prop("pos_e"), ex(unique_child)))
    }

    fn psi1(&self) -> StateFormula {
        and(
            forall(pimplies(
                always(lift(not(prop("c")))),
                eventually(lift(prop("q_sharp"))),
            )),
            ag(implies(prop("q_sharp"), ag(prop("q_sharp")))),
        )
    }

    fn psi2(&self) -> StateFormula {
        let tiles = 0..self.inst.tile_count();
        let exactly_one = or_all(tiles.clone().map(|t| {
            and_all(
                std::iter::once(self.tile_prop(t)).chain(
                    tiles
                        .clone()
                        .filter(move |t2| *t2 != t)
                        .map(|t2| not(self.tile_prop(t2))),
                ),
            )
        }));
        let propagate = and_all(
            tiles
                .clone()
                .map(|t| iff(self.tile_prop(t), ex(and(prop("o"), self.tile_prop(t))))),
        );
        ag(and(
            implies(prop("o"), exactly_one),
            implies(and(prop("o"), not(self.phi_last())), propagate),
        ))
    }

    fn psi3(&self) -> StateFormula {
        let tiles = 0..self.inst.tile_count();
        let per_tile = and_all(tiles.map(|t_after| {
            let allowed = or_all(
                self.inst
                    .h
                    .iter()
                    .filter(|&&(_, b)| b == t_after)
                    .map(|&(a, _)| self.tile_prop(a)),
            );
            let predecessor = and_all([
                self.phi_first(),
                not(var(1)),
                exists(pand_all([
                    eventually(lift(var(1))),
                    self.psi_pos(),
                    always(lift(not(self.row()))),
                ])),
            ]);
            implies(
                self.tile_prop(t_after),
                bind(1, at_root(ag(implies(predecessor, allowed)))),
            )
        }));
        ag(implies(self.phi_first(), per_tile))
    }

    /// The node binding `x1` sits on the last bit of a position sequence;
    /// `xi` then recognizes the first bit of the same-numbered position one
    /// row earlier.
    fn xi(&self) -> StateFormula {
        let reaches_only_x = exists(pand_all([
            eventually(lift(var(1))),
            always(lift(implies(not(prop("c")), ef(var(1))))),
            self.psi_row(),
        ]));
        let bits_track = (0..self.n())
            .map(|i| {
                piff(
                    lift(self.b(i)),
                    eventually(lift(and(prop("c"), self.b(i)))),
                )
            })
            .collect::<Vec<_>>();
        let same_position = exists(pand(
            self.psi_cur(),
            always(lift(implies(
                prop("o"),
                exists(pand_all(
                    [
                        always(lift(implies(not(prop("c")), ef(var(1))))),
                        eventually(lift(exists(pand(
                            always(lift(not(self.pos()))),
                            eventually(lift(var(1))),
                        )))),
                    ]
                    .into_iter()
                    .chain(bits_track.clone())
                    .chain(std::iter::once(piff(
                        lift(prop("b")),
                        eventually(lift(and(prop("c"), prop("b")))),
                    ))),
                )),
            ))),
        ));
        and_all([self.phi_first(), reaches_only_x, same_position])
    }

    fn psi4(&self) -> StateFormula {
        let tiles = 0..self.inst.tile_count();
        let per_tile = and_all(tiles.map(|t_above| {
            let allowed = or_all(
                self.inst
                    .v
                    .iter()
                    .filter(|&&(_, b)| b == t_above)
                    .map(|&(a, _)| self.tile_prop(a)),
            );
            implies(
                self.tile_prop(t_above),
                exists(pand(
                    self.psi_cur(),
                    eventually(lift(and_all([
                        prop("o"),
                        self.phi_last(),
                        bind(1, at_root(ag(implies(self.xi(), allowed)))),
                    ]))),
                )),
            )
        }));
        ag(implies(self.phi_first(), per_tile))
    }

    fn psi5(&self) -> StateFormula {
        let guard = and(
            self.phi_first(),
            exists(pand(
                self.psi_cur(),
                eventually(lift(and_all([prop("o"), self.phi_last(), not(prop("b"))]))),
            )),
        );
        let tiles = 0..self.inst.tile_count();
        let per_tile = and_all(tiles.map(|t| {
            let nexts = self
                .inst
                .h
                .iter()
                .filter(|&&(a, _)| a == t)
                .map(|&(_, t2)| t2)
                .collect::<Vec<_>>();
            let branches = and_all(nexts.into_iter().map(|t2| {
                let encoded = exists(pand(
                    self.psi_cur(),
                    eventually(lift(and_all([
                        prop("o"),
                        self.phi_last(),
                        ex(and(self.pos(), ex(self.tile_prop(t2)))),
                    ]))),
                ));
                let vertically_blocked = or_all(
                    (0..self.inst.tile_count())
                        .filter(|t_pred| !self.inst.v.contains(&(*t_pred, t2)))
                        .map(|t_pred| {
                            exists(pand(
                                self.psi_cur(),
                                eventually(lift(and_all([
                                    prop("o"),
                                    self.phi_last(),
                                    ex(and(self.tile_prop(t_pred), ef(var(1)))),
                                ]))),
                            ))
                        }),
                );
                let blocked = exists(pand(
                    self.psi_cur(),
                    eventually(lift(and_all([
                        prop("o"),
                        self.phi_last(),
                        bind(1, at_root(ef(and(self.xi(), vertically_blocked)))),
                    ]))),
                ));
                or(encoded, blocked)
            }));
            implies(self.tile_prop(t), branches)
        }));
        ag(implies(guard, per_tile))
    }

    fn psi6(&self) -> StateFormula {
        let in_first_row = bind(
            1,
            at_root(ex(exists(pand(
                always(lift(not(self.row()))),
                eventually(lift(var(1))),
            )))),
        );
        let from_f = or_all(self.inst.f.iter().map(|&t| self.tile_prop(t)));
        ag(implies(and(self.phi_first(), in_first_row), from_f))
    }

    fn psi7(&self) -> StateFormula {
        let from_l = or_all(self.inst.l.iter().map(|&t| self.tile_prop(t)));
        let last_row_ok = bind(
            1,
            at_root(ef(and(
                self.row(),
                ex(exists(pand_all([
                    always(lift(not(self.row()))),
                    eventually(lift(var(1))),
                    always(lift(implies(self.phi_first(), from_l))),
                ]))),
            ))),
        );
        ag(implies(
            and_all([prop("o"), self.phi_last(), prop("b"), ex(prop("q_sharp"))]),
            last_row_ok,
        ))
    }
}

fn reserved_props(n: usize) -> BTreeSet<String> {
    let mut set: BTreeSet<String> = MARKERS.iter().map(|s| s.to_string()).collect();
    set.insert("b".to_string());
    for i in 0..n {
        set.insert(format!("b{i}"));
        set.insert(format!("d{i}"));
        set.insert(format!("e{i}"));
    }
    set
}

fn validate_for_encoding(inst: &TilingInstance) -> Result<(), TilingError> {
    if inst.n == 0 {
        return Err(TilingError::BadParameter(0));
    }
    if inst.tiles.is_empty() {
        return Err(TilingError::NoTiles);
    }
    let reserved = reserved_props(inst.n);
    for t in &inst.tiles {
        let p = format!("p_{t}");
        if reserved.contains(&p) {
            return Err(TilingError::ReservedClash(p));
        }
    }
    Ok(())
}

/// Names of the seventeen encoder subformulas, in conjunction order.
pub fn subformula_names() -> Vec<String> {
    (1..=10)
        .map(|i| format!("chi{i}"))
        .chain((1..=7).map(|i| format!("psi{i}")))
        .collect()
}

/// A single named subformula of the encoding.
pub fn subformula(inst: &TilingInstance, name: &str) -> Result<StateFormula, TilingError> {
    validate_for_encoding(inst)?;
    let e = Enc { inst };
    Ok(match name {
        "chi1" => e.chi1(),
        "chi2" => e.chi2(),
        "chi3" => e.chi3(),
        "chi4" => e.chi4(),
        "chi5" => e.chi5(),
        "chi6" => e.chi6(),
        "chi7" => e.chi7(),
        "chi8" => e.chi8(),
        "chi9" => e.chi9(),
        "chi10" => e.chi10(),
        "psi1" => e.psi1(),
        "psi2" => e.psi2(),
        "psi3" => e.psi3(),
        "psi4" => e.psi4(),
        "psi5" => e.psi5(),
        "psi6" => e.psi6(),
        "psi7" => e.psi7(),
        other => return Err(TilingError::UnknownSubformula(other.to_string())),
    })
}

/// The full reduction formula: satisfiable iff player E has a winning
/// strategy on the instance (a model encodes the strategy tree).
pub fn encode_tiling(inst: &TilingInstance) -> Result<StateFormula, TilingError> {
    validate_for_encoding(inst)?;
    let names = subformula_names();
    let mut parts = Vec::with_capacity(names.len());
    for name in &names {
        parts.push(subformula(inst, name)?);
    }
    Ok(and_all(parts))
}

/// Does the tree satisfy the reduction formula for the instance?
pub fn strategy_tree_check(tree: &Tree, inst: &TilingInstance) -> Result<bool, TilingError> {
    let f = encode_tiling(inst)?;
    Ok(models(tree, &f, Mode::LeafLoop))
}

// ---------------------------------------------------------------------------
// Game solver

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TilingVerdict {
    EWins,
    AWins,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct BoardState {
    /// Completed row below the one being played; `None` during the first row.
    above: Option<Vec<usize>>,
    partial: Vec<usize>,
}

impl BoardState {
    fn initial() -> BoardState {
        BoardState { above: None, partial: Vec::new() }
    }

    /// Player E places the even positions of each row, A the odd ones.
    fn e_to_move(&self) -> bool {
        self.partial.len().is_multiple_of(2)
    }
}

enum Placed {
    EWinsNow,
    RowDone(BoardState),
    Continue(BoardState),
}

struct Solver<'a> {
    inst: &'a TilingInstance,
    width: usize,
    budget: usize,
    seen: usize,
}

impl<'a> Solver<'a> {
    fn legal(&self, s: &BoardState) -> Vec<usize> {
        (0..self.inst.tile_count())
            .filter(|&t| {
                if s.above.is_none() && !self.inst.f.contains(&t) {
                    return false;
                }
                if let Some(&left) = s.partial.last() {
                    if !self.inst.h.contains(&(left, t)) {
                        return false;
                    }
                }
                if let Some(above) = &s.above {
                    if !self.inst.v.contains(&(above[s.partial.len()], t)) {
                        return false;
                    }
                }
                true
            })
            .collect()
    }

    fn place(&self, s: &BoardState, t: usize) -> Placed {
        let mut partial = s.partial.clone();
        partial.push(t);
        if partial.len() == self.width {
            if partial.iter().all(|x| self.inst.l.contains(x)) {
                Placed::EWinsNow
            } else {
                Placed::RowDone(BoardState { above: Some(partial), partial: Vec::new() })
            }
        } else {
            Placed::Continue(BoardState { above: s.above.clone(), partial })
        }
    }

    /// Can E force a win completing at most `rows_left` more rows?
    fn e_wins_within(
        &mut self,
        s: &BoardState,
        rows_left: usize,
        memo: &mut HashMap<(BoardState, usize), bool>,
    ) -> Result<bool, TilingError> {
        if let Some(&v) = memo.get(&(s.clone(), rows_left)) {
            return Ok(v);
        }
        self.seen += 1;
        if self.seen > self.budget {
            return Err(TilingError::StateBudgetExceeded(self.seen));
        }
        let moves = self.legal(s);
        let e_turn = s.e_to_move();
        // a stuck player loses: A stuck means E wins and vice versa
        let mut result = !e_turn;
        for t in moves {
            let value = match self.place(s, t) {
                Placed::EWinsNow => true,
                Placed::RowDone(next) => {
                    if rows_left <= 1 {
                        false
                    } else {
                        self.e_wins_within(&next, rows_left - 1, memo)?
                    }
                }
                Placed::Continue(next) => self.e_wins_within(&next, rows_left, memo)?,
            };
            if e_turn && value {
                result = true;
                break;
            }
            if !e_turn && !value {
                result = false;
                break;
            }
        }
        memo.insert((s.clone(), rows_left), result);
        Ok(result)
    }

    /// Exact value of the unbounded game by a least fixpoint over the
    /// (row-index independent) state graph: if E cannot force a win in any
    /// number of rows, A wins, infinite play included.
    fn e_wins_unbounded(&mut self, start: &BoardState) -> Result<bool, TilingError> {
        #[derive(Clone)]
        enum Succ {
            Win,
            To(usize),
        }
        let mut index: HashMap<BoardState, usize> = HashMap::new();
        let mut states: Vec<BoardState> = Vec::new();
        let mut succ: Vec<Vec<Succ>> = Vec::new();
        let mut stack = vec![start.clone()];
        index.insert(start.clone(), 0);
        states.push(start.clone());
        succ.push(Vec::new());
        while let Some(s) = stack.pop() {
            if states.len() > self.budget {
                return Err(TilingError::StateBudgetExceeded(states.len()));
            }
            let si = index[&s];
            let mut edges = Vec::new();
            for t in self.legal(&s) {
                match self.place(&s, t) {
                    Placed::EWinsNow => edges.push(Succ::Win),
                    Placed::RowDone(n) | Placed::Continue(n) => {
                        let ni = *index.entry(n.clone()).or_insert_with(|| {
                            states.push(n.clone());
                            succ.push(Vec::new());
                            stack.push(n);
                            states.len() - 1
                        });
                        edges.push(Succ::To(ni));
                    }
                }
            }
            succ[si] = edges;
        }
        let mut win = vec![false; states.len()];
        loop {
            let mut changed = false;
            for i in 0..states.len() {
                if win[i] {
                    continue;
                }
                let e_turn = states[i].e_to_move();
                let value = if e_turn {
                    succ[i].iter().any(|e| match e {
                        Succ::Win => true,
                        Succ::To(j) => win[*j],
                    })
                } else {
                    succ[i].iter().all(|e| match e {
                        Succ::Win => true,
                        Succ::To(j) => win[*j],
                    })
                };
                if value {
                    win[i] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(win[0])
    }
}

/// Solve the alternating tiling game on a `width`-column board. `EWins`
/// means E forces a win within `max_rows` rows; `AWins` is exact (E cannot
/// win with any number of rows); `Inconclusive` means E wins the unbounded
/// game but needs more than `max_rows` rows.
pub fn solve_tiling(
    inst: &TilingInstance,
    width: usize,
    max_rows: usize,
) -> Result<TilingVerdict, TilingError> {
    if width == 0 {
        return Err(TilingError::BadWidth);
    }
    let mut solver = Solver { inst, width, budget: 1_000_000, seen: 0 };
    let start = BoardState::initial();
    let mut memo = HashMap::new();
    if max_rows > 0 && solver.e_wins_within(&start, max_rows, &mut memo)? {
        return Ok(TilingVerdict::EWins);
    }
    if solver.e_wins_unbounded(&start)? {
        Ok(TilingVerdict::Inconclusive)
    } else {
        Ok(TilingVerdict::AWins)
    }
}
