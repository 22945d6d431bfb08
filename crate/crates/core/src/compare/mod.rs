//! The signature-comparison game `C_P` over a pair of game trees, and its
//! unravelling back into a single game tree.
//!
//! A round from `(p, s, ell)` runs through fixed sub-phases: the claim
//! opportunities of both players, the two chances to lower `ell` (the first
//! of which rewrites `p` to `pri ell'(p)`), and then one descent step —
//! synchronized when both trees start with `pri ell`, otherwise on the
//! `p` side (when `p` is not `pri ell`-headed) or the `s` side. Claims are
//! resolved immediately into terminal positions via the membership solver.
//!
//! The exported checks verify the claim "the comparison game is won by the
//! existential player iff the truncated signatures compare", the honest
//! quasi-strategies' safety and progress properties, and the shape of the
//! game's cycles.

mod unravel;

pub use unravel::unravel_cp_handles;

use crate::games::{solve_zielonka, ParityGame, Player, Position, Solution};
use crate::signatures::{compute_signature_table_solved, Signature, SignatureTable};
use crate::trees::{graph_key, is_well_formed, Alphabet, IndexPair, Letter, NodeId, RegularTree};
use crate::{Error, Result};
use std::collections::HashMap;
use std::sync::Arc;

/// The `p`-side tree of a comparison position: a node of the `p` graph under
/// a stack of prepended priorities (outermost first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PHandle {
    pub wraps: Vec<u32>,
    pub node: NodeId,
}

impl PHandle {
    pub fn plain(node: NodeId) -> PHandle {
        PHandle { wraps: Vec::new(), node }
    }

    pub fn push(&self, j: u32) -> PHandle {
        let mut wraps = Vec::with_capacity(self.wraps.len() + 1);
        wraps.push(j);
        wraps.extend_from_slice(&self.wraps);
        PHandle { wraps, node: self.node }
    }

    fn head(&self, g: &RegularTree) -> Letter {
        match self.wraps.first() {
            Some(&j) => Letter::Pri(j),
            None => g.label(self.node),
        }
    }

    fn tail(&self, g: &RegularTree) -> PHandle {
        if self.wraps.is_empty() {
            PHandle::plain(g.children(self.node)[0])
        } else {
            PHandle { wraps: self.wraps[1..].to_vec(), node: self.node }
        }
    }

    fn child(&self, g: &RegularTree, dir: usize) -> PHandle {
        debug_assert!(self.wraps.is_empty());
        PHandle::plain(g.children(self.node)[dir])
    }
}

/// A round boundary of the comparison game.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoundKey {
    pub p: PHandle,
    pub s: NodeId,
    pub ell: u32,
}

/// Sub-round phase of a comparison-game position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    /// Round start: the existential claim opportunity.
    El,
    /// Universal claim opportunity.
    Al,
    /// Existential chance to lower `ell` (rewrites `p`).
    Ei,
    /// Universal chance to lower `ell` (leaves `p` unchanged).
    Ai,
    /// The descent step.
    Core,
}

/// What the descent step of a round does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoreKind {
    /// Both trees start with `pri ell`: synchronized descent.
    SyncDescent,
    /// Descent on the `p` side.
    StepLeft,
    /// Descent on the `s` side.
    StepRight,
}

#[derive(Debug, Clone)]
pub enum PosInfo {
    Round { key: RoundKey, phase: Phase, kind: Option<CoreKind> },
    Terminal(Player),
}

/// The comparison game, its solution, and the signature tables backing the
/// quasi-strategies.
pub struct CompareGame {
    pub player: Player,
    pub index: IndexPair,
    pub game: ParityGame,
    pub info: Vec<PosInfo>,
    pub rounds: HashMap<RoundKey, Position>,
    pub initial_key: RoundKey,
    pub term_exists: Position,
    pub term_forall: Position,
    p_graph: Arc<RegularTree>,
    s_graph: Arc<RegularTree>,
    p_table: Arc<SignatureTable>,
    s_table: Arc<SignatureTable>,
}

struct Builder {
    player: Player,
    index: IndexPair,
    losing: Vec<u32>,
    p_graph: Arc<RegularTree>,
    s_graph: Arc<RegularTree>,
    p_wins: Vec<bool>,
    s_wins: Vec<bool>,
    owners: Vec<Player>,
    priorities: Vec<u32>,
    successors: Vec<Vec<Position>>,
    labels: Vec<String>,
    info: Vec<PosInfo>,
    by_key: HashMap<(RoundKey, Phase), Position>,
    term_exists: Position,
    term_forall: Position,
    work: Vec<(RoundKey, Phase)>,
}

impl Builder {
    fn alloc(&mut self, owner: Player, priority: u32, label: String, info: PosInfo) -> Position {
        let v = self.owners.len();
        self.owners.push(owner);
        self.priorities.push(priority);
        self.successors.push(Vec::new());
        self.labels.push(label);
        self.info.push(info);
        v
    }

    fn position(&mut self, key: &RoundKey, phase: Phase) -> Position {
        if let Some(&v) = self.by_key.get(&(key.clone(), phase)) {
            return v;
        }
        let owner = match phase {
            Phase::El | Phase::Ei => Player::One,
            Phase::Al | Phase::Ai => Player::Two,
            Phase::Core => Player::One, // refined below for choice steps
        };
        let label = format!(
            "{:?}:{}{}@{}/{}",
            phase,
            key.p.wraps.iter().map(|j| format!("pri{j}.")).collect::<String>(),
            self.p_graph.name(key.p.node),
            self.s_graph.name(key.s),
            key.ell
        );
        let v = self.alloc(
            owner,
            self.index.k,
            label,
            PosInfo::Round { key: key.clone(), phase, kind: None },
        );
        self.by_key.insert((key.clone(), phase), v);
        self.work.push((key.clone(), phase));
        v
    }

    fn smaller_losing(&self, ell: u32) -> Vec<u32> {
        self.losing.iter().copied().filter(|&l| l < ell).collect()
    }

    fn fill(&mut self, key: RoundKey, phase: Phase) {
        let v = self.by_key[&(key.clone(), phase)];
        match phase {
            Phase::El => {
                // Claim that P loses G(s): correct iff the membership test fails.
                let target = if self.s_wins[key.s] { self.term_forall } else { self.term_exists };
                let next = self.position(&key, Phase::Al);
                self.successors[v] = vec![target, next];
            }
            Phase::Al => {
                let target =
                    if self.p_wins[key.p.node] { self.term_exists } else { self.term_forall };
                let next = self.position(&key, Phase::Ei);
                self.successors[v] = vec![target, next];
            }
            Phase::Ei => {
                let mut succ = Vec::new();
                for ell2 in self.smaller_losing(key.ell) {
                    let nk = RoundKey { p: key.p.push(ell2), s: key.s, ell: ell2 };
                    succ.push(self.position(&nk, Phase::El));
                }
                succ.push(self.position(&key, Phase::Ai));
                self.successors[v] = succ;
            }
            Phase::Ai => {
                let mut succ = Vec::new();
                for ell2 in self.smaller_losing(key.ell) {
                    let nk = RoundKey { p: key.p.clone(), s: key.s, ell: ell2 };
                    succ.push(self.position(&nk, Phase::El));
                }
                succ.push(self.position(&key, Phase::Core));
                self.successors[v] = succ;
            }
            Phase::Core => self.fill_core(key, v),
        }
    }

    fn fill_core(&mut self, key: RoundKey, v: Position) {
        let p = self.player;
        let ell = key.ell;
        let p_head = key.p.head(&self.p_graph);
        let s_label = self.s_graph.label(key.s);
        let mut kind = CoreKind::StepLeft;
        if p_head == Letter::Pri(ell) && s_label == Letter::Pri(ell) {
            kind = CoreKind::SyncDescent;
            let nk = RoundKey {
                p: key.p.tail(&self.p_graph),
                s: self.s_graph.children(key.s)[0],
                ell,
            };
            let next = self.position(&nk, Phase::El);
            self.successors[v] = vec![next];
        } else if p_head != Letter::Pri(ell) {
            // Descent on the p side.
            match p_head {
                Letter::Choice(q) => {
                    self.owners[v] = if q == p { Player::One } else { Player::Two };
                    let kids: Vec<Position> = (0..2)
                        .map(|d| {
                            let nk = RoundKey {
                                p: key.p.child(&self.p_graph, d),
                                s: key.s,
                                ell,
                            };
                            self.position(&nk, Phase::El)
                        })
                        .collect();
                    self.successors[v] = kids;
                }
                Letter::Pri(j) if j > ell => {
                    self.priorities[v] = j + 1 - p.numeral();
                    let nk = RoundKey { p: key.p.tail(&self.p_graph), s: key.s, ell };
                    let next = self.position(&nk, Phase::El);
                    self.successors[v] = vec![next];
                }
                // pri j with j < ell, or the swap letter: immediate win.
                _ => {
                    self.successors[v] = vec![self.term_exists];
                }
            }
        } else {
            kind = CoreKind::StepRight;
            match s_label {
                Letter::Choice(q) => {
                    self.owners[v] = if q == p { Player::Two } else { Player::One };
                    let kids: Vec<Position> = (0..2)
                        .map(|d| {
                            let nk = RoundKey {
                                p: key.p.clone(),
                                s: self.s_graph.children(key.s)[d],
                                ell,
                            };
                            self.position(&nk, Phase::El)
                        })
                        .collect();
                    self.successors[v] = kids;
                }
                Letter::Pri(j) if j > ell => {
                    self.priorities[v] = j - 2 + p.numeral();
                    let nk = RoundKey { p: key.p.clone(), s: self.s_graph.children(key.s)[0], ell };
                    let next = self.position(&nk, Phase::El);
                    self.successors[v] = vec![next];
                }
                _ => {
                    self.successors[v] = vec![self.term_forall];
                }
            }
        }
        if let PosInfo::Round { kind: slot, .. } = &mut self.info[v] {
            *slot = Some(kind);
        }
    }
}

fn require_ang(t: &RegularTree) -> Result<()> {
    if t.alphabet() == Alphabet::AngPlus {
        return Err(Error::WrongAlphabet { expected: "alp or ang".into(), got: "angp".into() });
    }
    if !is_well_formed(t) {
        return Err(Error::NotWellFormed);
    }
    Ok(())
}

/// Builds the comparison game from `(p-root, s-root, ell)`; `ell` defaults
/// to the maximal losing number of the window.
pub fn build_compare_game(
    p_tree: &RegularTree,
    s_tree: &RegularTree,
    player: Player,
    ell: Option<u32>,
) -> Result<CompareGame> {
    let p_graph = Arc::new(p_tree.clone());
    let s_graph = Arc::new(s_tree.clone());
    build_compare_game_at(
        &p_graph,
        PHandle::plain(p_graph.root()),
        &s_graph,
        s_graph.root(),
        player,
        ell,
    )
}

/// As [`build_compare_game`], but starting from arbitrary subtree handles.
pub fn build_compare_game_at(
    p_graph: &Arc<RegularTree>,
    p: PHandle,
    s_graph: &Arc<RegularTree>,
    s: NodeId,
    player: Player,
    ell: Option<u32>,
) -> Result<CompareGame> {
    require_ang(p_graph)?;
    require_ang(s_graph)?;
    let index = p_graph.index();
    if s_graph.index() != index {
        return Err(Error::Domain("comparison requires a common priority window".into()));
    }
    let losing = index.losing(player);
    let ell = match ell {
        Some(l) => {
            if !losing.contains(&l) {
                return Err(Error::Domain(format!("{l} is not a {player}-losing number")));
            }
            l
        }
        None => *losing.last().unwrap(),
    };

    let (p_table, p_sol) = compute_signature_table_solved(p_graph)?;
    let same = graph_key(p_graph) == graph_key(s_graph);
    let (s_table, s_sol) = if same {
        (p_table.clone(), p_sol.clone())
    } else {
        compute_signature_table_solved(s_graph)?
    };
    let wins_of = |t: &RegularTree, sol: &Solution| -> Vec<bool> {
        let ig = crate::games::induced_game(t).expect("checked above");
        t.nodes().map(|n| sol.winner_at(ig.position(n, false)) == player).collect()
    };
    let p_wins = wins_of(p_graph, &p_sol);
    let s_wins = if same { p_wins.clone() } else { wins_of(s_graph, &s_sol) };

    let least_even = if index.i % 2 == 0 { index.i } else { index.i + 1 };
    let least_odd = if index.i % 2 == 1 { index.i } else { index.i + 1 };

    let mut b = Builder {
        player,
        index,
        losing,
        p_graph: p_graph.clone(),
        s_graph: s_graph.clone(),
        p_wins,
        s_wins,
        owners: Vec::new(),
        priorities: Vec::new(),
        successors: Vec::new(),
        labels: Vec::new(),
        info: Vec::new(),
        by_key: HashMap::new(),
        term_exists: 0,
        term_forall: 0,
        work: Vec::new(),
    };
    b.term_exists = b.alloc(
        Player::One,
        least_even,
        "win:E".into(),
        PosInfo::Terminal(Player::One),
    );
    b.term_forall = b.alloc(
        Player::One,
        least_odd,
        "win:A".into(),
        PosInfo::Terminal(Player::Two),
    );
    b.successors[b.term_exists] = vec![b.term_exists];
    b.successors[b.term_forall] = vec![b.term_forall];

    let initial_key = RoundKey { p, s, ell };
    let initial = b.position(&initial_key, Phase::El);
    while let Some((key, phase)) = b.work.pop() {
        b.fill(key, phase);
    }

    let game = ParityGame::new(b.owners, b.priorities, b.successors, initial, b.labels);
    let rounds = b
        .by_key
        .iter()
        .filter(|((_, phase), _)| *phase == Phase::El)
        .map(|((key, _), &v)| (key.clone(), v))
        .collect();
    Ok(CompareGame {
        player,
        index,
        game,
        info: b.info,
        rounds,
        initial_key,
        term_exists: b.term_exists,
        term_forall: b.term_forall,
        p_graph: p_graph.clone(),
        s_graph: s_graph.clone(),
        p_table: Arc::new(p_table),
        s_table: Arc::new(s_table),
    })
}

impl CompareGame {
    pub fn solve(&self) -> Solution {
        solve_zielonka(&self.game)
    }

    /// The existential player's truncated-signature claim at a round key.
    pub fn sig_p(&self, key: &RoundKey) -> Signature {
        self.p_table.sig_of_wrapped(self.player, &key.p.wraps, key.p.node)
    }

    pub fn sig_s(&self, key: &RoundKey) -> Signature {
        self.s_table.sig(self.player, key.s).clone()
    }

    /// Inequality (the comparison invariant): `sig_P(p)|ell <= sig_P(s)|ell`.
    pub fn satisfies_invariant(&self, key: &RoundKey) -> bool {
        let ctx = self.p_table.ctx(self.player);
        let lhs = ctx.truncate(&self.sig_p(key), key.ell).expect("ell is losing");
        let rhs = ctx.truncate(&self.sig_s(key), key.ell).expect("ell is losing");
        lhs.lex_le(&rhs)
    }

    /// The honest quasi-strategy's allowed moves at a position owned by
    /// `who`. The existential one is defined on rounds satisfying the
    /// invariant, the universal one on rounds violating it.
    pub fn quasi_moves(&self, v: Position, who: Player) -> Result<Vec<Position>> {
        let PosInfo::Round { key, phase, kind } = &self.info[v] else {
            return Err(Error::Domain("terminal positions have no moves".into()));
        };
        if self.game.owner(v) != who {
            return Err(Error::Domain("queried player does not own this position".into()));
        }
        let sat = self.satisfies_invariant(key);
        let right_side = match who {
            Player::One => sat,
            Player::Two => !sat,
        };
        if !right_side {
            return Err(Error::Domain(format!(
                "quasi-strategy of {} queried on the wrong side of the invariant",
                if who == Player::One { "the existential player" } else { "the universal player" }
            )));
        }
        let ctx = self.p_table.ctx(self.player);
        let succ = self.game.successors(v);
        let moves = match (phase, who) {
            (Phase::El, Player::One) => {
                // Claim iff P really loses G(s): the claim edge then leads to
                // the existential terminal.
                if self.game.successors(v)[0] == self.term_exists {
                    vec![succ[0]]
                } else {
                    vec![succ[1]]
                }
            }
            (Phase::Al, Player::Two) => {
                if self.game.successors(v)[0] == self.term_forall {
                    vec![succ[0]]
                } else {
                    vec![succ[1]]
                }
            }
            (Phase::Ei, Player::One) => {
                // The minimal smaller losing number with a strict inequality.
                let smaller: Vec<u32> =
                    ctx.losing.iter().copied().filter(|&l| l < key.ell).collect();
                let pick = smaller.iter().position(|&l| {
                    let lhs = ctx.truncate(&self.sig_p(key), l).unwrap();
                    let rhs = ctx.truncate(&self.sig_s(key), l).unwrap();
                    lhs.lex_cmp(&rhs) == std::cmp::Ordering::Less
                });
                match pick {
                    Some(i) => vec![succ[i]],
                    None => vec![*succ.last().unwrap()],
                }
            }
            (Phase::Ai, Player::Two) => {
                let smaller: Vec<u32> =
                    ctx.losing.iter().copied().filter(|&l| l < key.ell).collect();
                let pick = smaller.iter().position(|&l| {
                    let lhs = ctx.truncate(&self.sig_p(key), l).unwrap();
                    let rhs = ctx.truncate(&self.sig_s(key), l).unwrap();
                    lhs.lex_cmp(&rhs) == std::cmp::Ordering::Greater
                });
                match pick {
                    Some(i) => vec![succ[i]],
                    None => vec![*succ.last().unwrap()],
                }
            }
            (Phase::Core, _) => self.quasi_core_moves(key, *kind, who, v)?,
            _ => return Err(Error::Domain("phase/player mismatch".into())),
        };
        debug_assert!(!moves.is_empty());
        Ok(moves)
    }

    fn quasi_core_moves(
        &self,
        key: &RoundKey,
        kind: Option<CoreKind>,
        who: Player,
        v: Position,
    ) -> Result<Vec<Position>> {
        let p = self.player;
        let ctx = self.p_table.ctx(p);
        let succ = self.game.successors(v);
        match kind {
            Some(CoreKind::StepLeft) => {
                let head = key.p.head(&self.p_graph);
                let Letter::Choice(q) = head else {
                    return Ok(succ.to_vec()); // forced step
                };
                if q == p {
                    // who == One: move to the subtree of smaller signature.
                    let l = self.p_table.sig(p, key.p.child(&self.p_graph, 0).node);
                    let r = self.p_table.sig(p, key.p.child(&self.p_graph, 1).node);
                    Ok(vec![if l.lex_le(r) { succ[0] } else { succ[1] }])
                } else {
                    // who == Two: any child keeping the violation strict.
                    let picks: Vec<Position> = (0..2)
                        .filter(|&d| {
                            let child = key.p.child(&self.p_graph, d).node;
                            let lhs = ctx
                                .truncate(self.p_table.sig(p, child), key.ell)
                                .unwrap();
                            let rhs = ctx.truncate(&self.sig_s(key), key.ell).unwrap();
                            lhs.lex_cmp(&rhs) == std::cmp::Ordering::Greater
                        })
                        .map(|d| succ[d])
                        .collect();
                    Ok(picks)
                }
            }
            Some(CoreKind::StepRight) => {
                let Letter::Choice(q) = self.s_graph.label(key.s) else {
                    return Ok(succ.to_vec());
                };
                if q == p {
                    // who == Two: move to the subtree of smaller signature.
                    let l = self.s_table.sig(p, self.s_graph.children(key.s)[0]);
                    let r = self.s_table.sig(p, self.s_graph.children(key.s)[1]);
                    Ok(vec![if l.lex_le(r) { succ[0] } else { succ[1] }])
                } else {
                    // who == One: any child preserving the invariant.
                    let picks: Vec<Position> = (0..2)
                        .filter(|&d| {
                            let child = self.s_graph.children(key.s)[d];
                            let lhs = ctx.truncate(&self.sig_p(key), key.ell).unwrap();
                            let rhs =
                                ctx.truncate(self.s_table.sig(p, child), key.ell).unwrap();
                            lhs.lex_le(&rhs)
                        })
                        .map(|d| succ[d])
                        .collect();
                    Ok(picks)
                }
            }
            Some(CoreKind::SyncDescent) | None => Ok(succ.to_vec()),
        }
    }
}

/// Claim check: the existential player wins `C_P` from `(p, s, ell)` iff the
/// `ell`-truncated canonical signatures satisfy `sig_P(p) <= sig_P(s)`.
pub fn check_claim_winner(
    p_tree: &RegularTree,
    s_tree: &RegularTree,
    ell: Option<u32>,
    player: Player,
) -> Result<bool> {
    let cg = build_compare_game(p_tree, s_tree, player, ell)?;
    let sol = cg.solve();
    let exists_wins = sol.winner_at(cg.game.initial()) == Player::One;
    Ok(exists_wins == cg.satisfies_invariant(&cg.initial_key))
}

/// Unravels the comparison game into a well-formed game tree over `ang`,
/// padded so every second node on each branch is a priority node.
pub fn unravel_cp(
    p_tree: &RegularTree,
    s_tree: &RegularTree,
    player: Player,
    ell: Option<u32>,
) -> Result<RegularTree> {
    let p_graph = Arc::new(p_tree.clone());
    let s_graph = Arc::new(s_tree.clone());
    require_ang(&p_graph)?;
    require_ang(&s_graph)?;
    let losing = p_graph.index().losing(player);
    let ell = match ell {
        Some(l) => l,
        None => *losing.last().unwrap(),
    };
    unravel_cp_handles(
        &p_graph,
        PHandle::plain(p_graph.root()),
        &s_graph,
        s_graph.root(),
        player,
        ell,
    )
}

/// Verification of the honest-safety property on the finite game graph: from
/// any reachable round satisfying the invariant, playing any existential
/// quasi-move against any opponent reply ends the round in an existential
/// terminal or a round again satisfying the invariant; dually for rounds
/// violating it. Returns the violations found.
pub fn check_honest_safety(cg: &CompareGame) -> Result<Vec<String>> {
    let mut violations = Vec::new();
    let reachable = cg.game.reachable();
    for &start in &reachable {
        let PosInfo::Round { key, phase: Phase::El, .. } = &cg.info[start] else { continue };
        let sat = cg.satisfies_invariant(key);
        let honest = if sat { Player::One } else { Player::Two };
        let bad_term = if sat { cg.term_forall } else { cg.term_exists };
        // Walk the round: honest player restricted to quasi-moves, the
        // opponent free; stop at terminals and at round boundaries.
        let mut stack = vec![start];
        let mut seen = std::collections::BTreeSet::new();
        seen.insert(start);
        let mut expand = |v: Position, out: &mut Vec<Position>| -> Result<()> {
            let succ: Vec<Position> = if cg.game.owner(v) == honest {
                cg.quasi_moves(v, honest)?
            } else {
                cg.game.successors(v).to_vec()
            };
            out.extend(succ);
            Ok(())
        };
        let mut frontier = Vec::new();
        expand(start, &mut frontier)?;
        while let Some(v) = frontier.pop() {
            if !seen.insert(v) {
                continue;
            }
            match &cg.info[v] {
                PosInfo::Terminal(_) => {
                    if v == bad_term {
                        violations.push(format!(
                            "honest player reaches a losing terminal from {}",
                            cg.game.label(start)
                        ));
                    }
                }
                PosInfo::Round { key: k2, phase: Phase::El, .. } => {
                    let sat2 = cg.satisfies_invariant(k2);
                    if sat2 != sat {
                        violations.push(format!(
                            "invariant flips from {} to {}",
                            cg.game.label(start),
                            cg.game.label(v)
                        ));
                    }
                }
                _ => expand(v, &mut frontier)?,
            }
        }
    }
    Ok(violations)
}

/// Form of cycles: every reachable cycle either takes the synchronized
/// descent step, or consists solely of `p`-side descents, or solely of
/// `s`-side descents.
pub fn check_form_of_plays(cg: &CompareGame) -> bool {
    let reachable = cg.game.reachable();
    let mut keep = vec![false; cg.game.len()];
    for &v in &reachable {
        keep[v] = true;
    }
    // Remove the out-edges of synchronized-descent cores, then no SCC may
    // contain both a left-step and a right-step core.
    let succ = |v: Position| {
        let blocked = matches!(
            cg.info[v],
            PosInfo::Round { kind: Some(CoreKind::SyncDescent), .. }
        );
        if blocked {
            Vec::new().into_iter()
        } else {
            cg.game.successors(v).to_vec().into_iter()
        }
    };
    for scc in crate::games::sccs_of(cg.game.len(), &keep, succ) {
        if scc.len() == 1 {
            continue;
        }
        let mut left = false;
        let mut right = false;
        for &v in &scc {
            match cg.info[v] {
                PosInfo::Round { kind: Some(CoreKind::StepLeft), .. } => left = true,
                PosInfo::Round { kind: Some(CoreKind::StepRight), .. } => right = true,
                _ => {}
            }
        }
        if left && right {
            return false;
        }
    }
    true
}

/// Progress of the honest quasi-strategies: in the subgame restricted to the
/// honest player's allowed moves, no cycle contains a synchronized descent.
pub fn check_quasi_progress(cg: &CompareGame) -> Result<bool> {
    let sat = cg.satisfies_invariant(&cg.initial_key);
    let honest = if sat { Player::One } else { Player::Two };
    // Restricted reachable subgraph.
    let mut succs: Vec<Vec<Position>> = vec![Vec::new(); cg.game.len()];
    let mut keep = vec![false; cg.game.len()];
    let mut stack = vec![cg.game.initial()];
    keep[cg.game.initial()] = true;
    while let Some(v) = stack.pop() {
        let out: Vec<Position> = match &cg.info[v] {
            PosInfo::Terminal(_) => vec![],
            _ if cg.game.owner(v) == honest => cg.quasi_moves(v, honest)?,
            _ => cg.game.successors(v).to_vec(),
        };
        for &w in &out {
            if !keep[w] {
                keep[w] = true;
                stack.push(w);
            }
        }
        succs[v] = out;
    }
    for scc in crate::games::sccs_of(cg.game.len(), &keep, |v| succs[v].clone().into_iter()) {
        let cyclic = scc.len() > 1 || succs[scc[0]].contains(&scc[0]);
        if !cyclic {
            continue;
        }
        if scc.iter().any(|&v| {
            matches!(cg.info[v], PosInfo::Round { kind: Some(CoreKind::SyncDescent), .. })
        }) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The non-increasing-`ell` invariant over every edge of the game.
pub fn check_ell_monotone(cg: &CompareGame) -> bool {
    for v in cg.game.positions() {
        let PosInfo::Round { key, .. } = &cg.info[v] else { continue };
        for &w in cg.game.successors(v) {
            if let PosInfo::Round { key: k2, .. } = &cg.info[w] {
                if k2.ell > key.ell {
                    return false;
                }
            }
        }
    }
    true
}

/// All game priorities lie inside the priority window.
pub fn check_priority_range(cg: &CompareGame) -> bool {
    cg.game
        .positions()
        .all(|v| cg.index.contains(cg.game.priority(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::games::member_w;
    use crate::IndexPair;

    #[test]
    fn identical_trees_compare_equal() {
        let t = fixtures::fig4();
        assert!(check_claim_winner(&t, &t, None, Player::One).unwrap());
        let cg = build_compare_game(&t, &t, Player::One, None).unwrap();
        let sol = cg.solve();
        assert_eq!(sol.winner_at(cg.game.initial()), Player::One);
    }

    #[test]
    fn fig7_comparison_order() {
        let f = fixtures::fig7();
        // sigma(t0) = (0,0) < (0,1) = sigma(pri3(t0)): the existential player
        // wins comparing t0 against pri3(t0) and loses the swap.
        let cg = build_compare_game(&f.t0, &f.pri3_t0, Player::One, None).unwrap();
        assert_eq!(cg.solve().winner_at(cg.game.initial()), Player::One);
        let cg = build_compare_game(&f.pri3_t0, &f.t0, Player::One, None).unwrap();
        assert_eq!(cg.solve().winner_at(cg.game.initial()), Player::Two);
        assert!(check_claim_winner(&f.t0, &f.pri3_t0, None, Player::One).unwrap());
        assert!(check_claim_winner(&f.pri3_t0, &f.t0, None, Player::One).unwrap());
    }

    #[test]
    fn losing_left_side_lets_universal_claim() {
        let idx = IndexPair::new(0, 2).unwrap();
        let losing = fixtures::loop_tree(idx, 1);
        let winning = fixtures::loop_tree(idx, 0);
        let cg = build_compare_game(&losing, &winning, Player::One, None).unwrap();
        assert_eq!(cg.solve().winner_at(cg.game.initial()), Player::Two);
        assert!(check_claim_winner(&losing, &winning, None, Player::One).unwrap());
    }

    #[test]
    fn unravelling_matches_game_winner_on_fixtures() {
        let f = fixtures::fig7();
        for (a, b) in [(&f.t0, &f.pri3_t0), (&f.pri3_t0, &f.t0)] {
            let cg = build_compare_game(a, b, Player::One, None).unwrap();
            let game_winner = cg.solve().winner_at(cg.game.initial());
            let tree = unravel_cp(a, b, Player::One, None).unwrap();
            assert!(crate::trees::is_well_formed(&tree));
            let tree_winner =
                if member_w(&tree, Player::One).unwrap() { Player::One } else { Player::Two };
            assert_eq!(game_winner, tree_winner);
        }
    }

    #[test]
    fn structural_invariants_on_fixture_games() {
        let f = fixtures::fig7();
        let cg = build_compare_game(&f.t0, &f.pri3_t0, Player::One, None).unwrap();
        assert!(check_priority_range(&cg));
        assert!(check_ell_monotone(&cg));
        assert!(check_form_of_plays(&cg));
        assert!(check_honest_safety(&cg).unwrap().is_empty());
        assert!(check_quasi_progress(&cg).unwrap());
    }
}
