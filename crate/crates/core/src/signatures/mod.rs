//! Canonical per-player signatures of game trees.
//!
//! A `P`-signature is `Infinity` or a tuple of counters indexed by the
//! `P`-losing numbers of the priority window, ordered lexicographically with
//! lower indices more significant. The canonical assignment is the least
//! fixpoint of the per-node equations (swap, priority, own-choice min,
//! opponent-choice max), computed for both players simultaneously by
//! worklist lifting over the finite capped lattice.
//!
//! On a finite game graph a finite component can never exceed the number of
//! game positions carrying its effective priority: a longer active segment
//! would revisit a position and close a losing cycle. Components are
//! therefore capped, and an overflow saturates the whole entry to
//! `Infinity`; the brute-force oracle in [`oracle`] cross-checks this
//! representation on small instances.

mod invariants;
mod oracle;

pub use invariants::{check_table_equations, corrupt_table, verify_invariants, InvariantReport};
pub use oracle::{
    active_set, check_gg_wellfounded, oracle_signature, strategy_value, ActiveSet, StrategyValue,
};

use crate::games::{solve_induced, Player, Solution};
use crate::trees::{is_priority_guarded, is_well_formed, Alphabet, IndexPair, Letter, NodeId, RegularTree};
use crate::{Error, Result};
use std::cmp::Ordering;
use std::fmt;

/// A `P`-signature: `Infinity`, or one counter per `P`-losing number.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Signature {
    Fin(Vec<u64>),
    Inf,
}

impl Signature {
    pub fn is_inf(&self) -> bool {
        matches!(self, Signature::Inf)
    }

    pub fn components(&self) -> Option<&[u64]> {
        match self {
            Signature::Fin(v) => Some(v),
            Signature::Inf => None,
        }
    }

    /// Lexicographic comparison; `Infinity` is the maximum. Finite tuples
    /// must have equal length.
    pub fn lex_cmp(&self, other: &Signature) -> Ordering {
        match (self, other) {
            (Signature::Inf, Signature::Inf) => Ordering::Equal,
            (Signature::Inf, _) => Ordering::Greater,
            (_, Signature::Inf) => Ordering::Less,
            (Signature::Fin(a), Signature::Fin(b)) => {
                debug_assert_eq!(a.len(), b.len(), "comparing signatures of different windows");
                a.cmp(b)
            }
        }
    }

    pub fn lex_le(&self, other: &Signature) -> bool {
        self.lex_cmp(other) != Ordering::Greater
    }

    pub fn lex_max(a: Signature, b: Signature) -> Signature {
        if a.lex_cmp(&b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    pub fn lex_min(a: Signature, b: Signature) -> Signature {
        if a.lex_cmp(&b) == Ordering::Greater {
            b
        } else {
            a
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::Inf => write!(f, "infinity"),
            Signature::Fin(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Signature arithmetic for one player over one priority window.
#[derive(Debug, Clone)]
pub struct SigCtx {
    pub index: IndexPair,
    pub player: Player,
    /// The `player`-losing numbers, ascending.
    pub losing: Vec<u32>,
}

impl SigCtx {
    pub fn new(index: IndexPair, player: Player) -> SigCtx {
        SigCtx { index, player, losing: index.losing(player) }
    }

    pub fn width(&self) -> usize {
        self.losing.len()
    }

    pub fn zeros(&self) -> Signature {
        Signature::Fin(vec![0; self.width()])
    }

    pub fn slot_of(&self, j: u32) -> Option<usize> {
        self.losing.iter().position(|&l| l == j)
    }

    pub fn is_losing(&self, j: u32) -> bool {
        self.slot_of(j).is_some()
    }

    /// Effect of a losing priority `j`: keep counters below `j`, increment
    /// the counter at `j`, zero the rest.
    pub fn inc(&self, sig: &Signature, j: u32) -> Signature {
        let slot = self.slot_of(j).expect("inc at a losing priority");
        match sig {
            Signature::Inf => Signature::Inf,
            Signature::Fin(v) => {
                let mut out = vec![0; self.width()];
                out[..slot].copy_from_slice(&v[..slot]);
                out[slot] = v[slot] + 1;
                Signature::Fin(out)
            }
        }
    }

    /// Effect of a winning priority `j`: keep counters with index below `j`,
    /// zero the rest.
    pub fn reset_from(&self, sig: &Signature, j: u32) -> Signature {
        debug_assert!(!self.is_losing(j));
        match sig {
            Signature::Inf => Signature::Inf,
            Signature::Fin(v) => {
                let keep = self.losing.partition_point(|&l| l < j);
                let mut out = vec![0; self.width()];
                out[..keep].copy_from_slice(&v[..keep]);
                Signature::Fin(out)
            }
        }
    }

    /// The prefix tuple up to a losing index `ell`; `Infinity` stays
    /// `Infinity`. Order-preserving.
    pub fn truncate(&self, sig: &Signature, ell: u32) -> Result<Signature> {
        let Some(slot) = self.slot_of(ell) else {
            return Err(Error::Domain(format!(
                "{ell} is not a {}-losing number in [{},{}]",
                self.player, self.index.i, self.index.k
            )));
        };
        Ok(match sig {
            Signature::Inf => Signature::Inf,
            Signature::Fin(v) => Signature::Fin(v[..=slot].to_vec()),
        })
    }

    /// Signature of a tree `pri j_m(...pri j_1(base)...)` given the base, the
    /// wrapping priorities applied innermost-first.
    pub fn apply_priorities(&self, base: &Signature, wraps_outermost_first: &[u32]) -> Signature {
        let mut sig = base.clone();
        for &j in wraps_outermost_first.iter().rev() {
            sig = if self.is_losing(j) { self.inc(&sig, j) } else { self.reset_from(&sig, j) };
        }
        sig
    }
}

/// Canonical signature tables for both players over one tree.
#[derive(Debug, Clone)]
pub struct SignatureTable {
    pub ctx_one: SigCtx,
    pub ctx_two: SigCtx,
    one: Vec<Signature>,
    two: Vec<Signature>,
}

impl SignatureTable {
    pub fn ctx(&self, p: Player) -> &SigCtx {
        match p {
            Player::One => &self.ctx_one,
            Player::Two => &self.ctx_two,
        }
    }

    /// `sigma_P` of the subtree presented from `n` (the node re-rooted kept).
    pub fn sig(&self, p: Player, n: NodeId) -> &Signature {
        match p {
            Player::One => &self.one[n],
            Player::Two => &self.two[n],
        }
    }

    /// The table entry for an induced-game position `(n, bit)` from the
    /// perspective of player `p` at the root: at switched positions the
    /// subtree is evaluated for the opponent.
    pub fn entry(&self, p: Player, n: NodeId, switched: bool) -> &Signature {
        let q = if switched { p.opponent() } else { p };
        self.sig(q, n)
    }

    /// Signature of a handle `pri w1(...(pri wm(node)))`.
    pub fn sig_of_wrapped(&self, p: Player, wraps_outermost_first: &[u32], n: NodeId) -> Signature {
        self.ctx(p).apply_priorities(self.sig(p, n), wraps_outermost_first)
    }

    pub(crate) fn set(&mut self, p: Player, n: NodeId, sig: Signature) {
        match p {
            Player::One => self.one[n] = sig,
            Player::Two => self.two[n] = sig,
        }
    }
}

/// Per-losing-priority caps: the number of induced-game positions of each
/// effective priority.
pub(crate) fn caps(t: &RegularTree, ctx: &SigCtx) -> Vec<u64> {
    ctx.losing
        .iter()
        .map(|&j| {
            let at_bit0 = t.nodes().filter(|&n| t.label(n) == Letter::Pri(j)).count();
            let at_bit1 = if j >= 1 {
                t.nodes().filter(|&n| t.label(n) == Letter::Pri(j - 1)).count()
            } else {
                0
            };
            (at_bit0 + at_bit1) as u64
        })
        .collect()
}

pub(crate) fn saturate(sig: Signature, caps: &[u64]) -> Signature {
    match &sig {
        Signature::Fin(v) if v.iter().zip(caps).any(|(x, c)| x > c) => Signature::Inf,
        _ => sig,
    }
}

/// Computes the canonical signature tables of both players as the least
/// fixpoint of the per-node equations, and cross-checks the infinity law
/// (`entry = Infinity` iff the player loses there) against the game solver.
pub fn compute_signature_table(t: &RegularTree) -> Result<SignatureTable> {
    let (table, _) = compute_signature_table_solved(t)?;
    Ok(table)
}

pub(crate) fn compute_signature_table_solved(
    t: &RegularTree,
) -> Result<(SignatureTable, Solution)> {
    if t.alphabet() == Alphabet::AngPlus {
        return Err(Error::WrongAlphabet { expected: "alp or ang".into(), got: "angp".into() });
    }
    if !is_well_formed(t) {
        return Err(Error::NotWellFormed);
    }
    if !is_priority_guarded(t) {
        return Err(Error::NotPriorityGuarded);
    }
    let ctx_one = SigCtx::new(t.index(), Player::One);
    let ctx_two = SigCtx::new(t.index(), Player::Two);
    let caps_by_player = [caps(t, &ctx_one), caps(t, &ctx_two)];
    let mut tables = [
        vec![ctx_one.zeros(); t.len()],
        vec![ctx_two.zeros(); t.len()],
    ];

    // Dependents: (q, m) must be re-evaluated when (p, n) changes.
    let mut dependents: Vec<Vec<(usize, NodeId)>> = vec![Vec::new(); 2 * t.len()];
    let key = |p: usize, n: NodeId| 2 * n + p;
    for m in t.nodes() {
        for &c in t.children(m) {
            match t.label(m) {
                Letter::Neg => {
                    dependents[key(0, c)].push((1, m));
                    dependents[key(1, c)].push((0, m));
                }
                _ => {
                    dependents[key(0, c)].push((0, m));
                    dependents[key(1, c)].push((1, m));
                }
            }
        }
    }

    let ctxs = [&ctx_one, &ctx_two];
    let eval = |tables: &[Vec<Signature>; 2], p: usize, n: NodeId| -> Signature {
        let ctx = ctxs[p];
        match t.label(n) {
            Letter::Pri(j) => {
                let child = &tables[p][t.children(n)[0]];
                if ctx.is_losing(j) {
                    ctx.inc(child, j)
                } else {
                    ctx.reset_from(child, j)
                }
            }
            Letter::Neg => {
                // Zeros exactly when the opponent wins the child, i.e. its
                // opponent-table entry is finite.
                if tables[1 - p][t.children(n)[0]].is_inf() {
                    Signature::Inf
                } else {
                    ctx.zeros()
                }
            }
            Letter::Choice(q) => {
                let l = tables[p][t.children(n)[0]].clone();
                let r = tables[p][t.children(n)[1]].clone();
                let own = match p {
                    0 => q == Player::One,
                    _ => q == Player::Two,
                };
                if own {
                    Signature::lex_min(l, r)
                } else {
                    Signature::lex_max(l, r)
                }
            }
            Letter::ChoicePlus(_) => unreachable!("alphabet checked above"),
        }
    };

    let mut queue: std::collections::VecDeque<(usize, NodeId)> =
        (0..2).flat_map(|p| t.nodes().map(move |n| (p, n))).collect();
    let mut queued = vec![true; 2 * t.len()];
    while let Some((p, n)) = queue.pop_front() {
        queued[key(p, n)] = false;
        let new = saturate(eval(&tables, p, n), &caps_by_player[p]);
        let old = &tables[p][n];
        let ord = new.lex_cmp(old);
        debug_assert_ne!(ord, Ordering::Less, "signature lifting must be monotone");
        if ord == Ordering::Greater {
            tables[p][n] = new;
            for &(q, m) in &dependents[key(p, n)] {
                if !queued[key(q, m)] {
                    queued[key(q, m)] = true;
                    queue.push_back((q, m));
                }
            }
        }
    }

    let [one, two] = tables;
    let table = SignatureTable { ctx_one, ctx_two, one, two };

    // Infinity law: entry infinite iff the player loses the re-rooted game.
    let (ig, sol) = solve_induced(t)?;
    for n in t.nodes() {
        for p in [Player::One, Player::Two] {
            let wins = sol.winner_at(ig.position(n, false)) == p;
            if table.sig(p, n).is_inf() == wins {
                return Err(Error::Domain(format!(
                    "infinity law violated at node `{}` for player {p}",
                    t.name(n)
                )));
            }
        }
    }
    Ok((table, sol))
}

/// Convenience wrapper: the canonical `P`-signature per node.
pub fn compute_signatures(t: &RegularTree, p: Player) -> Result<Vec<Signature>> {
    let table = compute_signature_table(t)?;
    Ok(t.nodes().map(|n| table.sig(p, n).clone()).collect())
}

/// The canonical signature of the whole tree.
pub fn root_signature(t: &RegularTree, p: Player) -> Result<Signature> {
    let table = compute_signature_table(t)?;
    Ok(table.sig(p, t.root()).clone())
}

/// A sigma-optimal positional strategy for `p` in `G(t)`.
///
/// At a position `(n, bit)` owned by `p` with label `Choice(q)` the strategy
/// moves to the child with the smaller canonical `q`-signature, breaking
/// ties toward the lower direction.
pub fn optimal_strategy(t: &RegularTree, p: Player) -> Result<crate::games::PositionalStrategy> {
    let (table, sol) = compute_signature_table_solved(t)?;
    let (ig, _) = solve_induced(t)?;
    if sol.winner_at(ig.game.initial()) != p {
        return Err(Error::PlayerLoses(p));
    }
    let mut strategy = crate::games::PositionalStrategy::new(p);
    for n in t.nodes() {
        let Letter::Choice(q) = t.label(n) else { continue };
        for bit in [false, true] {
            let v = ig.position(n, bit);
            if ig.game.owner(v) != p {
                continue;
            }
            // The comparison player is the letter's own player: at a switched
            // position the subtrees are compared with the opponent's tables.
            debug_assert_eq!(if bit { p.opponent() } else { p }, q);
            let l = table.sig(q, t.children(n)[0]);
            let r = table.sig(q, t.children(n)[1]);
            let dir = if l.lex_le(r) { 0 } else { 1 };
            strategy.moves.insert(v, ig.position(t.children(n)[dir], bit));
        }
    }
    Ok(strategy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::games::check_strategy_winning;

    fn fin(v: &[u64]) -> Signature {
        Signature::Fin(v.to_vec())
    }

    #[test]
    fn loop_signatures() {
        let idx = IndexPair::new(0, 2).unwrap();
        let t0 = fixtures::loop_tree(idx, 0);
        assert_eq!(root_signature(&t0, Player::One).unwrap(), fin(&[0]));
        let t1 = fixtures::loop_tree(idx, 1);
        assert_eq!(root_signature(&t1, Player::One).unwrap(), Signature::Inf);
        assert_eq!(root_signature(&t1, Player::Two).unwrap(), fin(&[0, 0]));
    }

    #[test]
    fn fig4_canonical_values() {
        let t = fixtures::fig4();
        let table = compute_signature_table(&t).unwrap();
        let at = |name: &str| table.sig(Player::One, t.node_by_name(name).unwrap());
        assert_eq!(*at("t"), fin(&[2, 1, 1]));
        assert_eq!(*at("u1"), fin(&[1, 1, 0]));
        assert_eq!(*at("u2"), fin(&[2, 0, 0]));
    }

    #[test]
    fn fig7_signature_values() {
        let f = fixtures::fig7();
        assert_eq!(root_signature(&f.t0, Player::One).unwrap(), fin(&[0, 0]));
        assert_eq!(root_signature(&f.pri3_t0, Player::One).unwrap(), fin(&[0, 1]));
    }

    #[test]
    fn fig7_optimal_strategy_moves_right() {
        let f = fixtures::fig7();
        let strat = optimal_strategy(&f.t, Player::One).unwrap();
        let ig = crate::games::induced_game(&f.t).unwrap();
        let root_pos = ig.game.initial();
        let target = strat.moves[&root_pos];
        let (target_node, _) = ig.node_of(target);
        assert_eq!(target_node, f.t0_node, "the optimal move goes to the right child");
        assert!(check_strategy_winning(&ig.game, &strat).unwrap());
    }

    #[test]
    fn truncate_is_prefix_and_monotone() {
        let idx = IndexPair::new(0, 5).unwrap();
        let ctx = SigCtx::new(idx, Player::One);
        assert_eq!(ctx.truncate(&fin(&[2, 1, 1]), 3).unwrap(), fin(&[2, 1]));
        assert_eq!(ctx.truncate(&Signature::Inf, 3).unwrap(), Signature::Inf);
        assert!(ctx.truncate(&fin(&[2, 1, 1]), 2).is_err());
        // Exhaustive monotonicity over small tuples.
        let all: Vec<Signature> = (0..4u64)
            .flat_map(|a| (0..4u64).flat_map(move |b| (0..4u64).map(move |c| fin(&[a, b, c]))))
            .chain(std::iter::once(Signature::Inf))
            .collect();
        for a in &all {
            for b in &all {
                if a.lex_le(b) {
                    for ell in [1, 3, 5] {
                        assert!(ctx
                            .truncate(a, ell)
                            .unwrap()
                            .lex_le(&ctx.truncate(b, ell).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn optimal_strategy_requires_winning() {
        let idx = IndexPair::new(0, 2).unwrap();
        let t1 = fixtures::loop_tree(idx, 1);
        assert!(matches!(
            optimal_strategy(&t1, Player::One),
            Err(Error::PlayerLoses(Player::One))
        ));
    }

    #[test]
    fn unguarded_trees_rejected() {
        let out = crate::trees::parse_tree_spec(
            "alphabet ang i=0 k=2 let a = p1(a, b); let b = pri0(b); root a",
        )
        .unwrap();
        assert!(matches!(
            compute_signature_table(&out.tree),
            Err(Error::NotPriorityGuarded)
        ));
    }
}
