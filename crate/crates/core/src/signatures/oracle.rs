//! Brute-force signature oracle: enumerate positional strategies, evaluate
//! each winning one by the inductive value recursion, take the minimum.
//!
//! Two value recursions are implemented on the strategy subgraph:
//!
//! * [`strategy_value`] computes, per position, the value of the *restricted*
//!   strategy rooted there (priority letters always act on their subtree);
//! * `global_values` computes the path-sensitive value relative to one
//!   evaluation root, where a priority letter acts only at *active* states
//!   (no smaller priority and no swap letter above). States are
//!   `(position, minimum priority seen above)`.
//!
//! At the evaluation root the two recursions agree, and at active states
//! they must coincide (the restriction law); `verify_invariants` checks
//! both on every oracle run.

use super::{caps, saturate, SigCtx, Signature};
use crate::games::{
    has_losing_cycle, solve_induced, InducedGame, ParityGame, Player, Position,
    PositionalStrategy,
};
use crate::trees::{Letter, NodeId, RegularTree};
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

/// Per-position signature values of one strategy on its restricted game:
/// the graph-level presentation of the per-subtree value function.
#[derive(Debug, Clone)]
pub struct StrategyValue {
    pub player: Player,
    /// Values at positions reachable without crossing a swap edge (swap
    /// nodes themselves are value sinks).
    pub values: BTreeMap<Position, Signature>,
    pub root: Signature,
}

/// Active positions of a strategy relative to an evaluation root, with the
/// path contexts (minimal priority above) that witnessed them.
#[derive(Debug, Clone)]
pub struct ActiveSet {
    pub player: Player,
    /// Graph nodes active along some strategy path from the root.
    pub nodes: BTreeSet<NodeId>,
    /// Reached `(node, min-priority-above)` witnesses, `None` for "none yet".
    pub states: BTreeSet<(NodeId, Option<u32>)>,
}

impl ActiveSet {
    pub fn contains(&self, n: NodeId) -> bool {
        self.nodes.contains(&n)
    }
}

/// Positions of `restricted` reachable from its initial position without
/// following the out-edge of a swap node.
fn top_region(
    restricted: &ParityGame,
    node_of: &impl Fn(Position) -> NodeId,
    t: &RegularTree,
) -> Vec<Position> {
    let mut seen = vec![false; restricted.len()];
    let mut stack = vec![restricted.initial()];
    seen[restricted.initial()] = true;
    let mut out = Vec::new();
    while let Some(v) = stack.pop() {
        out.push(v);
        if t.label(node_of(v)) == Letter::Neg {
            continue;
        }
        for &w in restricted.successors(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Evaluates the per-subtree value recursion of one strategy. `restricted`
/// and `orig` must come from `restrict_to_strategy` on the induced game.
pub fn strategy_value(
    t: &RegularTree,
    ig: &InducedGame,
    restricted: &ParityGame,
    orig: &[Position],
    player: Player,
) -> StrategyValue {
    let ctx = SigCtx::new(t.index(), player);
    let caps = caps(t, &ctx);
    let node_of = |v: Position| ig.node_of(orig[v]).0;
    let region = top_region(restricted, &node_of, t);

    let mut values: BTreeMap<Position, Signature> =
        region.iter().map(|&v| (v, ctx.zeros())).collect();
    let mut preds: BTreeMap<Position, Vec<Position>> = BTreeMap::new();
    for &v in &region {
        if t.label(node_of(v)) == Letter::Neg {
            continue;
        }
        for &w in restricted.successors(v) {
            preds.entry(w).or_default().push(v);
        }
    }

    let eval = |values: &BTreeMap<Position, Signature>, v: Position| -> Signature {
        let n = node_of(v);
        match t.label(n) {
            Letter::Neg => ctx.zeros(),
            Letter::Pri(j) => {
                let child = &values[&restricted.successors(v)[0]];
                if ctx.is_losing(j) {
                    ctx.inc(child, j)
                } else {
                    ctx.reset_from(child, j)
                }
            }
            Letter::Choice(_) => {
                let succ = restricted.successors(v);
                if restricted.owner(v) == player {
                    debug_assert_eq!(succ.len(), 1, "strategy must fix owned choices");
                    values[&succ[0]].clone()
                } else {
                    succ.iter().map(|w| values[w].clone()).reduce(Signature::lex_max).unwrap()
                }
            }
            Letter::ChoicePlus(_) => unreachable!("games are induced over alp/ang"),
        }
    };

    let mut queue: VecDeque<Position> = region.iter().copied().collect();
    let mut queued: BTreeSet<Position> = queue.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        queued.remove(&v);
        let new = saturate(eval(&values, v), &caps);
        if new.lex_cmp(&values[&v]) == std::cmp::Ordering::Greater {
            values.insert(v, new);
            for &u in preds.get(&v).map(|p| p.as_slice()).unwrap_or(&[]) {
                if queued.insert(u) {
                    queue.push_back(u);
                }
            }
        }
    }

    let root = values[&restricted.initial()].clone();
    StrategyValue { player, values, root }
}

pub(crate) type CtxState = (Position, Option<u32>);

/// Path-sensitive values relative to the evaluation root (see module docs).
pub(crate) struct GlobalValues {
    pub values: HashMap<CtxState, Signature>,
    pub edges: Vec<(CtxState, CtxState)>,
    /// States whose label is a losing priority not blocked by the context.
    pub active: Vec<CtxState>,
}

pub(crate) fn global_values(
    t: &RegularTree,
    ig: &InducedGame,
    restricted: &ParityGame,
    orig: &[Position],
    player: Player,
) -> GlobalValues {
    let ctx = SigCtx::new(t.index(), player);
    let caps = caps(t, &ctx);
    let node_of = |v: Position| ig.node_of(orig[v]).0;

    // Reachable (position, context) states; expansion stops at swap nodes.
    let start: CtxState = (restricted.initial(), None);
    let mut states: Vec<CtxState> = vec![start];
    let mut seen: BTreeSet<CtxState> = states.iter().copied().collect();
    let mut edges: Vec<(CtxState, CtxState)> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (v, mctx) = states[i];
        i += 1;
        let label = t.label(node_of(v));
        if label == Letter::Neg {
            continue;
        }
        let succ_ctx = match label {
            Letter::Pri(j) => Some(mctx.map_or(j, |m| m.min(j))),
            _ => mctx,
        };
        for &w in restricted.successors(v) {
            let s = (w, succ_ctx);
            edges.push(((v, mctx), s));
            if seen.insert(s) {
                states.push(s);
            }
        }
    }

    let is_active = |s: &CtxState| -> bool {
        match t.label(node_of(s.0)) {
            Letter::Pri(j) => ctx.is_losing(j) && s.1.is_none_or(|m| j <= m),
            _ => false,
        }
    };

    let mut succs: HashMap<CtxState, Vec<CtxState>> = HashMap::new();
    let mut preds: HashMap<CtxState, Vec<CtxState>> = HashMap::new();
    for &(a, b) in &edges {
        succs.entry(a).or_default().push(b);
        preds.entry(b).or_default().push(a);
    }

    let mut values: HashMap<CtxState, Signature> =
        states.iter().map(|&s| (s, ctx.zeros())).collect();
    let eval = |values: &HashMap<CtxState, Signature>, s: &CtxState| -> Signature {
        match t.label(node_of(s.0)) {
            Letter::Neg => ctx.zeros(),
            Letter::Pri(j) => {
                let child = &values[&succs[s][0]];
                if is_active(s) {
                    ctx.inc(child, j)
                } else {
                    child.clone()
                }
            }
            Letter::Choice(_) => succs[s]
                .iter()
                .map(|c| values[c].clone())
                .reduce(Signature::lex_max)
                .unwrap(),
            Letter::ChoicePlus(_) => unreachable!(),
        }
    };

    let mut queue: VecDeque<CtxState> = states.iter().copied().collect();
    let mut queued: BTreeSet<CtxState> = queue.iter().copied().collect();
    while let Some(s) = queue.pop_front() {
        queued.remove(&s);
        let new = saturate(eval(&values, &s), &caps);
        if new.lex_cmp(&values[&s]) == std::cmp::Ordering::Greater {
            values.insert(s, new.clone());
            for p in preds.get(&s).map(|p| p.as_slice()).unwrap_or(&[]) {
                if queued.insert(*p) {
                    queue.push_back(*p);
                }
            }
        }
    }

    let active = states.iter().copied().filter(is_active).collect();
    GlobalValues { values, edges, active }
}

/// All positional strategies of `p` over the reachable choice positions it
/// owns. Errors when the search space exceeds `max_choices` choice points.
pub(crate) fn enumerate_strategies(
    t: &RegularTree,
    ig: &InducedGame,
    p: Player,
    max_choices: usize,
) -> Result<Vec<PositionalStrategy>> {
    let owned: Vec<Position> = ig
        .game
        .reachable()
        .into_iter()
        .filter(|&v| {
            let (n, _) = ig.node_of(v);
            matches!(t.label(n), Letter::Choice(_)) && ig.game.owner(v) == p
        })
        .collect();
    if owned.len() > max_choices {
        return Err(Error::Domain(format!(
            "oracle limited to {max_choices} choice positions, found {}",
            owned.len()
        )));
    }
    let mut out = Vec::with_capacity(1 << owned.len());
    for mask in 0u64..(1u64 << owned.len()) {
        let mut strat = PositionalStrategy::new(p);
        for (i, &v) in owned.iter().enumerate() {
            let dir = ((mask >> i) & 1) as usize;
            strat.moves.insert(v, ig.game.successors(v)[dir]);
        }
        out.push(strat);
    }
    Ok(out)
}

/// The minimum, over winning positional strategies of `p`, of the inductive
/// value at the root; `Infinity` when no strategy wins.
pub fn oracle_signature(t: &RegularTree, p: Player) -> Result<Signature> {
    if !crate::trees::is_priority_guarded(t) {
        return Err(Error::NotPriorityGuarded);
    }
    let (ig, _) = solve_induced(t)?;
    let strategies = enumerate_strategies(t, &ig, p, 16)?;
    let mut best = Signature::Inf;
    for strat in strategies {
        let (restricted, orig) = crate::games::restrict_to_strategy(&ig.game, &strat)?;
        if has_losing_cycle(&restricted, p) {
            continue;
        }
        let value = strategy_value(t, &ig, &restricted, &orig, p);
        best = Signature::lex_min(best, value.root);
    }
    Ok(best)
}

/// The active set of a strategy relative to `root_node` (kept): strategy
/// positions labeled by a losing priority, reachable without passing a
/// smaller priority or a swap letter.
pub fn active_set(
    t: &RegularTree,
    strategy: &PositionalStrategy,
    root_node: NodeId,
) -> Result<ActiveSet> {
    let p = strategy.player;
    let ctx = SigCtx::new(t.index(), p);
    let ig = crate::games::induced_game(t)?;
    let g = &ig.game;
    let start = ig.position(root_node, false);
    let succ_of = |v: Position| -> Vec<Position> {
        if g.owner(v) == p {
            match strategy.moves.get(&v) {
                Some(&w) => vec![w],
                None => g.successors(v).to_vec(),
            }
        } else {
            g.successors(v).to_vec()
        }
    };
    let mut states: BTreeSet<(NodeId, Option<u32>)> = BTreeSet::new();
    let mut nodes: BTreeSet<NodeId> = BTreeSet::new();
    let mut queue: VecDeque<(Position, Option<u32>)> = VecDeque::new();
    let mut seen: BTreeSet<(Position, Option<u32>)> = BTreeSet::new();
    queue.push_back((start, None));
    seen.insert((start, None));
    while let Some((v, mctx)) = queue.pop_front() {
        let (n, _) = ig.node_of(v);
        match t.label(n) {
            Letter::Neg => continue,
            Letter::Pri(j) => {
                if ctx.is_losing(j) && mctx.is_none_or(|m| j <= m) {
                    nodes.insert(n);
                    states.insert((n, mctx));
                }
                let next = Some(mctx.map_or(j, |m| m.min(j)));
                for w in succ_of(v) {
                    if seen.insert((w, next)) {
                        queue.push_back((w, next));
                    }
                }
            }
            _ => {
                for w in succ_of(v) {
                    if seen.insert((w, mctx)) {
                        queue.push_back((w, mctx));
                    }
                }
            }
        }
    }
    Ok(ActiveSet { player: p, nodes, states })
}

/// Well-foundedness of the active-descent relation: no reachable cycle of
/// the strategy subgame stays above some losing priority `j` (avoiding swap
/// letters and priorities below `j`) while passing through `j` itself.
/// At switched positions the losing parity is the opponent's.
///
/// For well-formed, priority-guarded trees this holds exactly when the
/// strategy is winning.
pub fn check_gg_wellfounded(t: &RegularTree, strategy: &PositionalStrategy) -> Result<bool> {
    let ig = crate::games::induced_game(t)?;
    let (restricted, orig) = crate::games::restrict_to_strategy(&ig.game, strategy)?;
    let p = strategy.player;
    for bit in [false, true] {
        let local = if bit { p.opponent() } else { p };
        let ctx = SigCtx::new(t.index(), local);
        for &j in &ctx.losing {
            let keep: Vec<bool> = (0..restricted.len())
                .map(|v| {
                    let (n, b) = ig.node_of(orig[v]);
                    b == bit
                        && match t.label(n) {
                            Letter::Neg => false,
                            Letter::Pri(j2) => j2 >= j,
                            _ => true,
                        }
                })
                .collect();
            let bad = crate::games::subgraph_has_cycle_through(&restricted, &keep, |v| {
                let (n, _) = ig.node_of(orig[v]);
                t.label(n) == Letter::Pri(j)
            });
            if bad {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::signatures::root_signature;
    use crate::trees::parse_tree_spec;
    use crate::IndexPair;

    #[test]
    fn losing_tree_gives_infinity() {
        let idx = IndexPair::new(0, 2).unwrap();
        let t = fixtures::loop_tree(idx, 1);
        assert_eq!(oracle_signature(&t, Player::One).unwrap(), Signature::Inf);
    }

    #[test]
    fn fig4_oracle_matches_table() {
        let t = fixtures::fig4();
        let sig = oracle_signature(&t, Player::One).unwrap();
        assert_eq!(sig, Signature::Fin(vec![2, 1, 1]));
        assert_eq!(sig, root_signature(&t, Player::One).unwrap());
    }

    #[test]
    fn fig4_strategy_values_match_example() {
        let t = fixtures::fig4();
        let (ig, _) = solve_induced(&t).unwrap();
        let strats = enumerate_strategies(&t, &ig, Player::One, 16).unwrap();
        assert_eq!(strats.len(), 1, "player one has exactly one strategy");
        let (restricted, orig) =
            crate::games::restrict_to_strategy(&ig.game, &strats[0]).unwrap();
        assert!(!has_losing_cycle(&restricted, Player::One));
        let gv = global_values(&t, &ig, &restricted, &orig, Player::One);
        let at = |name: &str| -> Vec<Signature> {
            let node = t.node_by_name(name).unwrap();
            let mut out: Vec<Signature> = gv
                .values
                .iter()
                .filter(|((v, _), _)| ig.node_of(orig[*v]).0 == node)
                .map(|(_, sig)| sig.clone())
                .collect();
            out.dedup();
            out
        };
        let fin = |v: &[u64]| Signature::Fin(v.to_vec());
        // The middle- and lower-branch heads and the root match the worked
        // example; the upper-branch head u1 is active, so its path value
        // coincides with the canonical signature (1,1,0) of its subtree.
        assert_eq!(at("u1"), vec![fin(&[1, 1, 0])]);
        assert_eq!(at("u2"), vec![fin(&[2, 0, 0])]);
        assert_eq!(at("u3"), vec![fin(&[1, 2, 0])]);
        assert_eq!(at("w"), vec![fin(&[2, 0, 0])]);
        assert_eq!(at("t"), vec![fin(&[2, 1, 1])]);
        // And the value of u1's own child run: pri1 over a fully reset tail.
        assert_eq!(at("u1.6"), vec![fin(&[1, 0, 0])]);
    }

    #[test]
    fn fig4_active_set_matches_figure() {
        let t = fixtures::fig4();
        let strat = PositionalStrategy::new(Player::One);
        let act = active_set(&t, &strat, t.root()).unwrap();
        let mut got: Vec<&str> = act.nodes.iter().map(|&n| t.name(n)).collect();
        got.sort_unstable();
        // The circled nodes: root pri5, m3, the three branch heads, and the
        // losing-priority runs still unblocked below them.
        let mut expect = vec!["t", "m3", "u1", "u1.6", "u2.5", "u2.4", "u3", "u3.6", "u3.5"];
        expect.sort_unstable();
        assert_eq!(got, expect);
    }

    #[test]
    fn neg_subtree_has_empty_active_set() {
        let idx = IndexPair::new(0, 2).unwrap();
        let t = crate::trees::wrap_neg(&fixtures::loop_tree(idx, 1));
        let strat = PositionalStrategy::new(Player::One);
        let act = active_set(&t, &strat, t.root()).unwrap();
        assert!(act.nodes.is_empty());
    }

    #[test]
    fn gg_wellfounded_counterexample() {
        // Player one loops through priority 1 with no smaller reset.
        let out = parse_tree_spec("alphabet ang i=0 k=2 let a = pri1(b); let b = pri2(a); root a")
            .unwrap();
        let strat = PositionalStrategy::new(Player::One);
        assert!(!check_gg_wellfounded(&out.tree, &strat).unwrap());
        let idx = IndexPair::new(0, 2).unwrap();
        assert!(check_gg_wellfounded(&fixtures::loop_tree(idx, 0), &strat).unwrap());
    }
}
