//! Min-parity games with explicit positions, two exact solvers, and the
//! game `G(t)` induced by a regular game tree.
//!
//! The winning condition throughout is *min-parity*: an infinite play is won
//! by player 1 iff the minimal priority occurring infinitely often is even.

mod induced;
mod progress;
mod zielonka;

pub use induced::{
    induced_game, member_w, member_w_from, solve_induced, winners_by_node, InducedGame,
};
pub use progress::solve_progress_measures;
pub use zielonka::solve_zielonka;

use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// One of the two players. Player 1 wins even min-parity, player 2 odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    /// The player winning an infinite play whose minimal recurring priority is `p`.
    pub fn of_parity(p: u32) -> Player {
        if p % 2 == 0 {
            Player::One
        } else {
            Player::Two
        }
    }

    /// True iff a play with minimal recurring priority `p` is won by `self`.
    pub fn wins_parity(self, p: u32) -> bool {
        Player::of_parity(p) == self
    }

    pub fn from_number(n: u32) -> Result<Player> {
        match n {
            1 => Ok(Player::One),
            2 => Ok(Player::Two),
            _ => Err(Error::Domain(format!("no player `{n}`; players are 1 and 2"))),
        }
    }

    /// The player as the numeral used in priority arithmetic.
    pub fn numeral(self) -> u32 {
        match self {
            Player::One => 1,
            Player::Two => 2,
        }
    }
}

impl std::fmt::Display for Player {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.numeral())
    }
}

/// Index of a position inside a [`ParityGame`].
pub type Position = usize;

/// A finite min-parity game. Every position has at least one successor.
#[derive(Debug, Clone)]
pub struct ParityGame {
    owners: Vec<Player>,
    priorities: Vec<u32>,
    successors: Vec<Vec<Position>>,
    initial: Position,
    labels: Vec<String>,
}

impl ParityGame {
    pub fn new(
        owners: Vec<Player>,
        priorities: Vec<u32>,
        successors: Vec<Vec<Position>>,
        initial: Position,
        labels: Vec<String>,
    ) -> ParityGame {
        assert_eq!(owners.len(), priorities.len());
        assert_eq!(owners.len(), successors.len());
        assert!(initial < owners.len(), "initial position out of range");
        assert!(
            successors.iter().all(|s| !s.is_empty()),
            "every position needs a successor"
        );
        let labels = if labels.is_empty() {
            (0..owners.len()).map(|i| format!("v{i}")).collect()
        } else {
            labels
        };
        ParityGame { owners, priorities, successors, initial, labels }
    }

    pub fn len(&self) -> usize {
        self.owners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owners.is_empty()
    }

    pub fn owner(&self, v: Position) -> Player {
        self.owners[v]
    }

    pub fn priority(&self, v: Position) -> u32 {
        self.priorities[v]
    }

    pub fn successors(&self, v: Position) -> &[Position] {
        &self.successors[v]
    }

    pub fn initial(&self) -> Position {
        self.initial
    }

    pub fn label(&self, v: Position) -> &str {
        &self.labels[v]
    }

    pub fn positions(&self) -> impl Iterator<Item = Position> {
        0..self.len()
    }

    pub fn predecessors(&self) -> Vec<Vec<Position>> {
        let mut preds = vec![Vec::new(); self.len()];
        for v in self.positions() {
            for &w in self.successors(v) {
                preds[w].push(v);
            }
        }
        preds
    }

    /// Positions reachable from the initial one.
    pub fn reachable(&self) -> Vec<Position> {
        self.reachable_from(self.initial)
    }

    pub fn reachable_from(&self, start: Position) -> Vec<Position> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut out = Vec::new();
        while let Some(v) = stack.pop() {
            out.push(v);
            for &w in self.successors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Serializable dump of the game (owner, priority, successor list per position).
    pub fn dump(&self) -> GameDump {
        GameDump {
            initial: self.initial,
            positions: self
                .positions()
                .map(|v| PositionDump {
                    id: v,
                    label: self.labels[v].clone(),
                    owner: self.owners[v].numeral(),
                    priority: self.priorities[v],
                    successors: self.successors[v].clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GameDump {
    pub initial: Position,
    pub positions: Vec<PositionDump>,
}

#[derive(Debug, Serialize)]
pub struct PositionDump {
    pub id: Position,
    pub label: String,
    pub owner: u32,
    pub priority: u32,
    pub successors: Vec<Position>,
}

/// A positional strategy: one chosen successor per position owned by `player`.
#[derive(Debug, Clone)]
pub struct PositionalStrategy {
    pub player: Player,
    pub moves: BTreeMap<Position, Position>,
}

impl PositionalStrategy {
    pub fn new(player: Player) -> PositionalStrategy {
        PositionalStrategy { player, moves: BTreeMap::new() }
    }

    /// Checks that every chosen move is an actual edge of `g`.
    pub fn validate(&self, g: &ParityGame) -> Result<()> {
        for (&v, &w) in &self.moves {
            if !g.successors(v).contains(&w) {
                return Err(Error::DanglingMove { from: v, target: w });
            }
        }
        Ok(())
    }
}

/// Winner per position plus positional strategies on the respective regions.
#[derive(Debug, Clone)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub strategy_one: PositionalStrategy,
    pub strategy_two: PositionalStrategy,
}

impl Solution {
    pub fn winner_at(&self, v: Position) -> Player {
        self.winner[v]
    }

    pub fn strategy(&self, p: Player) -> &PositionalStrategy {
        match p {
            Player::One => &self.strategy_one,
            Player::Two => &self.strategy_two,
        }
    }

    pub fn region(&self, p: Player) -> Vec<Position> {
        self.winner
            .iter()
            .enumerate()
            .filter(|(_, &w)| w == p)
            .map(|(v, _)| v)
            .collect()
    }
}

/// `target`-attractor for `player` inside `region`; also records the
/// attracting player's move choices.
pub(crate) fn attractor(
    g: &ParityGame,
    region: &[bool],
    preds: &[Vec<Position>],
    player: Player,
    target: &[Position],
) -> (Vec<bool>, BTreeMap<Position, Position>) {
    let mut in_attr = vec![false; g.len()];
    let mut moves = BTreeMap::new();
    let mut queue: Vec<Position> = Vec::new();
    // Count, for opponent positions, how many successors within the region
    // still avoid the attractor.
    let mut escape = vec![0usize; g.len()];
    for v in g.positions() {
        if region[v] {
            escape[v] = g.successors(v).iter().filter(|&&w| region[w]).count();
        }
    }
    for &v in target {
        if region[v] && !in_attr[v] {
            in_attr[v] = true;
            queue.push(v);
        }
    }
    while let Some(v) = queue.pop() {
        for &u in &preds[v] {
            if !region[u] || in_attr[u] {
                continue;
            }
            if g.owner(u) == player {
                in_attr[u] = true;
                moves.insert(u, v);
                queue.push(u);
            } else {
                escape[u] -= 1;
                if escape[u] == 0 {
                    in_attr[u] = true;
                    queue.push(u);
                }
            }
        }
    }
    (in_attr, moves)
}

/// The subgame where `strategy`'s owner is restricted to the chosen edge;
/// positions unreachable from the initial one are removed.
///
/// Returns the restricted game together with the original index of each of
/// its positions.
pub fn restrict_to_strategy(
    g: &ParityGame,
    strategy: &PositionalStrategy,
) -> Result<(ParityGame, Vec<Position>)> {
    strategy.validate(g)?;
    let succ_of = |v: Position| -> Vec<Position> {
        if g.owner(v) == strategy.player {
            match strategy.moves.get(&v) {
                Some(&w) => vec![w],
                // A position the strategy leaves open keeps all edges.
                None => g.successors(v).to_vec(),
            }
        } else {
            g.successors(v).to_vec()
        }
    };
    // Reachability under restricted edges.
    let mut seen = vec![false; g.len()];
    let mut stack = vec![g.initial()];
    seen[g.initial()] = true;
    while let Some(v) = stack.pop() {
        for w in succ_of(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    let kept: Vec<Position> = g.positions().filter(|&v| seen[v]).collect();
    let mut new_id = vec![usize::MAX; g.len()];
    for (i, &v) in kept.iter().enumerate() {
        new_id[v] = i;
    }
    let game = ParityGame::new(
        kept.iter().map(|&v| g.owner(v)).collect(),
        kept.iter().map(|&v| g.priority(v)).collect(),
        kept.iter()
            .map(|&v| succ_of(v).into_iter().map(|w| new_id[w]).collect())
            .collect(),
        new_id[g.initial()],
        kept.iter().map(|&v| g.label(v).to_string()).collect(),
    );
    Ok((game, kept))
}

/// True iff no cycle reachable in `restrict_to_strategy(g, strategy)` has a
/// minimal priority losing for the strategy's owner.
pub fn check_strategy_winning(g: &ParityGame, strategy: &PositionalStrategy) -> Result<bool> {
    let (sub, _) = restrict_to_strategy(g, strategy)?;
    Ok(!has_losing_cycle(&sub, strategy.player))
}

/// True iff `g` (all of it) contains a cycle whose minimal priority is losing
/// for `player`.
pub(crate) fn has_losing_cycle(g: &ParityGame, player: Player) -> bool {
    let mut prios: Vec<u32> = g.positions().map(|v| g.priority(v)).collect();
    prios.sort_unstable();
    prios.dedup();
    for &d in &prios {
        if Player::of_parity(d) == player {
            continue;
        }
        // Cycle avoiding priorities < d and passing through a d-position.
        let keep: Vec<bool> = g.positions().map(|v| g.priority(v) >= d).collect();
        if subgraph_has_cycle_through(g, &keep, |v| g.priority(v) == d) {
            return true;
        }
    }
    false
}

/// Does the subgraph selected by `keep` contain a cycle through a position
/// satisfying `mark`? Decided via strongly connected components.
pub(crate) fn subgraph_has_cycle_through(
    g: &ParityGame,
    keep: &[bool],
    mark: impl Fn(Position) -> bool,
) -> bool {
    let sccs = sccs_of(g.len(), keep, |v| g.successors(v).iter().copied());
    for scc in sccs {
        let cyclic = scc.len() > 1
            || g.successors(scc[0]).contains(&scc[0]);
        if cyclic && scc.iter().any(|&v| mark(v)) {
            return true;
        }
    }
    false
}

/// Tarjan SCCs over an arbitrary successor function, restricted to `keep`.
pub(crate) fn sccs_of<I>(
    n: usize,
    keep: &[bool],
    succ: impl Fn(usize) -> I,
) -> Vec<Vec<usize>>
where
    I: Iterator<Item = usize>,
{
    // Iterative Tarjan.
    #[derive(Clone, Copy)]
    struct Frame {
        v: usize,
        child: usize,
    }
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut out = Vec::new();
    let succs: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            if keep[v] {
                succ(v).filter(|&w| keep[w]).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    for root in 0..n {
        if !keep[root] || index[root] != usize::MAX {
            continue;
        }
        let mut call = vec![Frame { v: root, child: 0 }];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(frame) = call.last_mut() {
            let v = frame.v;
            if frame.child < succs[v].len() {
                let w = succs[v][frame.child];
                frame.child += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push(Frame { v: w, child: 0 });
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    out.push(comp);
                }
                let done = *frame;
                call.pop();
                if let Some(parent) = call.last() {
                    low[parent.v] = low[parent.v].min(low[done.v]);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_game(priority: u32) -> ParityGame {
        ParityGame::new(vec![Player::One], vec![priority], vec![vec![0]], 0, vec![])
    }

    #[test]
    fn opponent_involution() {
        assert_eq!(Player::One.opponent().opponent(), Player::One);
        assert_eq!(Player::Two.opponent().opponent(), Player::Two);
    }

    #[test]
    fn even_self_loop_won_by_one() {
        let g = loop_game(0);
        let sol = solve_zielonka(&g);
        assert_eq!(sol.winner_at(0), Player::One);
        let sol = solve_progress_measures(&g);
        assert_eq!(sol.winner_at(0), Player::One);
    }

    #[test]
    fn odd_self_loop_won_by_two() {
        let g = loop_game(1);
        let sol = solve_zielonka(&g);
        assert_eq!(sol.winner_at(0), Player::Two);
        let sol = solve_progress_measures(&g);
        assert_eq!(sol.winner_at(0), Player::Two);
    }

    #[test]
    fn single_loop_strategy_matches_parity() {
        let g = loop_game(2);
        let strat = PositionalStrategy {
            player: Player::One,
            moves: [(0, 0)].into_iter().collect(),
        };
        assert!(check_strategy_winning(&g, &strat).unwrap());
        let strat = PositionalStrategy {
            player: Player::Two,
            moves: BTreeMap::new(),
        };
        assert!(!check_strategy_winning(&g, &strat).unwrap());
    }

    #[test]
    fn restrict_removes_unreachable() {
        // 0 -> {1, 2}, both loops; owner One picks 1.
        let g = ParityGame::new(
            vec![Player::One, Player::One, Player::One],
            vec![0, 0, 1],
            vec![vec![1, 2], vec![1], vec![2]],
            0,
            vec![],
        );
        let strat = PositionalStrategy {
            player: Player::One,
            moves: [(0, 1), (1, 1), (2, 2)].into_iter().collect(),
        };
        let (sub, orig) = restrict_to_strategy(&g, &strat).unwrap();
        assert_eq!(sub.len(), 2);
        assert_eq!(orig, vec![0, 1]);
    }

    #[test]
    fn dangling_move_rejected() {
        let g = loop_game(0);
        let strat = PositionalStrategy {
            player: Player::One,
            moves: [(0, 5)].into_iter().collect(),
        };
        assert!(matches!(
            restrict_to_strategy(&g, &strat),
            Err(Error::DanglingMove { .. })
        ));
    }
}
