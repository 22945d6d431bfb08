//! The game `G(t)` induced by a regular game tree.
//!
//! Positions are pairs `(node, switch bit)`. The bit flips on `neg` edges;
//! it decides effective ownership of choice nodes and shifts priorities of
//! `pri j` nodes to `j + bit`. Non-priority positions get the neutral
//! priority `k + 2`, above every meaningful one.

use super::{solve_zielonka, ParityGame, Player, Position, Solution};
use crate::trees::{is_well_formed, Alphabet, Letter, NodeId, RegularTree};
use crate::{Error, Result};

/// `G(t)` together with the mapping between tree nodes and game positions.
#[derive(Debug, Clone)]
pub struct InducedGame {
    pub game: ParityGame,
}

impl InducedGame {
    /// The game position for `(node, switch bit)`.
    pub fn position(&self, n: NodeId, switched: bool) -> Position {
        2 * n + usize::from(switched)
    }

    /// Inverse of [`InducedGame::position`].
    pub fn node_of(&self, v: Position) -> (NodeId, bool) {
        (v / 2, v % 2 == 1)
    }
}

/// Builds `G(t)` for a well-formed tree over `alp` or `ang`.
pub fn induced_game(t: &RegularTree) -> Result<InducedGame> {
    if t.alphabet() == Alphabet::AngPlus {
        return Err(Error::WrongAlphabet {
            expected: "alp or ang".into(),
            got: t.alphabet().to_string(),
        });
    }
    if !is_well_formed(t) {
        return Err(Error::NotWellFormed);
    }
    Ok(induced_game_unchecked(t))
}

pub(crate) fn induced_game_unchecked(t: &RegularTree) -> InducedGame {
    let k = t.index().k;
    let neutral = k + 2;
    let len = 2 * t.len();
    let mut owners = vec![Player::One; len];
    let mut priorities = vec![neutral; len];
    let mut successors = vec![Vec::new(); len];
    let mut labels = vec![String::new(); len];
    for n in t.nodes() {
        for bit in [false, true] {
            let v = 2 * n + usize::from(bit);
            labels[v] = format!("{}{}", t.name(n), if bit { "~" } else { "" });
            match t.label(n) {
                Letter::Pri(j) => {
                    priorities[v] = j + u32::from(bit);
                    successors[v] = vec![2 * t.children(n)[0] + usize::from(bit)];
                }
                Letter::Neg => {
                    successors[v] = vec![2 * t.children(n)[0] + usize::from(!bit)];
                }
                Letter::Choice(p) => {
                    owners[v] = if bit { p.opponent() } else { p };
                    successors[v] =
                        t.children(n).iter().map(|&c| 2 * c + usize::from(bit)).collect();
                }
                Letter::ChoicePlus(_) => unreachable!("alphabet checked above"),
            }
        }
    }
    let game = ParityGame::new(owners, priorities, successors, 2 * t.root(), labels);
    InducedGame { game }
}

/// True iff `p` has a winning strategy in `G(t)` from the root.
pub fn member_w(t: &RegularTree, p: Player) -> Result<bool> {
    member_w_from(t, t.root(), p)
}

/// True iff `p` wins `G(t |- n)`, i.e. the induced game restarted (kept) at
/// node `n`.
pub fn member_w_from(t: &RegularTree, n: NodeId, p: Player) -> Result<bool> {
    let ig = induced_game(t)?;
    let sol = solve_zielonka(&ig.game);
    Ok(sol.winner_at(ig.position(n, false)) == p)
}

/// Winner of `G(t |- n)` for every node at once (one solver run).
pub fn winners_by_node(t: &RegularTree) -> Result<Vec<Player>> {
    let ig = induced_game(t)?;
    let sol = solve_zielonka(&ig.game);
    Ok(t.nodes().map(|n| sol.winner_at(ig.position(n, false))).collect())
}

/// Solves the induced game and returns both the mapping and the solution.
pub fn solve_induced(t: &RegularTree) -> Result<(InducedGame, Solution)> {
    let ig = induced_game(t)?;
    let sol = solve_zielonka(&ig.game);
    Ok((ig, sol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::trees::wrap_neg;
    use crate::IndexPair;

    #[test]
    fn pri0_loop_won_by_one() {
        let idx = IndexPair::new(0, 2).unwrap();
        let t = fixtures::loop_tree(idx, 0);
        assert!(member_w(&t, Player::One).unwrap());
        assert!(!member_w(&t, Player::Two).unwrap());
    }

    #[test]
    fn neg_flips_the_winner() {
        let idx = IndexPair::new(0, 2).unwrap();
        let t = fixtures::loop_tree(idx, 1);
        // neg(pri1-loop): the loop runs at switch bit 1, priority 2, so
        // player one wins.
        let n = wrap_neg(&t);
        assert!(member_w(&n, Player::One).unwrap());
        assert!(!member_w(&t, Player::One).unwrap());
    }

    #[test]
    fn fig4_won_by_one() {
        let t = fixtures::fig4();
        assert!(member_w(&t, Player::One).unwrap());
    }

    #[test]
    fn fig7_won_by_one() {
        let f = fixtures::fig7();
        assert!(member_w(&f.t, Player::One).unwrap());
    }

    #[test]
    fn rejects_ill_formed() {
        let out = crate::trees::parse_tree_spec(
            "alphabet ang i=0 k=2 let a = neg(b); let b = pri2(a); root a",
        )
        .unwrap();
        assert!(matches!(member_w(&out.tree, Player::One), Err(Error::NotWellFormed)));
    }
}
