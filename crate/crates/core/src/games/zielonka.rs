//! Recursive Zielonka solver for min-parity games, with strategy extraction.

use super::{attractor, ParityGame, Player, Position, PositionalStrategy, Solution};
use std::collections::BTreeMap;

/// Exact winning regions and positional winning strategies for both players.
pub fn solve_zielonka(g: &ParityGame) -> Solution {
    let preds = g.predecessors();
    let mut region = vec![true; g.len()];
    let mut winner = vec![Player::One; g.len()];
    let mut moves: [BTreeMap<Position, Position>; 2] = [BTreeMap::new(), BTreeMap::new()];
    solve_rec(g, &preds, &mut region, &mut winner, &mut moves);
    let [one, two] = moves;
    Solution {
        winner,
        strategy_one: PositionalStrategy { player: Player::One, moves: one },
        strategy_two: PositionalStrategy { player: Player::Two, moves: two },
    }
}

fn idx(p: Player) -> usize {
    match p {
        Player::One => 0,
        Player::Two => 1,
    }
}

/// Solves the subgame induced by `region`, writing winners and strategy moves.
fn solve_rec(
    g: &ParityGame,
    preds: &[Vec<Position>],
    region: &mut [bool],
    winner: &mut [Player],
    moves: &mut [BTreeMap<Position, Position>; 2],
) {
    let Some(d) = g
        .positions()
        .filter(|&v| region[v])
        .map(|v| g.priority(v))
        .min()
    else {
        return;
    };
    let p = Player::of_parity(d);

    let d_set: Vec<Position> = g
        .positions()
        .filter(|&v| region[v] && g.priority(v) == d)
        .collect();
    let (attr, attr_moves) = attractor(g, region, preds, p, &d_set);

    // Solve the remainder.
    let mut rest: Vec<bool> = region.to_vec();
    for v in g.positions() {
        if attr[v] {
            rest[v] = false;
        }
    }
    solve_rec(g, preds, &mut rest, winner, moves);

    let opp_in_rest: Vec<Position> = g
        .positions()
        .filter(|&v| region[v] && !attr[v] && winner[v] == p.opponent())
        .collect();

    if opp_in_rest.is_empty() {
        // p wins the whole region: attractor moves on A, any in-region move on
        // p-owned d-positions; the recursion already handled the rest.
        for v in g.positions() {
            if region[v] && attr[v] {
                winner[v] = p;
            }
        }
        for (&v, &w) in &attr_moves {
            moves[idx(p)].insert(v, w);
        }
        for &v in &d_set {
            if g.owner(v) == p && !attr_moves.contains_key(&v) {
                let w = g
                    .successors(v)
                    .iter()
                    .copied()
                    .find(|&w| region[w])
                    .expect("region is closed: some successor stays inside");
                moves[idx(p)].insert(v, w);
            }
        }
    } else {
        // The opponent escapes: remove their attractor and re-solve.
        let q = p.opponent();
        let (b, b_moves) = attractor(g, region, preds, q, &opp_in_rest);
        for (&v, &w) in &b_moves {
            moves[idx(q)].insert(v, w);
        }
        for v in g.positions() {
            if region[v] && b[v] {
                winner[v] = q;
            }
        }
        let mut rest: Vec<bool> = region.to_vec();
        for v in g.positions() {
            if b[v] {
                rest[v] = false;
            }
        }
        solve_rec(g, preds, &mut rest, winner, moves);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::check_strategy_winning;

    #[test]
    fn two_position_game() {
        // v0 (One, pri 1) -> v1; v1 (Two, pri 0) -> v0. Min priority on the
        // unique cycle is 0, so One wins everywhere.
        let g = ParityGame::new(
            vec![Player::One, Player::Two],
            vec![1, 0],
            vec![vec![1], vec![0]],
            0,
            vec![],
        );
        let sol = solve_zielonka(&g);
        assert_eq!(sol.winner, vec![Player::One, Player::One]);
    }

    #[test]
    fn choice_between_loops() {
        // v0 (One) -> v1 (pri 1 loop) or v2 (pri 2 loop): One picks v2.
        let g = ParityGame::new(
            vec![Player::One, Player::One, Player::One],
            vec![5, 1, 2],
            vec![vec![1, 2], vec![1], vec![2]],
            0,
            vec![],
        );
        let sol = solve_zielonka(&g);
        assert_eq!(sol.winner_at(0), Player::One);
        assert_eq!(sol.winner_at(1), Player::Two);
        assert_eq!(sol.winner_at(2), Player::One);
        assert_eq!(sol.strategy_one.moves.get(&0), Some(&2));
        assert!(check_strategy_winning(&g, &sol.strategy_one).unwrap());
    }

    #[test]
    fn strategies_win_on_their_regions() {
        let g = ParityGame::new(
            vec![Player::One, Player::Two, Player::One, Player::Two],
            vec![2, 1, 0, 3],
            vec![vec![1, 2], vec![0, 3], vec![2], vec![3, 1]],
            0,
            vec![],
        );
        let sol = solve_zielonka(&g);
        for p in [Player::One, Player::Two] {
            let strat = sol.strategy(p);
            for v in sol.region(p) {
                let g2 = ParityGame::new(
                    (0..g.len()).map(|v| g.owner(v)).collect(),
                    (0..g.len()).map(|v| g.priority(v)).collect(),
                    (0..g.len()).map(|v| g.successors(v).to_vec()).collect(),
                    v,
                    vec![],
                );
                assert!(
                    check_strategy_winning(&g2, strat).unwrap(),
                    "player {p} strategy not winning from {v}"
                );
            }
        }
    }
}
