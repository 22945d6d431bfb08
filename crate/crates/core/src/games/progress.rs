//! Small progress measures for min-parity games.
//!
//! The lifting solver is run twice, once per player (the second run on the
//! dual game), so the returned [`Solution`] carries a winning strategy for
//! each player on their region. Serves as the independent cross-check for
//! the Zielonka solver.

use super::{ParityGame, Player, Position, PositionalStrategy, Solution};
use std::collections::{BTreeMap, VecDeque};

/// A progress measure: `Top`, or one counter per odd priority of the game,
/// most significant first, each bounded by the number of positions carrying
/// that priority.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Measure {
    Fin(Vec<u64>),
    Top,
}

struct Spm<'a> {
    g: &'a ParityGame,
    /// Odd priorities present, ascending. Component order of the measures.
    odds: Vec<u32>,
    caps: Vec<u64>,
}

impl<'a> Spm<'a> {
    fn new(g: &'a ParityGame) -> Spm<'a> {
        let mut odds: Vec<u32> = g
            .positions()
            .map(|v| g.priority(v))
            .filter(|p| p % 2 == 1)
            .collect();
        odds.sort_unstable();
        odds.dedup();
        let caps = odds
            .iter()
            .map(|&o| g.positions().filter(|&v| g.priority(v) == o).count() as u64)
            .collect();
        Spm { g, odds, caps }
    }

    fn bottom(&self) -> Measure {
        Measure::Fin(vec![0; self.odds.len()])
    }

    /// Number of measure components relevant at priority `p` (odds <= p).
    fn width(&self, p: u32) -> usize {
        self.odds.partition_point(|&o| o <= p)
    }

    fn cmp_upto(&self, a: &Measure, b: &Measure, p: u32) -> std::cmp::Ordering {
        match (a, b) {
            (Measure::Top, Measure::Top) => std::cmp::Ordering::Equal,
            (Measure::Top, _) => std::cmp::Ordering::Greater,
            (_, Measure::Top) => std::cmp::Ordering::Less,
            (Measure::Fin(x), Measure::Fin(y)) => {
                let w = self.width(p);
                x[..w].cmp(&y[..w])
            }
        }
    }

    /// Least measure `m` with `m =_p rho(w)` (or `>_p` when `p` is odd).
    fn prog(&self, target: &Measure, p: u32) -> Measure {
        let Measure::Fin(t) = target else {
            return Measure::Top;
        };
        let w = self.width(p);
        let mut m = vec![0u64; self.odds.len()];
        m[..w].copy_from_slice(&t[..w]);
        if p % 2 == 1 {
            // Strictly increase within the first `w` components: bump the least
            // significant one, carrying leftwards past its cap.
            let mut i = w;
            loop {
                if i == 0 {
                    return Measure::Top;
                }
                i -= 1;
                if m[i] < self.caps[i] {
                    m[i] += 1;
                    for x in m.iter_mut().skip(i + 1) {
                        *x = 0;
                    }
                    break;
                }
                m[i] = 0;
            }
        }
        Measure::Fin(m)
    }

    fn lift(&self, rho: &[Measure], v: Position) -> (Measure, Option<Position>) {
        let p = self.g.priority(v);
        let mut best: Option<(Measure, Position)> = None;
        for &w in self.g.successors(v) {
            let cand = self.prog(&rho[w], p);
            let better = match &best {
                None => true,
                Some((b, _)) => {
                    let ord = self.cmp_full(&cand, b);
                    if self.g.owner(v) == Player::One {
                        ord == std::cmp::Ordering::Less
                    } else {
                        ord == std::cmp::Ordering::Greater
                    }
                }
            };
            if better {
                best = Some((cand, w));
            }
        }
        let (m, w) = best.expect("positions always have successors");
        (m, Some(w))
    }

    fn cmp_full(&self, a: &Measure, b: &Measure) -> std::cmp::Ordering {
        match (a, b) {
            (Measure::Top, Measure::Top) => std::cmp::Ordering::Equal,
            (Measure::Top, _) => std::cmp::Ordering::Greater,
            (_, Measure::Top) => std::cmp::Ordering::Less,
            (Measure::Fin(x), Measure::Fin(y)) => x.cmp(y),
        }
    }
}

/// Winning region and positional strategy of player 1 via lifting.
fn spm_even(g: &ParityGame) -> (Vec<bool>, BTreeMap<Position, Position>) {
    let spm = Spm::new(g);
    let mut rho: Vec<Measure> = (0..g.len()).map(|_| spm.bottom()).collect();
    let preds = g.predecessors();
    let mut queue: VecDeque<Position> = g.positions().collect();
    let mut queued = vec![true; g.len()];
    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        let (m, _) = spm.lift(&rho, v);
        if spm.cmp_full(&m, &rho[v]) == std::cmp::Ordering::Greater {
            rho[v] = m;
            for &u in &preds[v] {
                if !queued[u] {
                    queued[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    let win: Vec<bool> = rho.iter().map(|m| *m != Measure::Top).collect();
    let mut strategy = BTreeMap::new();
    for v in g.positions() {
        if win[v] && g.owner(v) == Player::One {
            let (_, w) = spm.lift(&rho, v);
            strategy.insert(v, w.unwrap());
        }
    }
    (win, strategy)
}

/// Dual game: owners swapped, priorities shifted by one.
fn dual(g: &ParityGame) -> ParityGame {
    ParityGame::new(
        g.positions().map(|v| g.owner(v).opponent()).collect(),
        g.positions().map(|v| g.priority(v) + 1).collect(),
        g.positions().map(|v| g.successors(v).to_vec()).collect(),
        g.initial(),
        g.positions().map(|v| g.label(v).to_string()).collect(),
    )
}

/// Solves `g` with Jurdzinski-style small progress measures.
///
/// The winner map is exact; strategies come from the two lifting runs.
pub fn solve_progress_measures(g: &ParityGame) -> Solution {
    let (win_one, moves_one) = spm_even(g);
    let (win_two, moves_two) = spm_even(&dual(g));
    debug_assert!(
        g.positions().all(|v| win_one[v] != win_two[v]),
        "progress measure runs must partition the positions"
    );
    let winner = g
        .positions()
        .map(|v| if win_one[v] { Player::One } else { Player::Two })
        .collect();
    Solution {
        winner,
        strategy_one: PositionalStrategy { player: Player::One, moves: moves_one },
        strategy_two: PositionalStrategy { player: Player::Two, moves: moves_two },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::check_strategy_winning;

    #[test]
    fn matches_zielonka_on_small_game() {
        let g = ParityGame::new(
            vec![Player::One, Player::Two, Player::One, Player::Two],
            vec![2, 1, 0, 3],
            vec![vec![1, 2], vec![0, 3], vec![2], vec![3, 1]],
            0,
            vec![],
        );
        let a = super::super::solve_zielonka(&g);
        let b = solve_progress_measures(&g);
        assert_eq!(a.winner, b.winner);
        assert!(check_strategy_winning(&g, &b.strategy_one).unwrap());
    }
}
