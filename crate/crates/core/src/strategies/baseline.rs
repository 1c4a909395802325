use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use super::{Decision, Strategy, StrategyError};
use crate::game::{GameState, PlayerRole};
use crate::solver::Solver;

/// Plays a vertex covering the most uncovered edges.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyMaxNew;

impl Strategy for GreedyMaxNew {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn decide(&mut self, state: &GameState<'_>) -> Result<Decision, StrategyError> {
        state
            .legal_moves()
            .into_iter()
            .max_by_key(|&v| (state.hits(v).len(), std::cmp::Reverse(v)))
            .map(Decision::plain)
            .ok_or(StrategyError::NoLegalMove)
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(*self)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Uniform choice among legal moves.
///
/// The generator is a PCG-64 stream seeded from the seed and the position,
/// so the same position and seed always give the same move.
#[derive(Debug, Clone, Copy)]
pub struct RandomStrategy {
    seed: u64,
}

impl RandomStrategy {
    pub fn new(seed: u64) -> Self {
        RandomStrategy { seed }
    }
}

impl Strategy for RandomStrategy {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn decide(&mut self, state: &GameState<'_>) -> Result<Decision, StrategyError> {
        let moves = state.legal_moves();
        if moves.is_empty() {
            return Err(StrategyError::NoLegalMove);
        }
        let position = state.covered().bits() << 1 | (state.to_move() == PlayerRole::Staller) as u64;
        let mut rng = Pcg64::seed_from_u64(splitmix64(self.seed) ^ splitmix64(position));
        Ok(Decision::plain(moves[rng.gen_range(0..moves.len())]))
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(*self)
    }
}

/// Optimal play from the exact solver, for either role.
#[derive(Debug, Clone)]
pub struct ExactStrategy {
    solver: Arc<Solver>,
}

impl ExactStrategy {
    pub fn new(solver: Arc<Solver>) -> Self {
        ExactStrategy { solver }
    }
}

impl Strategy for ExactStrategy {
    fn name(&self) -> String {
        "exact".into()
    }

    fn decide(&mut self, state: &GameState<'_>) -> Result<Decision, StrategyError> {
        if state.is_terminal() {
            return Err(StrategyError::NoLegalMove);
        }
        Ok(Decision::plain(self.solver.best_move(state)?))
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;

    #[test]
    fn greedy_on_c4() {
        let h = Hypergraph::new(4, [[0, 1], [1, 2], [2, 3], [3, 0]]).unwrap();
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        assert_eq!(GreedyMaxNew.choose(&s).unwrap(), 0);
    }

    #[test]
    fn random_is_reproducible() {
        let h = Hypergraph::new(8, [[0, 1, 2], [2, 3, 4], [4, 5, 6], [6, 7, 0]]).unwrap();
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        let a = RandomStrategy::new(7).choose(&s).unwrap();
        let b = RandomStrategy::new(7).choose(&s).unwrap();
        assert_eq!(a, b);
        assert!(s.is_legal(a));
        // different seeds eventually disagree somewhere
        let picks: std::collections::BTreeSet<_> =
            (0..32).map(|seed| RandomStrategy::new(seed).choose(&s).unwrap()).collect();
        assert!(picks.len() > 1);
    }

    #[test]
    fn no_move_on_terminal() {
        let h = Hypergraph::new(2, [[0, 1]]).unwrap();
        let s = GameState::with_covered(&h, h.all_edges(), PlayerRole::EdgeHitter);
        assert_eq!(GreedyMaxNew.choose(&s), Err(StrategyError::NoLegalMove));
        assert_eq!(RandomStrategy::new(1).choose(&s), Err(StrategyError::NoLegalMove));
    }
}
