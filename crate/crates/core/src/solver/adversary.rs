//! Exhaustive search against a fixed strategy.
//!
//! One side follows a given [`Strategy`]; the other plays optimally for
//! itself. The result is the game length under the free side's best reply,
//! plus one transcript that realizes it.

use std::collections::HashMap;

use super::{Budget, LimitExceeded, SolveError, SolveLimits, HARD_MAX_EDGES};
use crate::game::{GameState, PlayerRole, Transcript};
use crate::hypergraph::{Hypergraph, VertexId};
use crate::strategies::{Strategy, StrategyError};

#[derive(Debug, Clone)]
pub struct AdversaryOutcome {
    /// Game length when the free side plays optimally.
    pub length: u32,
    /// A game achieving `length`; the free side takes the lowest optimal
    /// vertex at each turn.
    pub witness: Transcript,
}

type Key = (u64, PlayerRole, Vec<VertexId>);

struct Search {
    fixed_role: PlayerRole,
    memo: HashMap<Key, u32>,
    budget: Budget,
}

impl Search {
    fn fixed_move<'h>(
        strategy: &mut dyn Strategy,
        state: &GameState<'h>,
    ) -> Result<(VertexId, Option<&'static str>), SolveError> {
        let d = strategy.decide(state)?;
        if !state.is_legal(d.vertex) {
            return Err(StrategyError::IllegalChoice {
                strategy: strategy.name(),
                vertex: d.vertex,
            }
            .into());
        }
        Ok((d.vertex, d.rule))
    }

    fn value(&mut self, state: &GameState<'_>, strategy: &dyn Strategy) -> Result<u32, SolveError> {
        if state.is_terminal() {
            return Ok(0);
        }
        let key = (state.uncovered().bits(), state.to_move(), strategy.memo_key(state));
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        self.budget.tick()?;
        let value = if state.to_move() == self.fixed_role {
            let mut s = strategy.boxed_clone();
            let (v, _) = Self::fixed_move(s.as_mut(), state)?;
            1 + self.value(&apply(state, v)?, s.as_ref())?
        } else {
            let maximize = self.fixed_role == PlayerRole::EdgeHitter;
            let remaining = state.uncovered().len() as u32;
            let mut best: Option<u32> = None;
            for v in state.legal_moves() {
                let child = 1 + self.value(&apply(state, v)?, strategy)?;
                best = Some(match best {
                    None => child,
                    Some(b) if maximize => b.max(child),
                    Some(b) => b.min(child),
                });
                if (maximize && child == remaining) || (!maximize && child == 1) {
                    break;
                }
            }
            best.expect("non-terminal position has a legal move")
        };
        self.memo.insert(key, value);
        Ok(value)
    }
}

fn apply<'h>(state: &GameState<'h>, v: VertexId) -> Result<GameState<'h>, SolveError> {
    state
        .apply_move(v)
        .map_err(|e| SolveError::from(StrategyError::from(e)))
}

/// Length of the game on `hg` when `fixed` plays `fixed_role` and the other
/// side replies optimally: maximizing if it is the Staller, minimizing if it
/// is the Edge-hitter.
pub fn adversarial_length(
    hg: &Hypergraph,
    fixed: &dyn Strategy,
    fixed_role: PlayerRole,
    first: PlayerRole,
    limits: &SolveLimits,
) -> Result<AdversaryOutcome, SolveError> {
    let max = limits.max_edges.min(HARD_MAX_EDGES);
    if hg.m() > max {
        return Err(LimitExceeded::Edges { m: hg.m(), max }.into());
    }
    let mut search = Search {
        fixed_role,
        memo: HashMap::new(),
        budget: Budget::new(limits),
    };
    let mut state = GameState::new(hg, first);
    let length = search.value(&state, fixed)?;

    // replay along an optimal line
    let mut strategy = fixed.boxed_clone();
    let mut rules = Vec::new();
    while !state.is_terminal() {
        if state.to_move() == fixed_role {
            let (v, rule) = Search::fixed_move(strategy.as_mut(), &state)?;
            state = apply(&state, v)?;
            rules.push(rule);
        } else {
            let target = search.value(&state, strategy.as_ref())?;
            let mut chosen = None;
            for v in state.legal_moves() {
                let child = apply(&state, v)?;
                if 1 + search.value(&child, strategy.as_ref())? == target {
                    chosen = Some(child);
                    break;
                }
            }
            state = chosen.expect("some reply attains the value");
            rules.push(None);
        }
    }
    let mut witness = Transcript::from_state(&state);
    for (mv, rule) in witness.moves.iter_mut().zip(rules) {
        mv.rule = rule.map(str::to_string);
    }
    debug_assert_eq!(witness.length as u32, length);
    Ok(AdversaryOutcome { length, witness })
}

/// Longest game a Staller can force against the Edge-hitter strategy `eh`.
pub fn worst_case_vs_strategy(
    hg: &Hypergraph,
    eh: &dyn Strategy,
    first: PlayerRole,
    limits: &SolveLimits,
) -> Result<AdversaryOutcome, SolveError> {
    adversarial_length(hg, eh, PlayerRole::EdgeHitter, first, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Solver;
    use crate::strategies::{ExactStrategy, GreedyMaxNew};
    use std::sync::Arc;

    fn h1() -> Hypergraph {
        Hypergraph::new(6, [&[0, 1, 2][..], &[3, 4, 5], &[0, 3], &[1, 4], &[2, 5]]).unwrap()
    }

    #[test]
    fn exact_edge_hitter_matches_game_value() {
        let h = h1();
        let solver = Arc::new(Solver::new(&h, SolveLimits::default()).unwrap());
        let eh = ExactStrategy::new(solver.clone());
        for first in [PlayerRole::EdgeHitter, PlayerRole::Staller] {
            let out = worst_case_vs_strategy(&h, &eh, first, &SolveLimits::default()).unwrap();
            let expected = match first {
                PlayerRole::EdgeHitter => solver.tau_g().unwrap(),
                PlayerRole::Staller => solver.tau_g_prime().unwrap(),
            };
            assert_eq!(out.length, expected);
            assert_eq!(out.witness.length as u32, expected);
        }
    }

    #[test]
    fn fixed_staller_is_bounded_by_value() {
        let h = h1();
        let solver = Solver::new(&h, SolveLimits::default()).unwrap();
        let out = adversarial_length(
            &h,
            &GreedyMaxNew,
            PlayerRole::Staller,
            PlayerRole::EdgeHitter,
            &SolveLimits::default(),
        )
        .unwrap();
        assert!(out.length <= solver.tau_g().unwrap());
        assert!(out.witness.complete);
    }

    #[test]
    fn greedy_edge_hitter_is_no_better_than_optimal() {
        let h = Hypergraph::new(4, [[0, 1], [1, 2], [2, 3], [3, 0]]).unwrap();
        let out =
            worst_case_vs_strategy(&h, &GreedyMaxNew, PlayerRole::EdgeHitter, &SolveLimits::default())
                .unwrap();
        assert!(out.length >= 3);
    }
}
