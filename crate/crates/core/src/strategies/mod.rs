//! Move-selection policies and the match runner.

mod baseline;
mod corona;
mod hierarchy;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::game::{GameError, GameState, MoveLedger, PlayerRole, Transcript};
use crate::hypergraph::{Hypergraph, VertexId};
use crate::solver::{SolveError, SolveLimits, Solver};
use crate::weights::{state_weight, Scheme, WeightError};

pub use baseline::{ExactStrategy, GreedyMaxNew, RandomStrategy};
pub use corona::{CoronaLabels, EdgeLabel, LabelError, StallerCorona};
pub use hierarchy::{EdgeHitter3, EdgeHitter4};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StrategyError {
    #[error("{strategy} needs a {expected}-uniform residual")]
    NotUniform { strategy: String, expected: usize },
    #[error("no legal move: the game is over")]
    NoLegalMove,
    #[error("{strategy} chose vertex {vertex}, which is not a legal move")]
    IllegalChoice { strategy: String, vertex: VertexId },
    #[error("unknown strategy {0:?} (expected exact, greedy, random:SEED, eh3, eh4 or corona)")]
    UnknownStrategy(String),
    #[error("the corona strategy needs corona edge labels")]
    MissingLabels,
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// A chosen move, with the rule that produced it when the policy has rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub vertex: VertexId,
    pub rule: Option<&'static str>,
}

impl Decision {
    pub fn plain(vertex: VertexId) -> Self {
        Decision { vertex, rule: None }
    }

    pub fn by(vertex: VertexId, rule: &'static str) -> Self {
        Decision {
            vertex,
            rule: Some(rule),
        }
    }
}

/// A deterministic move-selection policy.
///
/// Policies may carry state between calls (a component the Edge-hitter has
/// committed to, for instance). Exhaustive searches clone the policy at
/// every branch and fold [`Strategy::memo_key`] into their memo keys.
pub trait Strategy: Send + Sync {
    fn name(&self) -> String;

    fn decide(&mut self, state: &GameState<'_>) -> Result<Decision, StrategyError>;

    fn boxed_clone(&self) -> Box<dyn Strategy>;

    /// Internal state that can influence future choices from `state`.
    fn memo_key(&self, _state: &GameState<'_>) -> Vec<VertexId> {
        Vec::new()
    }

    fn choose(&mut self, state: &GameState<'_>) -> Result<VertexId, StrategyError> {
        self.decide(state).map(|d| d.vertex)
    }
}

impl fmt::Debug for dyn Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Strategy({})", self.name())
    }
}

/// Everything a strategy might need to be built by name.
pub struct StrategyContext<'a> {
    pub hypergraph: &'a Hypergraph,
    pub labels: Option<&'a CoronaLabels>,
    pub limits: SolveLimits,
}

/// Builds a strategy from its CLI name: `exact`, `greedy`, `random:SEED`,
/// `eh3`, `eh4` or `corona`.
pub fn strategy_from_name(
    name: &str,
    ctx: &StrategyContext<'_>,
) -> Result<Box<dyn Strategy>, StrategyError> {
    let name = name.trim();
    match name {
        "exact" => {
            let solver = Solver::new(ctx.hypergraph, ctx.limits.clone())?;
            Ok(Box::new(ExactStrategy::new(Arc::new(solver))))
        }
        "greedy" => Ok(Box::new(GreedyMaxNew)),
        "eh3" => Ok(Box::new(EdgeHitter3::new())),
        "eh4" => Ok(Box::new(EdgeHitter4::new())),
        "corona" => {
            let labels = ctx.labels.ok_or(StrategyError::MissingLabels)?;
            Ok(Box::new(StallerCorona::new(labels.clone())))
        }
        _ => match name.strip_prefix("random:").map(str::parse::<u64>) {
            Some(Ok(seed)) => Ok(Box::new(RandomStrategy::new(seed))),
            _ => Err(StrategyError::UnknownStrategy(name.to_string())),
        },
    }
}

fn decide_checked(
    strategy: &mut dyn Strategy,
    state: &GameState<'_>,
) -> Result<Decision, StrategyError> {
    let d = strategy.decide(state)?;
    if !state.is_legal(d.vertex) {
        return Err(StrategyError::IllegalChoice {
            strategy: strategy.name(),
            vertex: d.vertex,
        });
    }
    Ok(d)
}

/// Plays `eh` against `st` from `state` to the end.
///
/// With a scheme attached, each move's weight decrease is recorded in the
/// transcript and its ledger.
pub fn play_from(
    mut state: GameState<'_>,
    eh: &mut dyn Strategy,
    st: &mut dyn Strategy,
    scheme: Option<Scheme>,
) -> Result<Transcript, StrategyError> {
    let mut ledger = match scheme {
        Some(s) => Some(MoveLedger::new(s.name(), state_weight(&state, s)?)),
        None => None,
    };
    let mut decreases = Vec::new();
    let mut rules = Vec::new();
    while !state.is_terminal() {
        let d = match state.to_move() {
            PlayerRole::EdgeHitter => decide_checked(eh, &state)?,
            PlayerRole::Staller => decide_checked(st, &state)?,
        };
        let before = scheme.map(|s| state_weight(&state, s)).transpose()?;
        state.play(d.vertex)?;
        if let (Some(s), Some(before), Some(ledger)) = (scheme, before, ledger.as_mut()) {
            let after = state_weight(&state, s)?;
            let dec = before
                .checked_sub(after)
                .expect("weights never increase along a game");
            ledger.record(dec);
            decreases.push(Some(dec));
        } else {
            decreases.push(None);
        }
        rules.push(d.rule);
    }
    let mut t = Transcript::from_state(&state);
    for ((mv, dec), rule) in t.moves.iter_mut().zip(decreases).zip(rules) {
        mv.weight_decrease = dec;
        mv.rule = rule.map(str::to_string);
    }
    t.ledger = ledger;
    Ok(t)
}

/// Plays a full game on `hg` with `first` to move.
pub fn play_match(
    hg: &Hypergraph,
    eh: &mut dyn Strategy,
    st: &mut dyn Strategy,
    first: PlayerRole,
    scheme: Option<Scheme>,
) -> Result<Transcript, StrategyError> {
    play_from(GameState::new(hg, first), eh, st, scheme)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1() -> Hypergraph {
        Hypergraph::new(6, [&[0, 1, 2][..], &[3, 4, 5], &[0, 3], &[1, 4], &[2, 5]]).unwrap()
    }

    fn ctx(hg: &Hypergraph) -> StrategyContext<'_> {
        StrategyContext {
            hypergraph: hg,
            labels: None,
            limits: SolveLimits::default(),
        }
    }

    #[test]
    fn names_resolve() {
        let h = h1();
        for name in ["exact", "greedy", "random:7", "eh3", "eh4"] {
            strategy_from_name(name, &ctx(&h)).unwrap();
        }
        assert_eq!(
            strategy_from_name("corona", &ctx(&h)).unwrap_err(),
            StrategyError::MissingLabels
        );
        assert!(matches!(
            strategy_from_name("random:x", &ctx(&h)),
            Err(StrategyError::UnknownStrategy(_))
        ));
        assert!(matches!(
            strategy_from_name("minimax", &ctx(&h)),
            Err(StrategyError::UnknownStrategy(_))
        ));
    }

    #[test]
    fn exact_vs_exact_on_h1() {
        let h = h1();
        let mut eh = strategy_from_name("exact", &ctx(&h)).unwrap();
        let mut st = strategy_from_name("exact", &ctx(&h)).unwrap();
        let t = play_match(&h, eh.as_mut(), st.as_mut(), PlayerRole::EdgeHitter, None).unwrap();
        assert_eq!(t.length, 4);
        assert!(t.complete);
    }

    #[test]
    fn single_edge_ledger() {
        let h = Hypergraph::new(3, [[0, 1, 2]]).unwrap();
        let t = play_match(
            &h,
            &mut GreedyMaxNew,
            &mut GreedyMaxNew,
            PlayerRole::EdgeHitter,
            Some(Scheme::Three),
        )
        .unwrap();
        assert_eq!(t.length, 1);
        let ledger = t.ledger.unwrap();
        assert_eq!(ledger.decreases, vec![48]);
        assert_eq!(ledger.initial_weight, 48);
        assert_eq!(t.moves[0].weight_decrease, Some(48));
    }

    #[test]
    fn scheme_on_wrong_uniformity_errors() {
        let h = h1();
        let err = play_match(
            &h,
            &mut GreedyMaxNew,
            &mut GreedyMaxNew,
            PlayerRole::EdgeHitter,
            Some(Scheme::Three),
        )
        .unwrap_err();
        assert!(matches!(err, StrategyError::Weight(WeightError::NotUniform { expected: 3 })));
    }
}
