//! Exact game values by memoized minimax over uncovered-edge bitmasks.
//!
//! A position is identified by its uncovered edge set and the player to
//! move; history never influences the remaining optimal game length. The
//! memo table is therefore a dense array indexed by `(uncovered << 1) | role`.

mod adversary;
mod transversal;

use std::sync::atomic::{AtomicU64, AtomicU8, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::game::{GameState, PlayerRole};
use crate::hypergraph::{EdgeSet, Hypergraph, VertexId};
use crate::strategies::StrategyError;

pub use adversary::{adversarial_length, worst_case_vs_strategy, AdversaryOutcome};
pub use transversal::{minimum_transversal, transversal_number};

pub const DEFAULT_MAX_EDGES: usize = 24;
/// Largest edge count a dense memo table is ever allocated for.
pub const HARD_MAX_EDGES: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveLimits {
    pub max_edges: usize,
    pub max_nodes: Option<u64>,
    pub time_budget: Option<Duration>,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits {
            max_edges: DEFAULT_MAX_EDGES,
            max_nodes: None,
            time_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitExceeded {
    #[error("{m} edges exceed the limit of {max}")]
    Edges { m: usize, max: usize },
    #[error("node budget of {max} exhausted")]
    Nodes { max: u64 },
    #[error("time budget of {budget:?} exhausted")]
    Time { budget: Duration },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("limit exceeded: {0}")]
    LimitExceeded(#[from] LimitExceeded),
    #[error("the position is terminal")]
    Terminal,
    #[error("strategy failed during search: {0}")]
    Strategy(Box<StrategyError>),
}

impl From<StrategyError> for SolveError {
    fn from(e: StrategyError) -> Self {
        SolveError::Strategy(Box::new(e))
    }
}

/// Dense table of optimal remaining move counts.
///
/// Slots hold `value + 1`, with `0` meaning unknown. Values are
/// deterministic, so concurrent writers always store the same byte.
pub struct MemoTable {
    slots: Vec<AtomicU8>,
}

impl MemoTable {
    pub fn new(m: usize) -> Self {
        let size = 1usize << (m + 1);
        MemoTable {
            slots: std::iter::repeat_with(|| AtomicU8::new(0)).take(size).collect(),
        }
    }

    fn index(uncovered: u64, role: PlayerRole) -> usize {
        ((uncovered as usize) << 1) | (role == PlayerRole::Staller) as usize
    }

    pub fn get(&self, uncovered: EdgeSet, role: PlayerRole) -> Option<u32> {
        self.get_raw(Self::index(uncovered.bits(), role))
    }

    fn get_raw(&self, idx: usize) -> Option<u32> {
        match self.slots[idx].load(Ordering::Relaxed) {
            0 => None,
            v => Some(v as u32 - 1),
        }
    }

    fn set_raw(&self, idx: usize, value: u32) {
        self.slots[idx].store(value as u8 + 1, Ordering::Relaxed);
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    /// Number of positions whose value is stored.
    pub fn len(&self) -> usize {
        self.slots
            .iter()
            .filter(|s| s.load(Ordering::Relaxed) != 0)
            .count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

struct Budget {
    nodes: AtomicU64,
    max_nodes: Option<u64>,
    deadline: Option<(Instant, Duration)>,
}

impl Budget {
    fn new(limits: &SolveLimits) -> Self {
        Budget {
            nodes: AtomicU64::new(0),
            max_nodes: limits.max_nodes,
            deadline: limits.time_budget.map(|d| (Instant::now() + d, d)),
        }
    }

    fn tick(&self) -> Result<(), LimitExceeded> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(max) = self.max_nodes {
            if n > max {
                return Err(LimitExceeded::Nodes { max });
            }
        }
        if let Some((deadline, budget)) = self.deadline {
            if n.is_multiple_of(4096) && Instant::now() > deadline {
                return Err(LimitExceeded::Time { budget });
            }
        }
        Ok(())
    }
}

/// Exact solver bound to one hypergraph. The memo persists across calls, so
/// every residual `H|S` of the same base shares one table.
pub struct Solver {
    n: usize,
    m: usize,
    incidence: Vec<u64>,
    limits: SolveLimits,
    prune_dominated: bool,
    parallel: bool,
    memo: MemoTable,
    nodes: AtomicU64,
}

impl Solver {
    pub fn new(hg: &Hypergraph, limits: SolveLimits) -> Result<Self, SolveError> {
        let max = limits.max_edges.min(HARD_MAX_EDGES);
        if hg.m() > max {
            return Err(LimitExceeded::Edges { m: hg.m(), max }.into());
        }
        Ok(Solver {
            n: hg.n(),
            m: hg.m(),
            incidence: hg.incidences().iter().map(|s| s.bits()).collect(),
            limits,
            prune_dominated: false,
            parallel: false,
            memo: MemoTable::new(hg.m()),
            nodes: AtomicU64::new(0),
        })
    }

    /// Skip moves dominated by another vertex's uncovered incidence: the
    /// Edge-hitter never needs a vertex whose hits are a strict subset of
    /// another's, the Staller never needs one whose hits are a strict
    /// superset. Vertices with identical hits are explored once.
    pub fn with_pruning(mut self, on: bool) -> Self {
        self.prune_dominated = on;
        self
    }

    /// Evaluate root moves on the rayon pool.
    pub fn with_parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    pub fn memo(&self) -> &MemoTable {
        &self.memo
    }

    /// Search nodes expanded over the solver's lifetime.
    pub fn nodes_expanded(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// Optimal number of remaining moves on `H|S` with `to_move` next.
    pub fn value(&self, uncovered: EdgeSet, to_move: PlayerRole) -> Result<u32, SolveError> {
        let unc = uncovered.bits() & EdgeSet::full(self.m).bits();
        let budget = Budget::new(&self.limits);
        let res = if self.parallel {
            self.search_root_parallel(&budget, unc, to_move)
        } else {
            self.search(&budget, unc, to_move)
        };
        self.nodes
            .fetch_add(budget.nodes.load(Ordering::Relaxed), Ordering::Relaxed);
        Ok(res?)
    }

    pub fn game_value(&self, state: &GameState<'_>) -> Result<u32, SolveError> {
        self.value(state.uncovered(), state.to_move())
    }

    /// τ_g: Edge-hitter starts on the full hypergraph.
    pub fn tau_g(&self) -> Result<u32, SolveError> {
        self.value(EdgeSet::full(self.m), PlayerRole::EdgeHitter)
    }

    /// τ_g′: Staller starts on the full hypergraph.
    pub fn tau_g_prime(&self) -> Result<u32, SolveError> {
        self.value(EdgeSet::full(self.m), PlayerRole::Staller)
    }

    /// A legal move achieving the minimax value; lowest vertex id on ties.
    pub fn best_move(&self, state: &GameState<'_>) -> Result<VertexId, SolveError> {
        if state.is_terminal() {
            return Err(SolveError::Terminal);
        }
        let role = state.to_move();
        let target = self.game_value(state)?;
        let unc = state.uncovered();
        for v in state.legal_moves() {
            let child = unc - state.hypergraph().incidence(v);
            if 1 + self.value(child, role.other())? == target {
                return Ok(v);
            }
        }
        unreachable!("some legal move attains the minimax value")
    }

    /// Values of every legal move, ascending by vertex.
    pub fn move_values(&self, state: &GameState<'_>) -> Result<Vec<(VertexId, u32)>, SolveError> {
        let unc = state.uncovered();
        state
            .legal_moves()
            .into_iter()
            .map(|v| {
                let child = unc - state.hypergraph().incidence(v);
                Ok((v, 1 + self.value(child, state.to_move().other())?))
            })
            .collect()
    }

    fn children(&self, unc: u64, role: PlayerRole) -> Vec<u64> {
        let hits: Vec<u64> = self
            .incidence
            .iter()
            .map(|inc| inc & unc)
            .filter(|&h| h != 0)
            .collect();
        if !self.prune_dominated {
            return hits.iter().map(|h| unc & !h).collect();
        }
        let mut out = Vec::with_capacity(hits.len());
        'outer: for (i, &h) in hits.iter().enumerate() {
            for (j, &g) in hits.iter().enumerate() {
                if i == j {
                    continue;
                }
                let skip = if h == g {
                    j < i
                } else {
                    match role {
                        // g strictly contains h
                        PlayerRole::EdgeHitter => h & !g == 0,
                        // g strictly inside h
                        PlayerRole::Staller => g & !h == 0,
                    }
                };
                if skip {
                    continue 'outer;
                }
            }
            out.push(unc & !h);
        }
        out
    }

    fn search(&self, budget: &Budget, unc: u64, role: PlayerRole) -> Result<u32, LimitExceeded> {
        if unc == 0 {
            return Ok(0);
        }
        let idx = MemoTable::index(unc, role);
        if let Some(v) = self.memo.get_raw(idx) {
            return Ok(v);
        }
        budget.tick()?;
        let remaining = unc.count_ones();
        let children = self.children(unc, role);
        let value = match role {
            PlayerRole::EdgeHitter => {
                let mut best = u32::MAX;
                for child in children {
                    let v = self.search(budget, child, PlayerRole::Staller)?;
                    best = best.min(v);
                    if best == 0 {
                        break;
                    }
                }
                best + 1
            }
            PlayerRole::Staller => {
                let mut best = 0;
                for child in children {
                    let v = self.search(budget, child, PlayerRole::EdgeHitter)?;
                    best = best.max(v);
                    if best + 1 == remaining {
                        break;
                    }
                }
                best + 1
            }
        };
        self.memo.set_raw(idx, value);
        Ok(value)
    }

    fn search_root_parallel(
        &self,
        budget: &Budget,
        unc: u64,
        role: PlayerRole,
    ) -> Result<u32, LimitExceeded> {
        if unc == 0 {
            return Ok(0);
        }
        let idx = MemoTable::index(unc, role);
        if let Some(v) = self.memo.get_raw(idx) {
            return Ok(v);
        }
        let values = self
            .children(unc, role)
            .into_par_iter()
            .map(|child| self.search(budget, child, role.other()))
            .collect::<Result<Vec<u32>, _>>()?;
        let best = match role {
            PlayerRole::EdgeHitter => values.into_iter().min(),
            PlayerRole::Staller => values.into_iter().max(),
        }
        .expect("non-terminal position has a legal move");
        self.memo.set_raw(idx, best + 1);
        Ok(best + 1)
    }
}

impl std::fmt::Debug for Solver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Solver")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("prune_dominated", &self.prune_dominated)
            .finish()
    }
}

/// τ_g(H) with a throwaway solver.
pub fn tau_g(hg: &Hypergraph, limits: &SolveLimits) -> Result<u32, SolveError> {
    Solver::new(hg, limits.clone())?.tau_g()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Hypergraph {
        Hypergraph::new(4, [[0, 1], [1, 2], [2, 3], [3, 0]]).unwrap()
    }

    fn h1() -> Hypergraph {
        Hypergraph::new(6, [&[0, 1, 2][..], &[3, 4, 5], &[0, 3], &[1, 4], &[2, 5]]).unwrap()
    }

    #[test]
    fn c4_value() {
        let s = Solver::new(&c4(), SolveLimits::default()).unwrap();
        assert_eq!(s.tau_g().unwrap(), 3);
    }

    #[test]
    fn h1_value() {
        let s = Solver::new(&h1(), SolveLimits::default()).unwrap();
        assert_eq!(s.tau_g().unwrap(), 4);
    }

    #[test]
    fn single_edge_value() {
        let h = Hypergraph::new(3, [[0, 1, 2]]).unwrap();
        let s = Solver::new(&h, SolveLimits::default()).unwrap();
        assert_eq!(s.tau_g().unwrap(), 1);
        assert_eq!(s.tau_g_prime().unwrap(), 1);
    }

    #[test]
    fn empty_hypergraph_value_is_zero() {
        let h = Hypergraph::empty(3);
        let s = Solver::new(&h, SolveLimits::default()).unwrap();
        assert_eq!(s.tau_g().unwrap(), 0);
        assert_eq!(s.tau_g_prime().unwrap(), 0);
    }

    #[test]
    fn best_move_tie_breaks_low() {
        let h = Hypergraph::new(3, [[0, 1, 2]]).unwrap();
        let s = Solver::new(&h, SolveLimits::default()).unwrap();
        let st = GameState::new(&h, PlayerRole::EdgeHitter);
        assert_eq!(s.best_move(&st).unwrap(), 0);

        let c = c4();
        let s = Solver::new(&c, SolveLimits::default()).unwrap();
        assert_eq!(s.best_move(&GameState::new(&c, PlayerRole::EdgeHitter)).unwrap(), 0);
        let last = GameState::with_covered(&c, [0, 1, 2].into_iter().collect(), PlayerRole::Staller);
        assert_eq!(s.best_move(&last).unwrap(), 0);
    }

    #[test]
    fn best_move_on_terminal_errors() {
        let c = c4();
        let s = Solver::new(&c, SolveLimits::default()).unwrap();
        let done = GameState::with_covered(&c, c.all_edges(), PlayerRole::EdgeHitter);
        assert_eq!(s.best_move(&done), Err(SolveError::Terminal));
    }

    #[test]
    fn edge_limit_is_enforced() {
        let limits = SolveLimits {
            max_edges: 3,
            ..SolveLimits::default()
        };
        assert!(matches!(
            Solver::new(&c4(), limits),
            Err(SolveError::LimitExceeded(LimitExceeded::Edges { m: 4, max: 3 }))
        ));
    }

    #[test]
    fn node_limit_is_enforced() {
        let limits = SolveLimits {
            max_nodes: Some(2),
            ..SolveLimits::default()
        };
        let s = Solver::new(&h1(), limits).unwrap();
        assert!(matches!(
            s.tau_g(),
            Err(SolveError::LimitExceeded(LimitExceeded::Nodes { max: 2 }))
        ));
    }

    #[test]
    fn pruned_and_parallel_agree() {
        let h = h1();
        let plain = Solver::new(&h, SolveLimits::default()).unwrap();
        let pruned = Solver::new(&h, SolveLimits::default()).unwrap().with_pruning(true);
        let par = Solver::new(&h, SolveLimits::default()).unwrap().with_parallel(true);
        for s in [&plain, &pruned, &par] {
            assert_eq!(s.tau_g().unwrap(), 4);
        }
        assert_eq!(plain.tau_g_prime().unwrap(), pruned.tau_g_prime().unwrap());
        assert_eq!(plain.tau_g_prime().unwrap(), par.tau_g_prime().unwrap());
    }

    #[test]
    fn memo_stays_within_state_space() {
        let h = h1();
        let s = Solver::new(&h, SolveLimits::default()).unwrap();
        s.tau_g().unwrap();
        assert!(s.memo().len() <= 1 << (h.m() + 1));
        assert!(!s.memo().is_empty());
    }
}
