//! Exact solver, strategy engine and verification harness for the
//! transversal game on hypergraphs.
//!
//! Two players alternately pick vertices; every pick must hit at least one
//! edge not hit before, and the game ends once the picks form a transversal.
//! The Edge-hitter wants a short game, the Staller a long one. `τ_g` is the
//! optimal length when the Edge-hitter starts and `τ_g′` when the Staller
//! starts.

pub mod constructions;
pub mod game;
pub mod generators;
pub mod hypergraph;
pub mod io;
pub mod solver;
pub mod strategies;
pub mod verify;
pub mod weights;

pub use game::{GameError, GameState, Move, MoveLedger, PlayerRole, Transcript, TranscriptMove};
pub use hypergraph::{
    EdgeId, EdgeSet, Hypergraph, HypergraphError, ResidualView, StructureSummary, VertexId,
    MAX_EDGES,
};
pub use solver::{LimitExceeded, SolveError, SolveLimits, Solver};
pub use strategies::{Decision, Strategy, StrategyError};
pub use weights::{Color, Scheme, WeightError};
