use std::io;

use thiserror::Error;

use tgame_core::constructions::ConstructionError;
use tgame_core::generators::GenError;
use tgame_core::io::FormatError;
use tgame_core::verify::VerifyError;
use tgame_core::{GameError, SolveError, StrategyError, WeightError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_LIMIT: u8 = 3;
pub const EXIT_VIOLATION: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0} bound violation(s) found")]
    Violations(usize),
    #[error("game aborted after {moves} move(s)")]
    Aborted { moves: usize },
}

// Weight and game errors only arise from engine moves, so they travel as
// strategy errors.
impl From<WeightError> for CliError {
    fn from(e: WeightError) -> Self {
        CliError::Strategy(e.into())
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        CliError::Strategy(e.into())
    }
}

fn solve_code(e: &SolveError) -> u8 {
    match e {
        SolveError::LimitExceeded(_) => EXIT_LIMIT,
        SolveError::Strategy(s) => strategy_code(s),
        SolveError::Terminal => EXIT_FAILURE,
    }
}

fn strategy_code(e: &StrategyError) -> u8 {
    match e {
        StrategyError::Solve(s) => solve_code(s),
        StrategyError::UnknownStrategy(_) | StrategyError::MissingLabels | StrategyError::NotUniform { .. } => {
            EXIT_PARSE
        }
        _ => EXIT_FAILURE,
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Format { .. } | CliError::Construction(_) | CliError::Config(_) | CliError::Usage(_) => EXIT_PARSE,
            CliError::Solve(e) => solve_code(e),
            CliError::Strategy(e) => strategy_code(e),
            CliError::Verify(e) => match e {
                VerifyError::Solve(s) => solve_code(s),
                VerifyError::UnknownCheck(_) | VerifyError::HypothesisViolated { .. } | VerifyError::Construction(_) => {
                    EXIT_PARSE
                }
                _ => EXIT_FAILURE,
            },
            CliError::Gen(GenError::LimitExceeded { .. }) => EXIT_LIMIT,
            CliError::Gen(GenError::Unsatisfiable(_)) => EXIT_FAILURE,
            CliError::Gen(GenError::Hypergraph(_)) => EXIT_PARSE,
            CliError::Violations(_) => EXIT_VIOLATION,
            CliError::Io(_) | CliError::Aborted { .. } => EXIT_FAILURE,
        }
    }
}
