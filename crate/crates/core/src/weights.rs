//! Potential functions for the 3- and 4-uniform game bounds.
//!
//! Vertices are colored by their residual degree and weighted by color; every
//! uncovered edge carries a fixed weight. For 4-uniform hypergraphs the
//! vertex weights also depend on Δ*, the maximum residual degree as seen by
//! the Edge-hitter at his latest turn.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{GameState, PlayerRole};
use crate::hypergraph::{Hypergraph, ResidualView, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Yellow,
    Green,
    Blue,
    Red,
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::White => "white",
            Color::Yellow => "yellow",
            Color::Green => "green",
            Color::Blue => "blue",
            Color::Red => "red",
        })
    }
}

/// Which weight table applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// 3-uniform, target 48 per move.
    Three,
    /// 4-uniform, target 3024 per move.
    Four,
}

impl Scheme {
    pub fn uniformity(self) -> usize {
        match self {
            Scheme::Three => 3,
            Scheme::Four => 4,
        }
    }

    /// Average weight decrease per move the Edge-hitter can force.
    pub fn target(self) -> u64 {
        match self {
            Scheme::Three => WeightScheme3::TARGET,
            Scheme::Four => WeightScheme4::TARGET,
        }
    }

    pub fn for_uniformity(k: usize) -> Option<Scheme> {
        match k {
            3 => Some(Scheme::Three),
            4 => Some(Scheme::Four),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Three => "weight3",
            Scheme::Four => "weight4",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("residual is not {expected}-uniform")]
    NotUniform { expected: usize },
    #[error("a {color} vertex cannot occur when delta* = {delta_star}")]
    UnreachableCell { color: Color, delta_star: usize },
}

pub fn color_of(degree: usize, scheme: Scheme) -> Color {
    match (scheme, degree) {
        (_, 0) => Color::Red,
        (_, 1) => Color::Blue,
        (_, 2) => Color::Green,
        (Scheme::Three, _) => Color::White,
        (Scheme::Four, 3) => Color::Yellow,
        (Scheme::Four, _) => Color::White,
    }
}

/// Color of `v` in the residual `r`.
pub fn vertex_color(v: VertexId, r: &ResidualView<'_>, scheme: Scheme) -> Color {
    color_of(r.degree(v), scheme)
}

pub struct WeightScheme3;

impl WeightScheme3 {
    pub const WHITE: u64 = 15;
    pub const GREEN: u64 = 14;
    pub const BLUE: u64 = 11;
    pub const EDGE: u64 = 15;
    pub const TARGET: u64 = 48;

    pub fn vertex_weight(color: Color) -> u64 {
        match color {
            Color::White | Color::Yellow => Self::WHITE,
            Color::Green => Self::GREEN,
            Color::Blue => Self::BLUE,
            Color::Red => 0,
        }
    }
}

/// Δ* column of the 4-uniform table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DeltaBand {
    AtMost2,
    Three,
    Four,
    AtLeast5,
}

impl DeltaBand {
    pub fn of(delta_star: usize) -> DeltaBand {
        match delta_star {
            0..=2 => DeltaBand::AtMost2,
            3 => DeltaBand::Three,
            4 => DeltaBand::Four,
            _ => DeltaBand::AtLeast5,
        }
    }
}

pub struct WeightScheme4;

impl WeightScheme4 {
    pub const EDGE: u64 = 852;
    pub const TARGET: u64 = 3024;

    /// Vertex weight by color and Δ* band; `None` marks a combination that
    /// cannot occur.
    pub fn vertex_weight(color: Color, band: DeltaBand) -> Option<u64> {
        use Color::*;
        use DeltaBand::*;
        match (color, band) {
            (Red, _) => Some(0),
            (_, AtLeast5) => Some(852),
            (White, Four) => Some(852),
            (White, _) => None,
            (Yellow, Four | Three) => Some(845),
            (Yellow, AtMost2) => None,
            (Green, Four) => Some(838),
            (Green, Three | AtMost2) => Some(750),
            (Blue, Four) => Some(831),
            (Blue, Three) => Some(655),
            (Blue, AtMost2) => Some(543),
        }
    }
}

fn require_uniform(r: &ResidualView<'_>, k: usize) -> Result<(), WeightError> {
    if r.uncovered_edges().all(|(_, e)| e.len() == k) {
        Ok(())
    } else {
        Err(WeightError::NotUniform { expected: k })
    }
}

/// `15|W| + 14|Gr| + 11|B| + 15m` over the residual.
pub fn weight3(r: &ResidualView<'_>) -> Result<u64, WeightError> {
    require_uniform(r, 3)?;
    let vertices: u64 = r
        .degrees()
        .iter()
        .map(|&d| WeightScheme3::vertex_weight(color_of(d, Scheme::Three)))
        .sum();
    Ok(vertices + WeightScheme3::EDGE * r.edge_count() as u64)
}

/// Table-2 vertex weights in the column for `delta_star`, plus 852 per edge.
pub fn weight4(r: &ResidualView<'_>, delta_star: usize) -> Result<u64, WeightError> {
    require_uniform(r, 4)?;
    let band = DeltaBand::of(delta_star);
    let mut total = WeightScheme4::EDGE * r.edge_count() as u64;
    for &d in r.degrees() {
        let color = color_of(d, Scheme::Four);
        total += WeightScheme4::vertex_weight(color, band)
            .ok_or(WeightError::UnreachableCell { color, delta_star })?;
    }
    Ok(total)
}

/// Tracks Δ* move by move: after an Edge-hitter move it keeps the maximum
/// degree from before that move; after a Staller move it is the current
/// maximum degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaStarTracker {
    value: usize,
}

impl DeltaStarTracker {
    /// Δ* at game start is the residual's maximum degree, whoever starts.
    pub fn start(r: &ResidualView<'_>) -> Self {
        DeltaStarTracker {
            value: r.max_degree(),
        }
    }

    pub fn value(&self) -> usize {
        self.value
    }

    pub fn band(&self) -> DeltaBand {
        DeltaBand::of(self.value)
    }

    pub fn after_move(&mut self, mover: PlayerRole, before: &ResidualView<'_>, after: &ResidualView<'_>) {
        self.value = match mover {
            PlayerRole::EdgeHitter => before.max_degree(),
            PlayerRole::Staller => after.max_degree(),
        };
    }
}

/// Δ* of a game position, derived from its history.
pub fn delta_star(state: &GameState<'_>) -> usize {
    match (state.to_move(), state.history().last()) {
        (PlayerRole::Staller, Some(last)) if last.player == PlayerRole::EdgeHitter => state
            .previous_residual()
            .expect("history is non-empty")
            .max_degree(),
        _ => state.residual().max_degree(),
    }
}

/// Weight of a game position under `scheme`.
pub fn state_weight(state: &GameState<'_>, scheme: Scheme) -> Result<u64, WeightError> {
    let r = state.residual();
    match scheme {
        Scheme::Three => weight3(&r),
        Scheme::Four => weight4(&r, delta_star(state)),
    }
}

/// Weight of a fresh hypergraph (Δ* = Δ).
pub fn initial_weight(hg: &Hypergraph, scheme: Scheme) -> Result<u64, WeightError> {
    let r = hg.residual(Default::default());
    match scheme {
        Scheme::Three => weight3(&r),
        Scheme::Four => weight4(&r, r.max_degree()),
    }
}

/// `15 n_{≥3} + 14 n_2 + 11 n_1 + 15 m` from the degree census of `hg`.
pub fn bound_rhs_3a(hg: &Hypergraph) -> Result<u64, WeightError> {
    if hg.edges().iter().any(|e| e.len() != 3) {
        return Err(WeightError::NotUniform { expected: 3 });
    }
    let (mut n3, mut n2, mut n1) = (0u64, 0u64, 0u64);
    for v in 0..hg.n() {
        match hg.degree(v) {
            0 => {}
            1 => n1 += 1,
            2 => n2 += 1,
            _ => n3 += 1,
        }
    }
    Ok(15 * n3 + 14 * n2 + 11 * n1 + 15 * hg.m() as u64)
}
