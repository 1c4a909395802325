//! Transversal game mechanics.

use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{EdgeId, EdgeSet, Hypergraph, ResidualView, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlayerRole {
    EdgeHitter,
    Staller,
}

impl PlayerRole {
    pub fn other(self) -> PlayerRole {
        match self {
            PlayerRole::EdgeHitter => PlayerRole::Staller,
            PlayerRole::Staller => PlayerRole::EdgeHitter,
        }
    }
}

impl fmt::Display for PlayerRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlayerRole::EdgeHitter => "Edge-hitter",
            PlayerRole::Staller => "Staller",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("illegal: vertex {vertex} hits no uncovered edge")]
    IllegalMove { vertex: VertexId },
    #[error("vertex {vertex} does not exist (n = {n})")]
    NoSuchVertex { vertex: VertexId, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    pub player: PlayerRole,
    pub vertex: VertexId,
    pub newly_covered: EdgeSet,
}

/// A position of the transversal game on a (partially covered) hypergraph.
///
/// Legality and termination depend only on the uncovered edge set; the
/// history is kept for transcripts and for strategies that look back.
#[derive(Clone)]
pub struct GameState<'h> {
    hg: &'h Hypergraph,
    initial_covered: EdgeSet,
    covered: EdgeSet,
    first: PlayerRole,
    to_move: PlayerRole,
    history: Vec<Move>,
}

impl fmt::Debug for GameState<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameState")
            .field("covered", &self.covered)
            .field("to_move", &self.to_move)
            .field("history", &self.history)
            .finish()
    }
}

impl<'h> GameState<'h> {
    pub fn new(hg: &'h Hypergraph, first: PlayerRole) -> Self {
        Self::with_covered(hg, EdgeSet::EMPTY, first)
    }

    /// The game on `H|covered` with `to_move` playing next.
    pub fn with_covered(hg: &'h Hypergraph, covered: EdgeSet, to_move: PlayerRole) -> Self {
        let covered = covered & hg.all_edges();
        GameState {
            hg,
            initial_covered: covered,
            covered,
            first: to_move,
            to_move,
            history: Vec::new(),
        }
    }

    pub fn hypergraph(&self) -> &'h Hypergraph {
        self.hg
    }

    pub fn covered(&self) -> EdgeSet {
        self.covered
    }

    pub fn initial_covered(&self) -> EdgeSet {
        self.initial_covered
    }

    pub fn uncovered(&self) -> EdgeSet {
        self.hg.all_edges() - self.covered
    }

    pub fn to_move(&self) -> PlayerRole {
        self.to_move
    }

    pub fn first_player(&self) -> PlayerRole {
        self.first
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    pub fn moves_played(&self) -> usize {
        self.history.len()
    }

    pub fn residual(&self) -> ResidualView<'h> {
        self.hg.residual(self.covered)
    }

    pub fn is_terminal(&self) -> bool {
        self.uncovered().is_empty()
    }

    pub fn is_legal(&self, v: VertexId) -> bool {
        v < self.hg.n() && self.hg.incidence(v).intersects(self.uncovered())
    }

    /// Vertices hitting at least one uncovered edge, ascending.
    pub fn legal_moves(&self) -> Vec<VertexId> {
        let unc = self.uncovered();
        (0..self.hg.n())
            .filter(|&v| self.hg.incidence(v).intersects(unc))
            .collect()
    }

    /// Edges that playing `v` would newly cover.
    pub fn hits(&self, v: VertexId) -> EdgeSet {
        self.hg.incidence(v) & self.uncovered()
    }

    pub fn apply_move(&self, v: VertexId) -> Result<GameState<'h>, GameError> {
        let mut next = self.clone();
        next.play(v)?;
        Ok(next)
    }

    /// In-place variant of [`GameState::apply_move`].
    pub fn play(&mut self, v: VertexId) -> Result<Move, GameError> {
        if v >= self.hg.n() {
            return Err(GameError::NoSuchVertex {
                vertex: v,
                n: self.hg.n(),
            });
        }
        let newly = self.hits(v);
        if newly.is_empty() {
            return Err(GameError::IllegalMove { vertex: v });
        }
        let mv = Move {
            player: self.to_move,
            vertex: v,
            newly_covered: newly,
        };
        self.covered = self.covered | newly;
        self.to_move = self.to_move.other();
        self.history.push(mv);
        Ok(mv)
    }

    /// The residual before the most recent move, if any move was made.
    pub fn previous_residual(&self) -> Option<ResidualView<'h>> {
        self.history
            .last()
            .map(|mv| self.hg.residual(self.covered - mv.newly_covered))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptMove {
    pub index: usize,
    pub player: PlayerRole,
    pub vertex: VertexId,
    pub newly_covered: Vec<EdgeId>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weight_decrease: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rule: Option<String>,
}

/// Per-move weight decreases under a weight scheme, with running sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveLedger {
    pub scheme: String,
    pub initial_weight: u64,
    pub decreases: Vec<u64>,
    pub running: Vec<u64>,
}

impl MoveLedger {
    pub fn new(scheme: impl Into<String>, initial_weight: u64) -> Self {
        MoveLedger {
            scheme: scheme.into(),
            initial_weight,
            decreases: Vec::new(),
            running: Vec::new(),
        }
    }

    pub fn record(&mut self, decrease: u64) {
        let total = self.running.last().copied().unwrap_or(0) + decrease;
        self.decreases.push(decrease);
        self.running.push(total);
    }

    pub fn total(&self) -> u64 {
        self.running.last().copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub n: usize,
    pub m: usize,
    pub first: PlayerRole,
    pub initial_covered: Vec<EdgeId>,
    pub moves: Vec<TranscriptMove>,
    pub final_covered: Vec<EdgeId>,
    pub length: usize,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ledger: Option<MoveLedger>,
}

impl Transcript {
    /// Transcript of the moves made so far in `state`.
    pub fn from_state(state: &GameState<'_>) -> Self {
        let moves = state
            .history()
            .iter()
            .enumerate()
            .map(|(index, mv)| TranscriptMove {
                index,
                player: mv.player,
                vertex: mv.vertex,
                newly_covered: mv.newly_covered.iter().collect(),
                weight_decrease: None,
                rule: None,
            })
            .collect();
        Transcript {
            n: state.hypergraph().n(),
            m: state.hypergraph().m(),
            first: state.first_player(),
            initial_covered: state.initial_covered().iter().collect(),
            moves,
            final_covered: state.covered().iter().collect(),
            length: state.moves_played(),
            complete: state.is_terminal(),
            ledger: None,
        }
    }

    /// One JSON object per move, newline separated.
    pub fn write_json_lines<W: Write>(&self, mut out: W) -> io::Result<()> {
        for mv in &self.moves {
            serde_json::to_writer(&mut out, mv)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_json_lines(&self) -> String {
        let mut buf = Vec::new();
        self.write_json_lines(&mut buf).expect("writing to a Vec");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Hypergraph {
        Hypergraph::new(4, [[0, 1], [1, 2], [2, 3], [3, 0]]).unwrap()
    }

    #[test]
    fn fresh_c4_all_moves_legal() {
        let h = c4();
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        assert_eq!(s.legal_moves(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn one_edge_left() {
        let h = c4();
        let s = GameState::with_covered(&h, [0, 1, 2].into_iter().collect(), PlayerRole::Staller);
        assert_eq!(s.legal_moves(), vec![0, 3]);
    }

    #[test]
    fn terminal_has_no_moves() {
        let h = c4();
        let s = GameState::with_covered(&h, h.all_edges(), PlayerRole::EdgeHitter);
        assert!(s.is_terminal());
        assert!(s.legal_moves().is_empty());
    }

    #[test]
    fn apply_move_on_c4() {
        let h = c4();
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        let t = s.apply_move(0).unwrap();
        assert_eq!(t.covered(), [0, 3].into_iter().collect());
        assert_eq!(t.to_move(), PlayerRole::Staller);
        assert_eq!(t.history().len(), 1);
        assert!(!t.is_terminal());
        // the original is untouched
        assert_eq!(s.moves_played(), 0);
    }

    #[test]
    fn single_edge_ends_after_one_move() {
        let h = Hypergraph::new(3, [[0, 1, 2]]).unwrap();
        let t = GameState::new(&h, PlayerRole::EdgeHitter).apply_move(0).unwrap();
        assert!(t.is_terminal());
    }

    #[test]
    fn replaying_a_vertex_is_illegal() {
        let h = c4();
        let s = GameState::new(&h, PlayerRole::EdgeHitter).apply_move(1).unwrap();
        assert_eq!(s.apply_move(1).unwrap_err(), GameError::IllegalMove { vertex: 1 });
        assert!(matches!(s.apply_move(9), Err(GameError::NoSuchVertex { .. })));
    }

    #[test]
    fn transcript_json_lines() {
        let h = c4();
        let mut s = GameState::new(&h, PlayerRole::EdgeHitter);
        s.play(0).unwrap();
        s.play(2).unwrap();
        let t = Transcript::from_state(&s);
        assert_eq!(t.length, 2);
        assert!(t.complete);
        let lines = t.to_json_lines();
        let first = lines.lines().next().unwrap();
        assert_eq!(
            first,
            r#"{"index":0,"player":"edge-hitter","vertex":0,"newly_covered":[0,3]}"#
        );
    }
}
