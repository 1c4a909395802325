//! Staller's weighted-pendant rule on k-coronas.
//!
//! Pendant edge `e(j, i)` at base vertex `v_i` weighs `2^(j-1)`; base edges
//! weigh nothing. Staller always plays a degree-1 vertex of the lightest
//! uncovered pendant edge, which keeps each Staller/Edge-hitter round from
//! removing more than `2^k` weight.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Decision, Strategy, StrategyError};
use crate::game::GameState;
use crate::hypergraph::{EdgeId, Hypergraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeLabel {
    Base,
    /// The `j`-th pendant edge (1-based) attached at base vertex `i`.
    Attached { j: usize, i: VertexId },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("expected {expected} labels, got {got}")]
    Length { expected: usize, got: usize },
    #[error("edge {edge}: {reason}")]
    BadEdge { edge: EdgeId, reason: String },
    #[error("not a k-corona: {0}")]
    NotACorona(String),
}

/// Per-edge corona structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoronaLabels {
    labels: Vec<EdgeLabel>,
    k: usize,
}

impl CoronaLabels {
    /// Wraps labels after checking them against `hg`.
    pub fn new(hg: &Hypergraph, labels: Vec<EdgeLabel>) -> Result<Self, LabelError> {
        if labels.len() != hg.m() {
            return Err(LabelError::Length {
                expected: hg.m(),
                got: labels.len(),
            });
        }
        let mut seen: Vec<Vec<usize>> = vec![Vec::new(); hg.n()];
        let mut k = 0;
        for (e, label) in labels.iter().enumerate() {
            let EdgeLabel::Attached { j, i } = *label else {
                continue;
            };
            let bad = |reason: &str| LabelError::BadEdge {
                edge: e,
                reason: reason.to_string(),
            };
            let edge = hg.edge(e);
            if j == 0 {
                return Err(bad("pendant index j starts at 1"));
            }
            if edge.len() < 2 || !edge.contains(&i) {
                return Err(bad("pendant edge must contain its base vertex and another vertex"));
            }
            if edge.iter().any(|&u| u != i && hg.degree(u) != 1) {
                return Err(bad("pendant vertices must have degree 1"));
            }
            if seen[i].contains(&j) {
                return Err(bad("duplicate pendant index at this base vertex"));
            }
            seen[i].push(j);
            k = k.max(j);
        }
        Ok(CoronaLabels { labels, k })
    }

    /// Recovers labels from structure: an edge whose vertices all have
    /// degree 1 except exactly one is a pendant of that vertex. Every base
    /// vertex must end up with the same number of pendants.
    pub fn infer(hg: &Hypergraph) -> Result<Self, LabelError> {
        let mut labels = vec![EdgeLabel::Base; hg.m()];
        let mut count = vec![0usize; hg.n()];
        for (e, edge) in hg.edges().iter().enumerate() {
            let hubs: Vec<VertexId> = edge.iter().copied().filter(|&v| hg.degree(v) >= 2).collect();
            if edge.len() >= 2 && hubs.len() == 1 {
                let i = hubs[0];
                count[i] += 1;
                labels[e] = EdgeLabel::Attached { j: count[i], i };
            }
        }
        let mut base_vertices: Vec<VertexId> = (0..hg.n()).filter(|&v| count[v] > 0).collect();
        for (e, label) in labels.iter().enumerate() {
            if *label == EdgeLabel::Base {
                base_vertices.extend_from_slice(hg.edge(e));
            }
        }
        base_vertices.sort_unstable();
        base_vertices.dedup();
        let k = base_vertices.first().map(|&v| count[v]).unwrap_or(0);
        if k == 0 {
            return Err(LabelError::NotACorona("no pendant edges found".into()));
        }
        if let Some(&v) = base_vertices.iter().find(|&&v| count[v] != k) {
            return Err(LabelError::NotACorona(format!(
                "base vertex {v} has {} pendant edges, expected {k}",
                count[v]
            )));
        }
        Self::new(hg, labels)
    }

    pub fn labels(&self) -> &[EdgeLabel] {
        &self.labels
    }

    pub fn label(&self, e: EdgeId) -> EdgeLabel {
        self.labels[e]
    }

    /// Largest pendant index.
    pub fn k(&self) -> usize {
        self.k
    }

    /// `2^(j-1)` for pendant edges, 0 for base edges.
    pub fn edge_weight(&self, e: EdgeId) -> u64 {
        match self.labels[e] {
            EdgeLabel::Base => 0,
            EdgeLabel::Attached { j, .. } => 1u64 << (j - 1),
        }
    }

    /// Total pendant weight of the uncovered edges of `state`.
    pub fn residual_weight(&self, state: &GameState<'_>) -> u64 {
        state.uncovered().iter().map(|e| self.edge_weight(e)).sum()
    }
}

/// Staller plays a degree-1 vertex of a minimum-weight uncovered pendant edge.
#[derive(Debug, Clone)]
pub struct StallerCorona {
    labels: CoronaLabels,
}

impl StallerCorona {
    pub fn new(labels: CoronaLabels) -> Self {
        StallerCorona { labels }
    }
}

pub(crate) const CORONA_FALLBACK: &str = "fallback: no pendant edge uncovered";

impl Strategy for StallerCorona {
    fn name(&self) -> String {
        "corona".into()
    }

    fn decide(&mut self, state: &GameState<'_>) -> Result<Decision, StrategyError> {
        let unc = state.uncovered();
        let lightest = unc
            .iter()
            .filter(|&e| self.labels.edge_weight(e) > 0)
            .map(|e| self.labels.edge_weight(e))
            .min();
        let Some(w) = lightest else {
            // the rule is vacuous; play anything legal and flag it
            return state
                .legal_moves()
                .first()
                .map(|&v| Decision::by(v, CORONA_FALLBACK))
                .ok_or(StrategyError::NoLegalMove);
        };
        let r = state.residual();
        (0..state.hypergraph().n())
            .filter(|&v| r.degree(v) == 1)
            .find(|&v| {
                let e = r.incidence(v).first().expect("degree 1");
                self.labels.edge_weight(e) == w
            })
            .map(|v| Decision::by(v, "lightest pendant"))
            .ok_or(StrategyError::NoLegalMove)
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::PlayerRole;

    /// Base edge {0,1,2}; pendants e(j,i) = {i, fresh} in i-major order.
    fn corona_3_3() -> (Hypergraph, Vec<EdgeLabel>) {
        let mut edges = vec![vec![0, 1, 2]];
        let mut labels = vec![EdgeLabel::Base];
        let mut next = 3;
        for i in 0..3 {
            for j in 1..=3 {
                edges.push(vec![i, next]);
                labels.push(EdgeLabel::Attached { j, i });
                next += 1;
            }
        }
        (Hypergraph::new(next, edges).unwrap(), labels)
    }

    #[test]
    fn initial_weight_is_n_times_2k_minus_1() {
        let (h, labels) = corona_3_3();
        let labels = CoronaLabels::new(&h, labels).unwrap();
        let s = GameState::new(&h, PlayerRole::Staller);
        assert_eq!(labels.residual_weight(&s), 3 * (8 - 1));
    }

    #[test]
    fn plays_lightest_pendant() {
        let (h, labels) = corona_3_3();
        let labels = CoronaLabels::new(&h, labels).unwrap();
        let mut st = StallerCorona::new(labels);
        let s = GameState::new(&h, PlayerRole::Staller);
        // pendant vertex of e(1,0)
        assert_eq!(st.choose(&s).unwrap(), 3);

        // cover every j=1 pendant: next is a j=2 pendant
        let covered = [1, 4, 7].into_iter().collect();
        let s = GameState::with_covered(&h, covered, PlayerRole::Staller);
        assert_eq!(st.choose(&s).unwrap(), 4);
    }

    #[test]
    fn falls_back_when_only_base_edges_remain() {
        let (h, labels) = corona_3_3();
        let labels = CoronaLabels::new(&h, labels).unwrap();
        let covered = (1..10).collect();
        let s = GameState::with_covered(&h, covered, PlayerRole::Staller);
        let d = StallerCorona::new(labels).decide(&s).unwrap();
        assert_eq!(d.vertex, 0);
        assert_eq!(d.rule, Some(CORONA_FALLBACK));
    }

    #[test]
    fn inference_recovers_labels() {
        let (h, labels) = corona_3_3();
        let inferred = CoronaLabels::infer(&h).unwrap();
        assert_eq!(inferred.labels(), labels.as_slice());
        assert_eq!(inferred.k(), 3);
    }

    #[test]
    fn inference_rejects_non_coronas() {
        let c4 = Hypergraph::new(4, [[0, 1], [1, 2], [2, 3], [3, 0]]).unwrap();
        assert!(matches!(CoronaLabels::infer(&c4), Err(LabelError::NotACorona(_))));
    }

    #[test]
    fn bad_labels_are_rejected() {
        let (h, mut labels) = corona_3_3();
        labels[2] = EdgeLabel::Attached { j: 1, i: 0 };
        assert!(matches!(CoronaLabels::new(&h, labels), Err(LabelError::BadEdge { edge: 2, .. })));
        let (h, labels) = corona_3_3();
        assert!(matches!(
            CoronaLabels::new(&h, labels[1..].to_vec()),
            Err(LabelError::Length { .. })
        ));
    }
}
