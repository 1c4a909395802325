//! Edge-hitter rule hierarchies for 3- and 4-uniform hypergraphs.
//!
//! Each policy walks an ordered list of rules and plays the first that
//! applies; ties go to the lowest vertex id. Both share a commitment phase:
//! once every component is a 2-regular linear hypergraph or a single edge,
//! the Edge-hitter picks a 2-regular component and keeps playing its green
//! vertex with the most blue neighbors for as long as it has one.

use super::{Decision, Strategy, StrategyError};
use crate::game::GameState;
use crate::hypergraph::{sorted_intersection_len, ResidualView, VertexId};
use crate::weights::{delta_star, weight3, weight4, WeightScheme3, WeightScheme4};

const RULE_TRIVIAL: &str = "rule 0: one vertex finishes the game";
const RULE_STAY: &str = "stay in committed component";
const RULE_FALLBACK: &str = "fallback: lowest legal vertex";

fn blue_neighbors(r: &ResidualView<'_>, v: VertexId) -> usize {
    r.neighbors(v).into_iter().filter(|&u| r.degree(u) == 1).count()
}

/// Lowest vertex hitting every uncovered edge, if any.
fn finishing_vertex(state: &GameState<'_>) -> Option<VertexId> {
    let unc = state.uncovered();
    (0..state.hypergraph().n()).find(|&v| unc.is_subset(state.hypergraph().incidence(v)))
}

/// Components in which every vertex has degree 2 and no two edges overlap.
fn two_regular_linear_components(r: &ResidualView<'_>) -> Vec<Vec<VertexId>> {
    r.components()
        .into_iter()
        .filter(|comp| {
            comp.iter().all(|&v| r.degree(v) == 2) && {
                let edges: Vec<&[VertexId]> = r
                    .edges_within(comp)
                    .iter()
                    .map(|e| r.base().edge(e))
                    .collect();
                edges.iter().enumerate().all(|(i, a)| {
                    edges[i + 1..]
                        .iter()
                        .all(|b| sorted_intersection_len(a, b) <= 1)
                })
            }
        })
        .collect()
}

/// Lowest vertex of a component that consists of a single edge.
fn isolated_edge_vertex(r: &ResidualView<'_>) -> Option<VertexId> {
    r.components()
        .into_iter()
        .find(|comp| r.edges_within(comp).len() == 1)
        .map(|comp| comp[0])
}

/// Green vertex of `comp` with the most blue neighbors, lowest id on ties.
fn best_green(r: &ResidualView<'_>, comp: &[VertexId]) -> Option<VertexId> {
    comp.iter()
        .copied()
        .filter(|&v| r.degree(v) == 2)
        .max_by_key(|&v| (blue_neighbors(r, v), std::cmp::Reverse(v)))
}

/// The component the Edge-hitter has committed to.
#[derive(Debug, Clone, Default)]
struct Commitment {
    component: Option<Vec<VertexId>>,
}

impl Commitment {
    fn next_move(&self, r: &ResidualView<'_>) -> Option<VertexId> {
        self.component.as_deref().and_then(|c| best_green(r, c))
    }

    fn key(&self, state: &GameState<'_>) -> Vec<VertexId> {
        let r = state.residual();
        match &self.component {
            Some(c) if c.iter().any(|&v| r.degree(v) == 2) => {
                c.iter().copied().filter(|&v| r.is_active(v)).collect()
            }
            _ => Vec::new(),
        }
    }

    fn commit(&mut self, r: &ResidualView<'_>) -> Option<VertexId> {
        let comp = two_regular_linear_components(r).into_iter().next()?;
        let v = best_green(r, &comp);
        self.component = Some(comp);
        v
    }
}

fn require_uniform(name: &str, r: &ResidualView<'_>, k: usize) -> Result<(), StrategyError> {
    if r.uncovered_edges().all(|(_, e)| e.len() == k) {
        Ok(())
    } else {
        Err(StrategyError::NotUniform {
            strategy: name.to_string(),
            expected: k,
        })
    }
}

/// Edge-hitter for 3-uniform hypergraphs, aiming at an average weight
/// decrease of 48 per move.
///
/// Rules, in order: finish the game in one move; stay in the committed
/// component; a vertex of degree >= 4; the largest decrease if it is >= 68;
/// any white vertex; the largest decrease if it is >= 64; commit to a
/// 2-regular linear component; a vertex of an isolated edge.
#[derive(Debug, Clone, Default)]
pub struct EdgeHitter3 {
    commitment: Commitment,
}

impl EdgeHitter3 {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Strategy for EdgeHitter3 {
    fn name(&self) -> String {
        "eh3".into()
    }

    fn decide(&mut self, state: &GameState<'_>) -> Result<Decision, StrategyError> {
        let r = state.residual();
        require_uniform("eh3", &r, 3)?;
        let legal = state.legal_moves();
        if legal.is_empty() {
            return Err(StrategyError::NoLegalMove);
        }
        let weight = weight3(&r)?;
        if let Some(v) = finishing_vertex(state) {
            if weight >= WeightScheme3::TARGET {
                return Ok(Decision::by(v, RULE_TRIVIAL));
            }
        }
        if let Some(v) = self.commitment.next_move(&r) {
            return Ok(Decision::by(v, RULE_STAY));
        }
        self.commitment.component = None;

        if r.max_degree() >= 4 {
            let v = legal.iter().copied().find(|&v| r.degree(v) == r.max_degree());
            return Ok(Decision::by(v.expect("max degree is attained"), "rule 1: degree >= 4"));
        }
        let hg = state.hypergraph();
        let mut best = (0u64, legal[0]);
        for &v in &legal {
            let after = hg.residual(state.covered() | hg.incidence(v));
            let dec = weight - weight3(&after)?;
            if dec > best.0 {
                best = (dec, v);
            }
        }
        if best.0 >= 68 {
            return Ok(Decision::by(best.1, "rule 2: decrease >= 68"));
        }
        if let Some(&v) = legal.iter().find(|&&v| r.degree(v) >= 3) {
            return Ok(Decision::by(v, "rule 3: white vertex"));
        }
        if best.0 >= 64 {
            return Ok(Decision::by(best.1, "rule 4: decrease >= 64"));
        }
        if let Some(v) = self.commitment.commit(&r) {
            return Ok(Decision::by(v, "rule 5: commit to 2-regular linear component"));
        }
        if let Some(v) = isolated_edge_vertex(&r) {
            return Ok(Decision::by(v, "rule 6: isolated edge"));
        }
        Ok(Decision::by(legal[0], RULE_FALLBACK))
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn memo_key(&self, state: &GameState<'_>) -> Vec<VertexId> {
        self.commitment.key(state)
    }
}

/// Edge-hitter for 4-uniform hypergraphs, aiming at an average weight
/// decrease of 3024 per move.
///
/// Rules, in order: finish the game in one move; stay in the committed
/// component; a vertex of degree >= 5, then 4, then 3; a vertex shared by
/// two overlapping edges; a green vertex with a blue neighbor; a vertex of
/// an isolated edge; commit to a 2-regular linear component.
#[derive(Debug, Clone, Default)]
pub struct EdgeHitter4 {
    commitment: Commitment,
}

impl EdgeHitter4 {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Lowest vertex lying in two uncovered edges that share >= 2 vertices.
fn overlap_vertex(r: &ResidualView<'_>) -> Option<VertexId> {
    let edges: Vec<(usize, &[VertexId])> = r.uncovered_edges().collect();
    let mut best: Option<VertexId> = None;
    for (i, (_, a)) in edges.iter().enumerate() {
        for (_, b) in &edges[i + 1..] {
            if sorted_intersection_len(a, b) >= 2 {
                let v = *a.iter().find(|v| b.contains(v)).expect("non-empty intersection");
                best = Some(best.map_or(v, |w| w.min(v)));
            }
        }
    }
    best
}

impl Strategy for EdgeHitter4 {
    fn name(&self) -> String {
        "eh4".into()
    }

    fn decide(&mut self, state: &GameState<'_>) -> Result<Decision, StrategyError> {
        let r = state.residual();
        require_uniform("eh4", &r, 4)?;
        let legal = state.legal_moves();
        if legal.is_empty() {
            return Err(StrategyError::NoLegalMove);
        }
        let weight = weight4(&r, delta_star(state))?;
        if let Some(v) = finishing_vertex(state) {
            if weight >= WeightScheme4::TARGET {
                return Ok(Decision::by(v, RULE_TRIVIAL));
            }
        }
        if let Some(v) = self.commitment.next_move(&r) {
            return Ok(Decision::by(v, RULE_STAY));
        }
        self.commitment.component = None;

        let by_degree = |pred: &dyn Fn(usize) -> bool| legal.iter().copied().find(|&v| pred(r.degree(v)));
        if let Some(v) = by_degree(&|d| d >= 5) {
            return Ok(Decision::by(v, "rule 1: degree >= 5"));
        }
        if let Some(v) = by_degree(&|d| d == 4) {
            return Ok(Decision::by(v, "rule 2: degree 4"));
        }
        if let Some(v) = by_degree(&|d| d == 3) {
            return Ok(Decision::by(v, "rule 3: degree 3"));
        }
        if let Some(v) = overlap_vertex(&r) {
            return Ok(Decision::by(v, "rule 4: overlapping edges"));
        }
        if let Some(&v) = legal
            .iter()
            .find(|&&v| r.degree(v) == 2 && blue_neighbors(&r, v) > 0)
        {
            return Ok(Decision::by(v, "rule 4: green vertex with blue neighbor"));
        }
        if let Some(v) = isolated_edge_vertex(&r) {
            return Ok(Decision::by(v, "rule 5: isolated edge"));
        }
        if let Some(v) = self.commitment.commit(&r) {
            return Ok(Decision::by(v, "rule 6: commit to 2-regular linear component"));
        }
        Ok(Decision::by(legal[0], RULE_FALLBACK))
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn memo_key(&self, state: &GameState<'_>) -> Vec<VertexId> {
        self.commitment.key(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::PlayerRole;
    use crate::hypergraph::Hypergraph;
    use crate::weights::state_weight;
    use crate::weights::Scheme;

    fn figure2() -> Hypergraph {
        Hypergraph::new(6, [[0, 1, 2], [3, 4, 5], [0, 1, 3], [2, 4, 5]]).unwrap()
    }

    fn decrease(state: &GameState<'_>, v: VertexId, scheme: Scheme) -> u64 {
        let before = state_weight(state, scheme).unwrap();
        let after = state_weight(&state.apply_move(v).unwrap(), scheme).unwrap();
        before - after
    }

    #[test]
    fn eh3_on_figure2_plays_overlap() {
        let h = figure2();
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        // every decrease, enumerated
        let decs: Vec<u64> = (0..6).map(|v| decrease(&s, v, Scheme::Three)).collect();
        assert_eq!(decs, vec![64, 64, 56, 56, 64, 64]);
        let d = EdgeHitter3::new().decide(&s).unwrap();
        assert_eq!(d.vertex, 0);
        assert_eq!(d.rule, Some("rule 4: decrease >= 64"));
    }

    #[test]
    fn eh3_two_isolated_edges() {
        let h = Hypergraph::new(6, [[0, 1, 2], [3, 4, 5]]).unwrap();
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        let d = EdgeHitter3::new().decide(&s).unwrap();
        assert_eq!(d.vertex, 0);
        assert_eq!(d.rule, Some("rule 6: isolated edge"));
    }

    #[test]
    fn eh3_plays_degree_four_vertex() {
        // vertex 4 lies in four edges; edge {0,1,2} keeps it from finishing
        let h = Hypergraph::new(
            13,
            [[0, 1, 2], [4, 5, 6], [4, 7, 8], [4, 9, 10], [4, 11, 12]],
        )
        .unwrap();
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        let d = EdgeHitter3::new().decide(&s).unwrap();
        assert_eq!(d.vertex, 4);
        assert_eq!(d.rule, Some("rule 1: degree >= 4"));
    }

    #[test]
    fn eh3_trivial_finish() {
        let h = Hypergraph::new(7, [[0, 1, 2], [0, 3, 4], [0, 5, 6]]).unwrap();
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        assert_eq!(EdgeHitter3::new().decide(&s).unwrap(), Decision::by(0, RULE_TRIVIAL));
    }

    #[test]
    fn eh3_rejects_non_uniform() {
        let h = Hypergraph::new(3, [&[0, 1][..], &[0, 1, 2]]).unwrap();
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        assert!(matches!(
            EdgeHitter3::new().decide(&s),
            Err(StrategyError::NotUniform { expected: 3, .. })
        ));
    }

    /// Fano-like 2-regular linear 3-uniform component: 6 vertices, 4 edges
    /// forming a "Pasch" configuration.
    fn pasch() -> Hypergraph {
        Hypergraph::new(6, [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]]).unwrap()
    }

    #[test]
    fn eh3_commits_to_two_regular_component() {
        let h = pasch();
        assert!(h.is_linear());
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        let mut eh = EdgeHitter3::new();
        let d = eh.decide(&s).unwrap();
        assert_eq!(d.vertex, 0);
        assert_eq!(decrease(&s, 0, Scheme::Three), 56);
        assert_eq!(d.rule, Some("rule 5: commit to 2-regular linear component"));
        assert!(!eh.memo_key(&s).is_empty());
    }

    #[test]
    fn eh4_isolated_edge_decrease() {
        let h = Hypergraph::new(4, [[0, 1, 2, 3]]).unwrap();
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        let d = EdgeHitter4::new().decide(&s).unwrap();
        assert_eq!(d.vertex, 0);
        assert_eq!(decrease(&s, 0, Scheme::Four), 3024);
    }

    #[test]
    fn eh4_yellow_vertex_decrease() {
        // vertex 0 of degree 3 in a linear 4-uniform hypergraph with an extra
        // edge so nothing finishes in one move
        let h = Hypergraph::new(
            14,
            [[0, 1, 2, 3], [0, 4, 5, 6], [0, 7, 8, 9], [10, 11, 12, 13]],
        )
        .unwrap();
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        let d = EdgeHitter4::new().decide(&s).unwrap();
        assert_eq!(d.vertex, 0);
        assert_eq!(d.rule, Some("rule 3: degree 3"));
        assert!(decrease(&s, 0, Scheme::Four) >= 3 * 852 + 845 + 95 * 9);
    }

    /// 2-regular linear 4-uniform: the dual of K5 (10 vertices = pairs,
    /// 5 edges = the 4 pairs containing i).
    fn k5_dual() -> Hypergraph {
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
            .collect();
        let edges: Vec<Vec<usize>> = (0..5)
            .map(|i| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(_, &(a, b))| a == i || b == i)
                    .map(|(p, _)| p)
                    .collect()
            })
            .collect();
        Hypergraph::new(10, edges).unwrap()
    }

    #[test]
    fn eh4_fresh_two_regular_component() {
        let h = k5_dual();
        assert!(h.is_linear());
        assert_eq!(h.uniformity(), Some(4));
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        let d = EdgeHitter4::new().decide(&s).unwrap();
        assert_eq!(d.rule, Some("rule 6: commit to 2-regular linear component"));
        assert_eq!(decrease(&s, d.vertex, Scheme::Four), 750 + 2 * 852 + 6 * 207);
    }

    #[test]
    fn eh4_overlap_rule() {
        let h = Hypergraph::new(6, [[0, 1, 2, 3], [0, 1, 4, 5]]).unwrap();
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        // vertex 0 finishes the game outright
        assert_eq!(EdgeHitter4::new().decide(&s).unwrap().rule, Some(RULE_TRIVIAL));
        let h = Hypergraph::new(10, [[0, 1, 2, 3], [0, 1, 4, 5], [6, 7, 8, 9]]).unwrap();
        let s = GameState::new(&h, PlayerRole::EdgeHitter);
        assert_eq!(
            EdgeHitter4::new().decide(&s).unwrap(),
            Decision::by(0, "rule 4: overlapping edges")
        );
    }
}
