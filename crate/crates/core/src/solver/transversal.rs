//! Minimum transversal by branch-and-bound.
//!
//! Independent of the game search: branches on the vertices of a smallest
//! uncovered edge and bounds with a greedy packing of pairwise disjoint
//! uncovered edges.

use super::{Budget, SolveError, SolveLimits};
use crate::hypergraph::{Hypergraph, VertexId};

struct Bnb<'a> {
    hg: &'a Hypergraph,
    incidence: Vec<u64>,
    /// Edge ids sorted by size, then id.
    by_size: Vec<usize>,
    /// Vertex set of each edge; empty when n > 128 (bound disabled).
    vertex_masks: Vec<u128>,
    best: Vec<VertexId>,
    budget: Budget,
}

impl Bnb<'_> {
    /// Size of a greedy family of pairwise disjoint uncovered edges.
    fn packing_bound(&self, unc: u64) -> usize {
        if self.vertex_masks.is_empty() {
            return 1;
        }
        let mut used = 0u128;
        let mut count = 0;
        for &e in &self.by_size {
            if unc >> e & 1 == 1 && self.vertex_masks[e] & used == 0 {
                used |= self.vertex_masks[e];
                count += 1;
            }
        }
        count
    }

    fn run(&mut self, unc: u64, chosen: &mut Vec<VertexId>) -> Result<(), SolveError> {
        if unc == 0 {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return Ok(());
        }
        self.budget.tick()?;
        if chosen.len() + self.packing_bound(unc).max(1) >= self.best.len() {
            return Ok(());
        }
        let e = *self
            .by_size
            .iter()
            .find(|&&e| unc >> e & 1 == 1)
            .expect("unc is non-empty");
        for &v in self.hg.edge(e) {
            chosen.push(v);
            self.run(unc & !self.incidence[v], chosen)?;
            chosen.pop();
        }
        Ok(())
    }
}

fn vertex_mask(edge: &[VertexId]) -> u128 {
    edge.iter().fold(0u128, |acc, &v| acc | 1u128 << v)
}

/// A minimum transversal, sorted ascending.
pub fn minimum_transversal(
    hg: &Hypergraph,
    limits: &SolveLimits,
) -> Result<Vec<VertexId>, SolveError> {
    let incidence: Vec<u64> = hg.incidences().iter().map(|s| s.bits()).collect();
    let mut by_size: Vec<usize> = (0..hg.m()).collect();
    by_size.sort_by_key(|&e| (hg.edge(e).len(), e));
    // greedy max-coverage gives the initial incumbent
    let mut greedy = Vec::new();
    let mut unc = hg.all_edges().bits();
    while unc != 0 {
        let v = (0..hg.n())
            .max_by_key(|&v| ((incidence[v] & unc).count_ones(), std::cmp::Reverse(v)))
            .expect("uncovered edges have vertices");
        greedy.push(v);
        unc &= !incidence[v];
    }
    let mut bnb = Bnb {
        hg,
        vertex_masks: if hg.n() <= 128 {
            hg.edges().iter().map(|e| vertex_mask(e)).collect()
        } else {
            Vec::new()
        },
        incidence,
        by_size,
        best: greedy,
        budget: Budget::new(limits),
    };
    let mut chosen = Vec::new();
    bnb.run(hg.all_edges().bits(), &mut chosen)?;
    let mut best = bnb.best;
    best.sort_unstable();
    Ok(best)
}

/// τ(H), the minimum size of a transversal.
pub fn transversal_number(hg: &Hypergraph, limits: &SolveLimits) -> Result<usize, SolveError> {
    minimum_transversal(hg, limits).map(|t| t.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau(h: &Hypergraph) -> usize {
        transversal_number(h, &SolveLimits::default()).unwrap()
    }

    /// Smallest subset of vertices hitting every edge, by enumeration.
    fn brute_tau(h: &Hypergraph) -> usize {
        (0u32..1 << h.n())
            .filter(|s| h.edges().iter().all(|e| e.iter().any(|&v| s >> v & 1 == 1)))
            .map(|s| s.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn small_values() {
        let c4 = Hypergraph::new(4, [[0, 1], [1, 2], [2, 3], [3, 0]]).unwrap();
        assert_eq!(tau(&c4), 2);
        assert_eq!(brute_tau(&c4), 2);

        let k43 = Hypergraph::new(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap();
        assert_eq!(tau(&k43), 2);
        assert_eq!(brute_tau(&k43), 2);

        let h1 =
            Hypergraph::new(6, [&[0, 1, 2][..], &[3, 4, 5], &[0, 3], &[1, 4], &[2, 5]]).unwrap();
        assert_eq!(tau(&h1), 3);
        assert_eq!(brute_tau(&h1), 3);

        assert_eq!(tau(&Hypergraph::empty(3)), 0);
    }

    #[test]
    fn returned_set_is_a_transversal() {
        let h = Hypergraph::new(7, [[0, 1, 2], [2, 3, 4], [4, 5, 6], [6, 0, 3], [1, 5, 3]]).unwrap();
        let t = minimum_transversal(&h, &SolveLimits::default()).unwrap();
        assert!(h.edges().iter().all(|e| e.iter().any(|v| t.contains(v))));
        assert_eq!(t.len(), brute_tau(&h));
    }
}
