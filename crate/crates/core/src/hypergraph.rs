//! Hypergraphs, edge bitsets and residual views.
//!
//! A [`Hypergraph`] is immutable after construction. Edges are stored in a
//! canonical form (sorted, no repeated vertices) and duplicate edges are
//! collapsed at build time, so an [`EdgeId`] is simply a position in the edge
//! list and doubles as a bit index in an [`EdgeSet`].

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use thiserror::Error;

/// 0-based vertex index.
pub type VertexId = usize;
/// 0-based edge index; the position of the edge in [`Hypergraph::edges`].
pub type EdgeId = usize;

/// Hard capacity of an [`EdgeSet`].
pub const MAX_EDGES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("edge {edge} is empty")]
    EmptyEdge { edge: usize },
    #[error("edge {edge} references vertex {vertex}, but n = {n}")]
    IndexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("{m} distinct edges exceed the supported maximum of {MAX_EDGES}")]
    TooManyEdges { m: usize },
}

/// A set of edge ids packed into a `u64`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(u64);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        EdgeSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, .., m-1}`.
    pub fn full(m: usize) -> Self {
        assert!(m <= MAX_EDGES);
        if m == MAX_EDGES {
            EdgeSet(u64::MAX)
        } else {
            EdgeSet((1u64 << m) - 1)
        }
    }

    pub fn single(e: EdgeId) -> Self {
        EdgeSet(1u64 << e)
    }

    pub fn contains(self, e: EdgeId) -> bool {
        e < MAX_EDGES && self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: EdgeId) {
        self.0 |= 1u64 << e;
    }

    pub fn remove(&mut self, e: EdgeId) {
        self.0 &= !(1u64 << e);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: EdgeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: EdgeSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Lowest edge id in the set.
    pub fn first(self) -> Option<EdgeId> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Iterates edge ids in ascending order.
    pub fn iter(self) -> EdgeSetIter {
        EdgeSetIter(self.0)
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitOr for EdgeSet {
    type Output = EdgeSet;
    fn bitor(self, rhs: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 | rhs.0)
    }
}

impl BitAnd for EdgeSet {
    type Output = EdgeSet;
    fn bitand(self, rhs: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & rhs.0)
    }
}

impl Sub for EdgeSet {
    type Output = EdgeSet;
    fn sub(self, rhs: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & !rhs.0)
    }
}

impl Not for EdgeSet {
    type Output = EdgeSet;
    fn not(self) -> EdgeSet {
        EdgeSet(!self.0)
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        let mut s = EdgeSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl IntoIterator for EdgeSet {
    type Item = EdgeId;
    type IntoIter = EdgeSetIter;
    fn into_iter(self) -> EdgeSetIter {
        self.iter()
    }
}

pub struct EdgeSetIter(u64);

impl Iterator for EdgeSetIter {
    type Item = EdgeId;

    fn next(&mut self) -> Option<EdgeId> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for EdgeSetIter {}

/// A finite hypergraph with canonical, pairwise distinct edges.
///
/// Equality compares `n` and the edge list; input multiplicities are
/// metadata and do not take part.
#[derive(Clone)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<VertexId>>,
    incidence: Vec<EdgeSet>,
    /// How many copies of each edge were present in the raw input.
    multiplicity: Vec<usize>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Hypergraph {
    /// Builds a hypergraph from raw vertex lists.
    ///
    /// Each edge is sorted and stripped of repeated vertices; repeated edges
    /// are collapsed to their first occurrence (their count is kept in
    /// [`Hypergraph::multiplicity`]). Removing parallel copies of an edge does
    /// not change any game value.
    pub fn new<E, I>(n: usize, raw_edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[VertexId]>,
    {
        let mut edges: Vec<Vec<VertexId>> = Vec::new();
        let mut multiplicity: Vec<usize> = Vec::new();
        for (idx, raw) in raw_edges.into_iter().enumerate() {
            let raw = raw.as_ref();
            if raw.is_empty() {
                return Err(HypergraphError::EmptyEdge { edge: idx });
            }
            if let Some(&bad) = raw.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::IndexOutOfRange {
                    edge: idx,
                    vertex: bad,
                    n,
                });
            }
            let mut edge = raw.to_vec();
            edge.sort_unstable();
            edge.dedup();
            match edges.iter().position(|e| *e == edge) {
                Some(p) => multiplicity[p] += 1,
                None => {
                    edges.push(edge);
                    multiplicity.push(1);
                }
            }
        }
        if edges.len() > MAX_EDGES {
            return Err(HypergraphError::TooManyEdges { m: edges.len() });
        }
        let mut incidence = vec![EdgeSet::EMPTY; n];
        for (id, edge) in edges.iter().enumerate() {
            for &v in edge {
                incidence[v].insert(id);
            }
        }
        Ok(Hypergraph {
            n,
            edges,
            incidence,
            multiplicity,
        })
    }

    pub fn empty(n: usize) -> Self {
        Hypergraph {
            n,
            edges: Vec::new(),
            incidence: vec![EdgeSet::EMPTY; n],
            multiplicity: Vec::new(),
        }
    }

    /// Order of the hypergraph.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Size of the hypergraph.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &[VertexId] {
        &self.edges[e]
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::full(self.m())
    }

    /// Edges containing `v`.
    pub fn incidence(&self, v: VertexId) -> EdgeSet {
        self.incidence[v]
    }

    pub fn incidences(&self) -> &[EdgeSet] {
        &self.incidence
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v].len()
    }

    pub fn multiplicity(&self) -> &[usize] {
        &self.multiplicity
    }

    /// Number of raw edges dropped as duplicates at build time.
    pub fn duplicates_removed(&self) -> usize {
        self.multiplicity.iter().map(|c| c - 1).sum()
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(|s| s.len()).max().unwrap_or(0)
    }

    /// `Some(k)` if every edge has exactly `k` vertices; `None` for mixed
    /// sizes or an edgeless hypergraph.
    pub fn uniformity(&self) -> Option<usize> {
        uniformity_of(self.edges.iter().map(|e| e.as_slice()))
    }

    pub fn min_edge_size(&self) -> Option<usize> {
        self.edges.iter().map(|e| e.len()).min()
    }

    pub fn is_linear(&self) -> bool {
        is_linear_edges(&self.edges.iter().map(|e| e.as_slice()).collect::<Vec<_>>())
    }

    pub fn summary(&self) -> StructureSummary {
        self.residual(EdgeSet::EMPTY).summary()
    }

    /// The residual hypergraph after the edges in `covered` were hit.
    pub fn residual(&self, covered: EdgeSet) -> ResidualView<'_> {
        ResidualView::new(self, covered)
    }

    /// Whether this is a 4-cycle: four vertices, four 2-edges, 2-regular and
    /// connected.
    pub fn is_c4(&self) -> bool {
        if self.n != 4 || self.m() != 4 || self.uniformity() != Some(2) {
            return false;
        }
        let s = self.summary();
        s.degrees.iter().all(|&d| d == 2) && s.components.len() == 1
    }
}

fn uniformity_of<'a>(mut edges: impl Iterator<Item = &'a [VertexId]>) -> Option<usize> {
    let k = edges.next()?.len();
    edges.all(|e| e.len() == k).then_some(k)
}

fn is_linear_edges(edges: &[&[VertexId]]) -> bool {
    for (i, a) in edges.iter().enumerate() {
        for b in &edges[i + 1..] {
            if sorted_intersection_len(a, b) >= 2 {
                return false;
            }
        }
    }
    true
}

pub(crate) fn sorted_intersection_len(a: &[VertexId], b: &[VertexId]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Degree census and structural flags of a (residual) hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureSummary {
    pub degrees: Vec<usize>,
    pub max_degree: usize,
    pub uniformity: Option<usize>,
    pub is_linear: bool,
    /// Active vertices grouped by edge-connectivity, each sorted, ordered by
    /// their smallest vertex.
    pub components: Vec<Vec<VertexId>>,
}

/// `H|S`: the base hypergraph with the edges of `covered` deleted.
///
/// Vertices keep their ids; a vertex with no uncovered edge is inactive.
#[derive(Clone)]
pub struct ResidualView<'a> {
    base: &'a Hypergraph,
    covered: EdgeSet,
    degrees: Vec<usize>,
}

impl fmt::Debug for ResidualView<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ResidualView")
            .field("covered", &self.covered)
            .field("degrees", &self.degrees)
            .finish()
    }
}

impl<'a> ResidualView<'a> {
    fn new(base: &'a Hypergraph, covered: EdgeSet) -> Self {
        let covered = covered & base.all_edges();
        let uncovered = base.all_edges() - covered;
        let degrees = base
            .incidence
            .iter()
            .map(|inc| (*inc & uncovered).len())
            .collect();
        ResidualView {
            base,
            covered,
            degrees,
        }
    }

    pub fn base(&self) -> &'a Hypergraph {
        self.base
    }

    pub fn covered(&self) -> EdgeSet {
        self.covered
    }

    pub fn uncovered(&self) -> EdgeSet {
        self.base.all_edges() - self.covered
    }

    pub fn edge_count(&self) -> usize {
        self.uncovered().len()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn is_active(&self, v: VertexId) -> bool {
        self.degrees[v] > 0
    }

    pub fn active_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.base.n).filter(|&v| self.degrees[v] > 0)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Uncovered edges containing `v`.
    pub fn incidence(&self, v: VertexId) -> EdgeSet {
        self.base.incidence[v] & self.uncovered()
    }

    pub fn uncovered_edges(&self) -> impl Iterator<Item = (EdgeId, &'a [VertexId])> + '_ {
        let base = self.base;
        self.uncovered().iter().map(move |e| (e, base.edge(e)))
    }

    pub fn uniformity(&self) -> Option<usize> {
        uniformity_of(self.uncovered_edges().map(|(_, e)| e))
    }

    /// Active vertices sharing an uncovered edge with `v`, ascending.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .incidence(v)
            .iter()
            .flat_map(|e| self.base.edge(e).iter().copied())
            .filter(|&u| u != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_linear(&self) -> bool {
        let edges: Vec<&[VertexId]> = self.uncovered_edges().map(|(_, e)| e).collect();
        is_linear_edges(&edges)
    }

    /// Components of the residual by edge-connectivity, as vertex lists.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.base.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (_, edge) in self.uncovered_edges() {
            let root = find(&mut parent, edge[0]);
            for &v in &edge[1..] {
                let r = find(&mut parent, v);
                if r != root {
                    parent[r] = root;
                }
            }
        }
        let mut by_root: Vec<Option<usize>> = vec![None; n];
        let mut comps: Vec<Vec<VertexId>> = Vec::new();
        for v in 0..n {
            if self.degrees[v] == 0 {
                continue;
            }
            let r = find(&mut parent, v);
            match by_root[r] {
                Some(i) => comps[i].push(v),
                None => {
                    by_root[r] = Some(comps.len());
                    comps.push(vec![v]);
                }
            }
        }
        comps
    }

    /// Uncovered edges that lie inside the vertex set `comp`.
    pub fn edges_within(&self, comp: &[VertexId]) -> EdgeSet {
        comp.iter()
            .fold(EdgeSet::EMPTY, |acc, &v| acc | self.incidence(v))
    }

    pub fn summary(&self) -> StructureSummary {
        StructureSummary {
            degrees: self.degrees.clone(),
            max_degree: self.max_degree(),
            uniformity: self.uniformity(),
            is_linear: self.is_linear(),
            components: self.components(),
        }
    }

    /// Materializes the residual as a standalone hypergraph on the same
    /// vertex ids. Returns it with the map from new edge ids to base edge ids.
    pub fn to_hypergraph(&self) -> (Hypergraph, Vec<EdgeId>) {
        let ids: Vec<EdgeId> = self.uncovered().iter().collect();
        let h = Hypergraph::new(self.base.n, ids.iter().map(|&e| self.base.edge(e)))
            .expect("subset of a valid hypergraph is valid");
        (h, ids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Hypergraph {
        Hypergraph::new(4, [[0, 1], [1, 2], [2, 3], [3, 0]]).unwrap()
    }

    fn h1() -> Hypergraph {
        Hypergraph::new(
            6,
            [&[0, 1, 2][..], &[3, 4, 5], &[0, 3], &[1, 4], &[2, 5]],
        )
        .unwrap()
    }

    #[test]
    fn duplicate_edges_collapse() {
        let h = Hypergraph::new(3, [[0, 1, 2], [2, 1, 0]]).unwrap();
        assert_eq!(h.m(), 1);
        assert_eq!(h.edge(0), &[0, 1, 2]);
        assert_eq!(h.multiplicity(), &[2]);
        assert_eq!(h.duplicates_removed(), 1);
    }

    #[test]
    fn repeated_vertex_inside_edge_is_dropped() {
        let h = Hypergraph::new(3, [vec![2, 0, 2]]).unwrap();
        assert_eq!(h.edge(0), &[0, 2]);
    }

    #[test]
    fn empty_edge_set() {
        let h = Hypergraph::new(2, Vec::<Vec<usize>>::new()).unwrap();
        assert_eq!(h.m(), 0);
        assert_eq!(h.uniformity(), None);
        assert_eq!(h.max_degree(), 0);
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            Hypergraph::new(3, [vec![0, 1], vec![]]),
            Err(HypergraphError::EmptyEdge { edge: 1 })
        );
        assert_eq!(
            Hypergraph::new(3, [vec![0, 5]]),
            Err(HypergraphError::IndexOutOfRange {
                edge: 0,
                vertex: 5,
                n: 3
            })
        );
        let many: Vec<Vec<usize>> = (0..65).map(|i| vec![i]).collect();
        assert_eq!(
            Hypergraph::new(65, many),
            Err(HypergraphError::TooManyEdges { m: 65 })
        );
    }

    #[test]
    fn c4_structure() {
        let h = c4();
        assert_eq!(h.m(), 4);
        let s = h.summary();
        assert_eq!(s.max_degree, 2);
        assert_eq!(s.uniformity, Some(2));
        assert!(s.is_linear);
        assert_eq!(s.components, vec![vec![0, 1, 2, 3]]);
        assert!(h.is_c4());
    }

    #[test]
    fn h1_structure() {
        let s = h1().summary();
        assert_eq!(s.max_degree, 2);
        assert_eq!(s.uniformity, None);
        assert!(s.is_linear);
        assert_eq!(s.components.len(), 1);
    }

    #[test]
    fn overlapping_edges_are_not_linear() {
        let h = Hypergraph::new(6, [[0, 1, 2], [3, 4, 5], [0, 1, 3], [2, 4, 5]]).unwrap();
        let s = h.summary();
        assert_eq!(s.max_degree, 2);
        assert_eq!(s.uniformity, Some(3));
        assert!(!s.is_linear);
        assert_eq!(s.components.len(), 1);
    }

    #[test]
    fn residual_of_c4() {
        let h = c4();
        let r = h.residual(EdgeSet::single(0));
        assert_eq!(r.edge_count(), 3);
        assert_eq!(r.active_vertices().count(), 4);
        assert_eq!(r.degrees(), &[1, 1, 2, 2]);

        let done = h.residual(h.all_edges());
        assert_eq!(done.edge_count(), 0);
        assert_eq!(done.active_vertices().count(), 0);
        assert!(done.components().is_empty());
    }

    #[test]
    fn residual_of_h1_after_matching_edge() {
        let h = h1();
        // {x1,y1} is edge 2
        let r = h.residual(EdgeSet::single(2));
        assert_eq!(r.degrees(), &[1, 2, 2, 1, 2, 2]);
    }

    #[test]
    fn residual_components_split() {
        let h = Hypergraph::new(5, [[0, 1], [1, 2], [3, 4]]).unwrap();
        assert_eq!(h.summary().components, vec![vec![0, 1, 2], vec![3, 4]]);
        let r = h.residual(EdgeSet::single(1));
        assert_eq!(r.components(), vec![vec![0, 1], vec![3, 4]]);
        assert_eq!(r.neighbors(1), vec![0]);
    }

    #[test]
    fn edge_set_ops() {
        let a: EdgeSet = [0, 3, 5].into_iter().collect();
        let b: EdgeSet = [3].into_iter().collect();
        assert!(b.is_subset(a));
        assert_eq!((a - b).iter().collect::<Vec<_>>(), vec![0, 5]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.first(), Some(0));
        assert_eq!(EdgeSet::full(64).len(), 64);
        assert!(!a.contains(64));
    }
}
