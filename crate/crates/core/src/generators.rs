//! Seeded random instances and exhaustive enumeration of small ones.
//!
//! Randomness comes from PCG-64 (`rand_pcg::Pcg64`) seeded with
//! `seed_from_u64`, so an instance is fully determined by its [`GenSpec`].

use std::collections::HashSet;

use itertools::Itertools;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{sorted_intersection_len, Hypergraph, HypergraphError, VertexId, MAX_EDGES};

/// Number of fresh restarts before giving up on constrained sampling.
pub const RETRY_BUDGET: usize = 200;
/// Largest stream `enumerate_small` agrees to produce.
pub const ENUMERATION_LIMIT: u128 = 50_000_000;
/// Below this many candidate edges, unconstrained sampling draws directly
/// from the full list of `k`-subsets.
const DIRECT_SAMPLE_LIMIT: u128 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("unsatisfiable spec: {0}")]
    Unsatisfiable(String),
    #[error("enumeration would produce {count} hypergraphs (limit {max})")]
    LimitExceeded { count: u128, max: u128 },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    #[serde(default)]
    pub linear: bool,
    #[serde(default)]
    pub max_degree: Option<usize>,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(n: usize, m: usize, k: usize, seed: u64) -> Self {
        GenSpec {
            n,
            m,
            k,
            linear: false,
            max_degree: None,
            seed,
        }
    }

    /// Short tag used as a family name in reports.
    pub fn label(&self) -> String {
        let mut s = format!("random(n={},m={},k={}", self.n, self.m, self.k);
        if self.linear {
            s.push_str(",linear");
        }
        if let Some(d) = self.max_degree {
            s.push_str(&format!(",maxdeg={d}"));
        }
        s.push(')');
        s
    }
}

/// `C(n, k)`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

fn fits(edges: &[Vec<VertexId>], degree: &[usize], e: &[VertexId], spec: &GenSpec) -> bool {
    if let Some(d) = spec.max_degree {
        if e.iter().any(|&v| degree[v] >= d) {
            return false;
        }
    }
    !spec.linear || edges.iter().all(|f| sorted_intersection_len(f, e) <= 1)
}

/// `m` distinct `k`-edges on `n` vertices, sampled without replacement.
///
/// Linearity and a degree cap are enforced by rejection: edges are drawn one
/// at a time and discarded if they would break a constraint. A run that
/// stalls restarts with the same generator; after [`RETRY_BUDGET`] restarts
/// the spec is reported as unsatisfiable.
pub fn random_k_uniform(spec: &GenSpec) -> Result<Hypergraph, GenError> {
    let GenSpec { n, m, k, .. } = *spec;
    if k == 0 || k > n {
        return Err(GenError::Unsatisfiable(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let available = binomial(n, k);
    if m as u128 > available {
        return Err(GenError::Unsatisfiable(format!(
            "m={m} exceeds C({n},{k})={available}"
        )));
    }
    if m > MAX_EDGES {
        return Err(HypergraphError::TooManyEdges { m }.into());
    }
    let mut rng = Pcg64::seed_from_u64(spec.seed);
    let constrained = spec.linear || spec.max_degree.is_some();

    if !constrained && available <= DIRECT_SAMPLE_LIMIT {
        let all: Vec<Vec<VertexId>> = (0..n).combinations(k).collect();
        let picks = index::sample(&mut rng, all.len(), m);
        return Ok(Hypergraph::new(n, picks.iter().map(|i| &all[i]))?);
    }

    let draws_per_run = 64 * m + 1024;
    for _ in 0..RETRY_BUDGET {
        let mut edges: Vec<Vec<VertexId>> = Vec::with_capacity(m);
        let mut seen: HashSet<Vec<VertexId>> = HashSet::new();
        let mut degree = vec![0usize; n];
        for _ in 0..draws_per_run {
            if edges.len() == m {
                break;
            }
            let mut e = index::sample(&mut rng, n, k).into_vec();
            e.sort_unstable();
            if seen.contains(&e) || !fits(&edges, &degree, &e, spec) {
                continue;
            }
            for &v in &e {
                degree[v] += 1;
            }
            seen.insert(e.clone());
            edges.push(e);
        }
        if edges.len() == m {
            return Ok(Hypergraph::new(n, edges)?);
        }
    }
    Err(GenError::Unsatisfiable(format!(
        "no instance found for {} after {RETRY_BUDGET} restarts",
        spec.label()
    )))
}

/// `count` instances of mixed size: instance `i` uses seed `base_seed + i`,
/// which also fixes `n` in `k+1..=n_max` and `m` in `1..=m_max` (capped at
/// `C(n, k)`).
pub fn mixed_corpus(
    k: usize,
    count: usize,
    n_max: usize,
    m_max: usize,
    base_seed: u64,
) -> Result<Vec<(GenSpec, Hypergraph)>, GenError> {
    if n_max <= k || m_max == 0 {
        return Err(GenError::Unsatisfiable(format!(
            "need n_max > k and m_max >= 1, got n_max={n_max}, k={k}, m_max={m_max}"
        )));
    }
    (0..count as u64)
        .map(|i| {
            let seed = base_seed.wrapping_add(i);
            let mut rng = Pcg64::seed_from_u64(seed ^ 0x5eed_c0de);
            let n = rng.gen_range(k + 1..=n_max);
            let cap = binomial(n, k).min(m_max as u128) as usize;
            let m = rng.gen_range(1..=cap);
            let spec = GenSpec::new(n, m, k, seed);
            let h = random_k_uniform(&spec)?;
            Ok((spec, h))
        })
        .collect()
}

/// Every labeled `k`-uniform hypergraph on vertex set `0..n_max` with
/// `1..=m_max` distinct edges, in lexicographic order of the sorted edge
/// list. Smaller vertex counts appear as instances with isolated vertices.
pub fn enumerate_small(n_max: usize, m_max: usize, k: usize) -> Result<EnumerateSmall, GenError> {
    if k == 0 || k > n_max {
        return Err(GenError::Unsatisfiable(format!("need 1 <= k <= n, got k={k}, n={n_max}")));
    }
    let candidates: Vec<Vec<VertexId>> = (0..n_max).combinations(k).collect();
    let m_max = m_max.min(candidates.len()).min(MAX_EDGES);
    let count = enumeration_count(candidates.len(), m_max);
    if count > ENUMERATION_LIMIT {
        return Err(GenError::LimitExceeded {
            count,
            max: ENUMERATION_LIMIT,
        });
    }
    Ok(EnumerateSmall {
        n: n_max,
        m_max,
        candidates,
        stack: Vec::new(),
        started: false,
    })
}

/// Number of hypergraphs [`enumerate_small`] yields for `c` candidate
/// edges and at most `m_max` of them.
pub fn enumeration_count(c: usize, m_max: usize) -> u128 {
    (1..=m_max).map(|j| binomial(c, j)).fold(0u128, u128::saturating_add)
}

/// Depth-first walk over increasing index sequences; each visited
/// sequence is one hypergraph.
#[derive(Debug, Clone)]
pub struct EnumerateSmall {
    n: usize,
    m_max: usize,
    candidates: Vec<Vec<VertexId>>,
    stack: Vec<usize>,
    started: bool,
}

impl EnumerateSmall {
    fn advance(&mut self) -> bool {
        let c = self.candidates.len();
        if !self.started {
            self.started = true;
            if c == 0 || self.m_max == 0 {
                return false;
            }
            self.stack.push(0);
            return true;
        }
        // descend
        if let Some(&last) = self.stack.last() {
            if self.stack.len() < self.m_max && last + 1 < c {
                self.stack.push(last + 1);
                return true;
            }
        }
        // next sibling, backtracking as needed
        while let Some(last) = self.stack.pop() {
            if last + 1 < c {
                self.stack.push(last + 1);
                return true;
            }
        }
        false
    }
}

impl Iterator for EnumerateSmall {
    type Item = Hypergraph;

    fn next(&mut self) -> Option<Hypergraph> {
        if !self.advance() {
            return None;
        }
        let edges = self.stack.iter().map(|&i| &self.candidates[i]);
        Some(Hypergraph::new(self.n, edges).expect("candidate edges are valid"))
    }
}
