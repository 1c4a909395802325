//! Fixed benchmark inputs, shared by the criterion benches and their smoke
//! test so both measure the same instances.

use tgame_core::generators::{mixed_corpus, random_k_uniform, GenSpec};
use tgame_core::verify::Instance;
use tgame_core::Hypergraph;

/// Sparse random 3-uniform instance with `m` edges on `3m` vertices.
pub fn sparse3(m: usize, seed: u64) -> Hypergraph {
    random_k_uniform(&GenSpec::new(3 * m, m, 3, seed)).expect("sparse specs are satisfiable")
}

/// Dense random 3-uniform instance: `m` edges on 10 vertices.
pub fn dense3(m: usize, seed: u64) -> Hypergraph {
    random_k_uniform(&GenSpec::new(10, m, 3, seed)).expect("C(10,3) = 120 edges available")
}

/// The small sweep corpus: 40 mixed 3-uniform instances.
pub fn sweep_corpus() -> Vec<Instance> {
    mixed_corpus(3, 40, 10, 10, 77)
        .expect("corpus parameters are satisfiable")
        .into_iter()
        .map(|(s, h)| Instance::new(s.label(), Some(s.seed), h))
        .collect()
}

/// Edge counts swept by the solver bench.
pub const SOLVER_SIZES: [usize; 3] = [12, 16, 20];
