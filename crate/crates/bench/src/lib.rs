//! Fixtures shared by the benchmarks.

use robust_summary::{generate_instance, GeneratorSpec, Instance, MatroidSpec};

/// Random coverage instance under a partition matroid with `k` blocks of capacity 1.
pub fn coverage(n: usize, k: usize, seed: u64) -> Instance {
    let spec = GeneratorSpec::Coverage {
        n,
        universe: 2 * n,
        density: 4.0 / n as f64,
    };
    generate_instance(&spec, &MatroidSpec::Partition { blocks: k, cap: 1 }, seed).expect("valid fixture")
}

/// Random cut instance under a uniform matroid of rank `k`.
pub fn cut(n: usize, k: usize, seed: u64) -> Instance {
    let spec = GeneratorSpec::Cut {
        n,
        edge_prob: 0.2,
        wmin: 1.0,
        wmax: 3.0,
    };
    generate_instance(&spec, &MatroidSpec::Uniform { k }, seed).expect("valid fixture")
}
