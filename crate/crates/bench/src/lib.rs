//! Shared instance builders for the benchmarks.

use rand::prelude::*;
use mpcode::{channel_rng, MultiplicityVector, Multipermutation, RelaxedMatrix};

/// A reproducible random point of the polytope built from `terms` random
/// vertices.
pub fn random_relaxed(r: &MultiplicityVector, terms: usize, seed: u64) -> RelaxedMatrix {
    let mut rng = channel_rng(seed, 0);
    let mut weights: Vec<f64> = (0..terms).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);

    let (m, n) = (r.num_symbols(), r.block_length());
    let mut flat = vec![0.0; m * n];
    for &w in &weights {
        let mut symbols = Multipermutation::sorted(r).symbols().to_vec();
        symbols.shuffle(&mut rng);
        for (j, &s) in symbols.iter().enumerate() {
            flat[(s - 1) * n + j] += w;
        }
    }
    RelaxedMatrix::from_flat(flat, r.clone()).expect("well shaped")
}
