//! Seeded samplers for uniform hypergraphs.
//!
//! Every sampler takes a `u64` seed and draws from `ChaCha8Rng::seed_from_u64(seed)`.
//! Independent streams for the same seed are obtained with `set_stream`.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::families::{binomial, k_subsets};
use crate::hypergraph::{Hypergraph, HypergraphError};

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `edges` distinct `m`-subsets of `0..n`, chosen uniformly without replacement.
pub fn random_uniform_with<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    edges: usize,
) -> Result<Hypergraph, HypergraphError> {
    if m < 2 || m > n {
        return Err(HypergraphError::InvalidCardinality(format!("need 2 <= m <= n, got n={n}, m={m}")));
    }
    let all = k_subsets(n, m);
    if edges > all.len() {
        return Err(HypergraphError::InvalidCardinality(format!(
            "{edges} edges requested but only {} {m}-subsets exist",
            all.len()
        )));
    }
    let mut picked: Vec<Vec<usize>> =
        index::sample(rng, all.len(), edges).into_iter().map(|k| all[k].clone()).collect();
    picked.sort_unstable();
    Ok(Hypergraph::from_canonical(n, picked))
}

pub fn random_uniform(n: usize, m: usize, edges: usize, seed: u64) -> Result<Hypergraph, HypergraphError> {
    random_uniform_with(&mut rng_for(seed, 0), n, m, edges)
}

/// Connected 3-uniform hypergraph with `n` drawn from `4..=12` and a
/// moderate edge count; rejection-samples until connected.
pub fn random_connected_3uniform(seed: u64) -> Hypergraph {
    let mut rng = rng_for(seed, 1);
    let n = rng.gen_range(4..=12usize);
    random_connected_uniform_with(&mut rng, n, 3)
}

pub fn random_connected_uniform_with<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Hypergraph {
    let total = binomial(n as u64, m as u64) as usize;
    let lo = (n - 1).div_ceil(m - 1).min(total);
    let hi = (2 * n).clamp(lo, total);
    loop {
        let k = rng.gen_range(lo..=hi);
        let g = random_uniform_with(rng, n, m, k).expect("parameters checked");
        if g.is_connected() {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a = random_uniform(8, 3, 12, 7).unwrap();
        let b = random_uniform(8, 3, 12, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edge_count(), 12);
        assert_eq!(a.uniformity(), Some(3));
        assert_ne!(a, random_uniform(8, 3, 12, 8).unwrap());
    }

    #[test]
    fn connected_sampler() {
        for seed in 0..20 {
            let g = random_connected_3uniform(seed);
            assert!(g.is_connected());
            assert!((4..=12).contains(&g.n()));
            assert_eq!(g.uniformity(), Some(3));
        }
    }

    #[test]
    fn rejects_too_many_edges() {
        assert!(random_uniform(4, 3, 5, 0).is_err());
    }
}
