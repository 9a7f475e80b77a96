use rand::seq::index;
use rand::Rng;

use super::EvalOptions;
use crate::hypergraph::{Hypergraph, VertexSubset};
use crate::random::rng_for;

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const EXHAUSTIVE_SUBSET_MAX_N: usize = 18;
pub const SAMPLED_SUBSETS: usize = 200;
pub const EXHAUSTIVE_PAIR_MAX_N: usize = 8;
pub const SAMPLED_PAIRS: usize = 2000;

const SUBSET_STREAM: u64 = 3;
const PAIR_STREAM: u64 = 4;

pub(crate) struct Instances<T> {
    pub items: Vec<T>,
    /// Seed used when the family was sampled.
    pub seed: Option<u64>,
}

/// Subsets `S` with `1 <= |S| <= n/2`: the explicit one, all of them for
/// small `n`, otherwise a seeded sample.
pub(crate) fn subsets(g: &Hypergraph, opts: &EvalOptions) -> Instances<VertexSubset> {
    if let Some(s) = &opts.subset {
        return Instances { items: vec![s.clone()], seed: None };
    }
    let n = g.n();
    let half = n / 2;
    if n <= EXHAUSTIVE_SUBSET_MAX_N {
        let items = (1u64..1 << n)
            .filter(|m| m.count_ones() as usize <= half)
            .map(VertexSubset::from_mask)
            .collect();
        return Instances { items, seed: None };
    }
    let mut rng = rng_for(opts.seed, SUBSET_STREAM);
    let items = (0..SAMPLED_SUBSETS)
        .map(|_| {
            let k = rng.gen_range(1..=half);
            VertexSubset::new(n, index::sample(&mut rng, n, k)).expect("indices below n")
        })
        .collect();
    Instances { items, seed: Some(opts.seed) }
}

/// Pairs of nonempty proper subsets with `V1 != V2` and `V1 != V - V2`.
pub(crate) fn pairs(g: &Hypergraph, opts: &EvalOptions) -> Instances<(VertexSubset, VertexSubset)> {
    if let Some(p) = &opts.pair {
        return Instances { items: vec![p.clone()], seed: None };
    }
    let n = g.n();
    if n < 2 {
        return Instances { items: Vec::new(), seed: None };
    }
    let full = (1u64 << n.min(63)) - 1;
    if n <= EXHAUSTIVE_PAIR_MAX_N {
        let mut items = Vec::new();
        for a in 1..full {
            for b in 1..full {
                if a != b && a != full & !b {
                    items.push((VertexSubset::from_mask(a), VertexSubset::from_mask(b)));
                }
            }
        }
        return Instances { items, seed: None };
    }
    let mut rng = rng_for(opts.seed, PAIR_STREAM);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
        let k = rng.gen_range(1..n);
        VertexSubset::new(n, index::sample(rng, n, k)).expect("indices below n")
    };
    let mut items = Vec::with_capacity(SAMPLED_PAIRS);
    while items.len() < SAMPLED_PAIRS {
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        if a != b && a != b.complement(n) {
            items.push((a, b));
        }
    }
    Instances { items, seed: Some(opts.seed) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{bowtie, complete_uniform};

    #[test]
    fn exhaustive_counts() {
        let g = bowtie();
        // n = 5: subsets of size 1 or 2.
        assert_eq!(subsets(&g, &EvalOptions::default()).items.len(), 5 + 10);
        // 30 nonempty proper subsets; exclude V2 = V1 and V2 = complement of V1.
        assert_eq!(pairs(&g, &EvalOptions::default()).items.len(), 30 * 28);
    }

    #[test]
    fn sampling_is_seeded() {
        let g = complete_uniform(20, 2).unwrap();
        let a = subsets(&g, &EvalOptions::default());
        let b = subsets(&g, &EvalOptions::default());
        assert_eq!(a.items, b.items);
        assert_eq!(a.items.len(), SAMPLED_SUBSETS);
        assert_eq!(a.seed, Some(DEFAULT_SEED));
        assert!(a.items.iter().all(|s| !s.is_empty() && s.len() <= 10));
        let p = pairs(&g, &EvalOptions::default());
        assert_eq!(p.items.len(), SAMPLED_PAIRS);
    }
}
