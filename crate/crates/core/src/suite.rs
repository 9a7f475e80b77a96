//! The fixed family suite the audits and acceptance checks run over.

use crate::families::{bowtie, chain, complete_bipartite_uniform, complete_uniform, cube_hypergraph};
use crate::hypergraph::Hypergraph;
use crate::random::random_connected_3uniform;

#[derive(Debug, Clone)]
pub struct SuiteMember {
    pub name: String,
    pub graph: Hypergraph,
}

/// Base seed for the random members; member `k` uses `RANDOM_SEED_BASE + k`.
pub const RANDOM_SEED_BASE: u64 = 20_240;
pub const RANDOM_MEMBERS: usize = 50;

pub fn family_suite() -> Vec<SuiteMember> {
    let mut out = Vec::new();
    let mut push = |name: String, graph: Hypergraph| out.push(SuiteMember { name, graph });
    for n in 3..=8 {
        push(format!("K3_{n}"), complete_uniform(n, 3).unwrap());
    }
    for (a, b) in [(1, 2), (2, 2), (2, 3), (3, 3)] {
        push(format!("K3_{a},{b}"), complete_bipartite_uniform(a, b, 3).unwrap());
    }
    push("Q(2,3)".into(), cube_hypergraph(2, 3).unwrap());
    push("bowtie".into(), bowtie());
    for k in 1..=4 {
        push(format!("chain{k}"), chain(k).unwrap());
    }
    for k in 0..RANDOM_MEMBERS {
        let seed = RANDOM_SEED_BASE + k as u64;
        push(format!("random{seed}"), random_connected_3uniform(seed));
    }
    out
}
