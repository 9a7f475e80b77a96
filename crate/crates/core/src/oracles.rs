//! Exact brute-force oracles: Cheeger constants, weak vertex connectivity and
//! strong chromatic number.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError, VertexSubset};

pub const CHEEGER_MAX_N: usize = 24;
pub const WEAK_CUT_MAX_N: usize = 20;
pub const COLORING_MAX_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} is limited to n <= {limit}, got n = {n}")]
    TooLarge { what: &'static str, n: usize, limit: usize },
    #[error("hypergraph is disconnected")]
    Disconnected,
    #[error("every pair of vertices is adjacent, so no weak vertex cut exists")]
    NoCutExists,
    #[error("a single-vertex hypergraph has no proper nonempty subset")]
    SingleVertex,
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Counting,
    Volume,
}

impl std::str::FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "counting" => Ok(Measure::Counting),
            "volume" => Ok(Measure::Volume),
            _ => Err(format!("unknown measure '{s}' (expected counting or volume)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheegerResult {
    pub value: f64,
    /// `|∂S|`.
    pub boundary: u64,
    /// `min(|S|, |V∖S|)` or `min(vol S, vol V∖S)`.
    pub denominator: u64,
    pub witness: VertexSubset,
    pub measure: Measure,
}

#[derive(Clone, Copy)]
struct Candidate {
    boundary: u64,
    denom: u64,
    witness: u64,
}

/// `A < B` iff the lowest element of the symmetric difference lies in `A`.
fn lex_cmp(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let low = (a ^ b).trailing_zeros();
    if a >> low & 1 == 1 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn candidate_cmp(x: &Candidate, y: &Candidate) -> Ordering {
    ((x.boundary as u128) * (y.denom as u128))
        .cmp(&((y.boundary as u128) * (x.denom as u128)))
        .then(x.witness.count_ones().cmp(&y.witness.count_ones()))
        .then(lex_cmp(x.witness, y.witness))
}

fn mask_volume(mask: u64, deg: &[u64]) -> u64 {
    let mut m = mask;
    let mut s = 0;
    while m != 0 {
        s += deg[m.trailing_zeros() as usize];
        m &= m - 1;
    }
    s
}

/// Chooses the smaller side under the measure; ties by cardinality, then lexicographic.
fn witness_side(s: u64, full: u64, measure: Measure, deg: &[u64]) -> (u64, u64) {
    let c = full & !s;
    let (ms, mc) = match measure {
        Measure::Counting => (s.count_ones() as u64, c.count_ones() as u64),
        Measure::Volume => (mask_volume(s, deg), mask_volume(c, deg)),
    };
    let pick_s = match ms.cmp(&mc) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => {
            s.count_ones().cmp(&c.count_ones()).then(lex_cmp(s, c)) == Ordering::Less
        }
    };
    if pick_s {
        (s, ms)
    } else {
        (c, mc)
    }
}

/// Exact Cheeger constant over all nonempty proper subsets.
///
/// Subsets containing vertex 0 are walked in Gray-code order so that the
/// boundary count changes incrementally; the walk is split into chunks that
/// run in parallel and are merged by the same total order.
pub fn cheeger(g: &Hypergraph, measure: Measure) -> Result<CheegerResult, OracleError> {
    let n = g.n();
    if n > CHEEGER_MAX_N {
        return Err(OracleError::TooLarge { what: "cheeger", n, limit: CHEEGER_MAX_N });
    }
    if n == 1 {
        return Err(OracleError::SingleVertex);
    }
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }

    let deg: Vec<u64> = g.degrees().iter().map(|&d| d as u64).collect();
    let full: u64 = (1u64 << n) - 1;
    let edge_masks: Vec<(u64, u32)> =
        g.edges().iter().map(|e| (e.iter().fold(0u64, |m, &v| m | 1 << v), e.len() as u32)).collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, e) in g.edges().iter().enumerate() {
        for &v in e {
            incident[v].push(k);
        }
    }

    let total: u64 = 1 << (n - 1);
    let chunk: u64 = (total / 64).max(1 << 10).min(total);
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();

    let best = starts
        .par_iter()
        .filter_map(|&start| {
            let end = (start + chunk).min(total);
            let gray = |k: u64| k ^ (k >> 1);
            let mut s = 1 | gray(start) << 1;
            let mut inside: Vec<u32> =
                edge_masks.iter().map(|&(m, _)| (m & s).count_ones()).collect();
            let mut boundary: u64 = edge_masks
                .iter()
                .zip(&inside)
                .filter(|(&(_, len), &c)| c > 0 && c < len)
                .count() as u64;
            let mut local: Option<Candidate> = None;
            for k in start..end {
                if k > start {
                    let v = k.trailing_zeros() as usize + 1;
                    let adding = s >> v & 1 == 0;
                    s ^= 1 << v;
                    for &e in &incident[v] {
                        let len = edge_masks[e].1;
                        let before = inside[e] > 0 && inside[e] < len;
                        if adding {
                            inside[e] += 1;
                        } else {
                            inside[e] -= 1;
                        }
                        let after = inside[e] > 0 && inside[e] < len;
                        match (before, after) {
                            (false, true) => boundary += 1,
                            (true, false) => boundary -= 1,
                            _ => {}
                        }
                    }
                }
                if s == full {
                    continue;
                }
                let (witness, denom) = witness_side(s, full, measure, &deg);
                let cand = Candidate { boundary, denom, witness };
                if local.as_ref().is_none_or(|b| candidate_cmp(&cand, b) == Ordering::Less) {
                    local = Some(cand);
                }
            }
            local
        })
        .reduce_with(|a, b| if candidate_cmp(&b, &a) == Ordering::Less { b } else { a })
        .expect("n >= 2 gives at least one proper subset");

    Ok(CheegerResult {
        value: best.boundary as f64 / best.denom as f64,
        boundary: best.boundary,
        denominator: best.denom,
        witness: VertexSubset::from_mask(best.witness),
        measure,
    })
}

/// Ratio of a given subset under a measure, as `(|∂S|, denominator)`.
pub fn cheeger_ratio(g: &Hypergraph, s: &VertexSubset, measure: Measure) -> (u64, u64) {
    let boundary = g.edge_boundary(s).len() as u64;
    let comp = s.complement(g.n());
    let denom = match measure {
        Measure::Counting => s.len().min(comp.len()) as u64,
        Measure::Volume => g.volume(s).min(g.volume(&comp)) as u64,
    };
    (boundary, denom)
}

/// Remainder of a weak deletion: `W` is removed from the vertex set and from
/// every edge, edges left with fewer than two vertices are dropped and
/// coinciding shrunken edges merge. Vertices are relabelled densely; `kept`
/// maps new labels to old ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakDeletion {
    pub kept: Vec<usize>,
    pub graph: Hypergraph,
}

pub fn weak_delete(g: &Hypergraph, w: &VertexSubset) -> Result<WeakDeletion, OracleError> {
    let n = g.n();
    let kept: Vec<usize> = (0..n).filter(|&v| !w.contains(v)).collect();
    if kept.is_empty() {
        return Err(OracleError::Hypergraph(HypergraphError::NoVertices));
    }
    let mut relabel = vec![usize::MAX; n];
    for (new, &old) in kept.iter().enumerate() {
        relabel[old] = new;
    }
    let mut edges: Vec<Vec<usize>> = g
        .edges()
        .iter()
        .map(|e| e.iter().filter(|&&v| relabel[v] != usize::MAX).map(|&v| relabel[v]).collect::<Vec<_>>())
        .filter(|e: &Vec<usize>| e.len() >= 2)
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(WeakDeletion { graph: Hypergraph::new(kept.len(), edges)?, kept })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakCut {
    pub kappa: usize,
    pub witness: VertexSubset,
}

/// Minimum weak vertex cut; the first cut found in (size, lexicographic) order.
pub fn weak_vertex_connectivity(g: &Hypergraph) -> Result<WeakCut, OracleError> {
    let n = g.n();
    if n > WEAK_CUT_MAX_N {
        return Err(OracleError::TooLarge { what: "weak vertex connectivity", n, limit: WEAK_CUT_MAX_N });
    }
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    if !g.has_nonadjacent_pair() {
        return Err(OracleError::NoCutExists);
    }
    let edge_masks: Vec<u64> =
        g.edges().iter().map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v)).collect();
    let full: u64 = (1u64 << n) - 1;

    let disconnects = |w: u64| -> bool {
        let rest = full & !w;
        if rest.count_ones() < 2 {
            return false;
        }
        // Flood fill over shrunken edges with at least two survivors.
        let start = rest & rest.wrapping_neg();
        let mut seen = start;
        let mut frontier = start;
        while frontier != 0 {
            let mut next = 0;
            for &em in &edge_masks {
                let surv = em & rest;
                if surv & frontier != 0 && surv.count_ones() >= 2 {
                    next |= surv;
                }
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen != rest
    };

    for k in 1..=n - 2 {
        for combo in crate::families::k_subsets(n, k) {
            let w = combo.iter().fold(0u64, |m, &v| m | 1 << v);
            if disconnects(w) {
                return Ok(WeakCut { kappa: k, witness: VertexSubset::from_mask(w) });
            }
        }
    }
    unreachable!("deleting all but a nonadjacent pair always disconnects")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoringResult {
    pub chi: usize,
    pub assignment: Vec<usize>,
}

fn max_clique(adj: &[u64]) -> usize {
    fn expand(adj: &[u64], size: usize, mut cand: u64, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        while cand != 0 {
            if size + cand.count_ones() as usize <= *best {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= !(1 << v);
            expand(adj, size + 1, cand & adj[v], best);
        }
    }
    let mut best = 0;
    expand(adj, 0, (1u64 << adj.len()) - 1, &mut best);
    best
}

fn try_color(adj: &[u64], order: &[usize], k: usize, colors: &mut [usize], pos: usize, used: usize) -> bool {
    if pos == order.len() {
        return true;
    }
    let v = order[pos];
    for c in 0..k.min(used + 1) {
        let clash = (0..pos).any(|p| {
            let u = order[p];
            adj[v] >> u & 1 == 1 && colors[u] == c
        });
        if clash {
            continue;
        }
        colors[v] = c;
        if try_color(adj, order, k, colors, pos + 1, used.max(c + 1)) {
            return true;
        }
    }
    colors[v] = usize::MAX;
    false
}

/// Exact strong chromatic number by backtracking on the underlying adjacency graph.
pub fn strong_chromatic_number(g: &Hypergraph) -> Result<ColoringResult, OracleError> {
    let n = g.n();
    if n > COLORING_MAX_N {
        return Err(OracleError::TooLarge { what: "strong chromatic number", n, limit: COLORING_MAX_N });
    }
    let adj: Vec<u64> =
        (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u)).collect();
    let lower = max_clique(&adj).max(1);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].count_ones()), v));
    for k in lower..=n {
        let mut colors = vec![usize::MAX; n];
        if try_color(&adj, &order, k, &mut colors, 0, 0) {
            let result = ColoringResult { chi: k, assignment: colors };
            debug_assert!(verify_coloring(g, &result.assignment));
            return Ok(result);
        }
    }
    unreachable!("n colours always suffice")
}

/// Independent check that adjacent vertices receive different colours.
pub fn verify_coloring(g: &Hypergraph, assignment: &[usize]) -> bool {
    assignment.len() == g.n()
        && g.edges().iter().all(|e| {
            e.iter().enumerate().all(|(a, &i)| e[a + 1..].iter().all(|&j| assignment[i] != assignment[j]))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{bowtie, chain, complete_uniform, cube_hypergraph};

    fn brute_cheeger(g: &Hypergraph, measure: Measure) -> (u64, u64) {
        let n = g.n();
        let mut best = (u64::MAX, 1u64);
        for mask in 1..(1u64 << n) - 1 {
            let s = VertexSubset::from_mask(mask);
            let (b, d) = cheeger_ratio(g, &s, measure);
            if (b as u128) * (best.1 as u128) < (best.0 as u128) * (d as u128) {
                best = (b, d);
            }
        }
        best
    }

    #[test]
    fn cheeger_examples() {
        let k33 = complete_uniform(3, 3).unwrap();
        let r = cheeger(&k33, Measure::Counting).unwrap();
        assert_eq!((r.boundary, r.denominator), (1, 1));
        assert_eq!(r.witness.as_slice(), &[0]);

        let r = cheeger(&bowtie(), Measure::Counting).unwrap();
        assert_eq!(r.value, 0.5);
        assert_eq!(r.witness.as_slice(), &[0, 1]);
        let r = cheeger(&bowtie(), Measure::Volume).unwrap();
        assert_eq!(r.value, 0.5);

        let k34 = complete_uniform(4, 3).unwrap();
        assert_eq!(cheeger(&k34, Measure::Counting).unwrap().value, 2.0);
        // The two-vertex split beats singletons: 4 / min(6, 6).
        let r = cheeger(&k34, Measure::Volume).unwrap();
        assert_eq!((r.boundary, r.denominator), (4, 6));
        assert_eq!(r.witness.as_slice(), &[0, 1]);
    }

    #[test]
    fn cheeger_matches_brute_force() {
        let mut graphs = vec![cube_hypergraph(2, 3).unwrap(), chain(3).unwrap()];
        graphs.extend((0..8).map(crate::random::random_connected_3uniform));
        for g in graphs {
            for measure in [Measure::Counting, Measure::Volume] {
                let r = cheeger(&g, measure).unwrap();
                let (b, d) = brute_cheeger(&g, measure);
                assert_eq!(r.boundary as u128 * d as u128, b as u128 * r.denominator as u128);
                assert_eq!(cheeger_ratio(&g, &r.witness, measure), (r.boundary, r.denominator));
                if measure == Measure::Counting {
                    assert!(r.witness.len() * 2 <= g.n());
                }
            }
        }
    }

    #[test]
    fn cheeger_errors() {
        let two = Hypergraph::new(6, [vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(cheeger(&two, Measure::Counting).unwrap_err(), OracleError::Disconnected);
        let dot = Hypergraph::empty(1).unwrap();
        assert_eq!(cheeger(&dot, Measure::Counting).unwrap_err(), OracleError::SingleVertex);
        let big = Hypergraph::new(25, (0..24).map(|i| vec![i, i + 1])).unwrap();
        assert!(matches!(cheeger(&big, Measure::Counting), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn weak_connectivity_examples() {
        let r = weak_vertex_connectivity(&bowtie()).unwrap();
        assert_eq!((r.kappa, r.witness.as_slice()), (1, &[2][..]));
        assert_eq!(
            weak_vertex_connectivity(&complete_uniform(4, 3).unwrap()).unwrap_err(),
            OracleError::NoCutExists
        );
        assert_eq!(weak_vertex_connectivity(&chain(3).unwrap()).unwrap().kappa, 1);
        // Q(2,3) is the 3x3 rook graph; removing a vertex's row and column neighbours isolates it.
        let q = cube_hypergraph(2, 3).unwrap();
        let r = weak_vertex_connectivity(&q).unwrap();
        assert!(r.kappa >= 2);
    }

    #[test]
    fn weak_deletion_rules() {
        let b = bowtie();
        let none = weak_delete(&b, &VertexSubset::default()).unwrap();
        assert_eq!(none.graph, b);
        let cut = weak_delete(&b, &VertexSubset::new(5, [2]).unwrap()).unwrap();
        assert_eq!(cut.graph.edges(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(cut.kept, vec![0, 1, 3, 4]);
        // {0,1,2} and {0,1,3} both shrink to {0,1} once 2 and 3 are gone.
        let g = Hypergraph::new(4, [vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        let d = weak_delete(&g, &VertexSubset::new(4, [2, 3]).unwrap()).unwrap();
        assert_eq!(d.graph.edges(), &[vec![0, 1]]);
    }

    #[test]
    fn coloring_examples() {
        for (g, want) in [
            (complete_uniform(3, 3).unwrap(), 3),
            (bowtie(), 3),
            (Hypergraph::new(6, [vec![0, 1, 2], vec![3, 4, 5]]).unwrap(), 3),
            (complete_uniform(4, 3).unwrap(), 4),
            (Hypergraph::empty(3).unwrap(), 1),
            (cube_hypergraph(2, 2).unwrap(), 2),
        ] {
            let r = strong_chromatic_number(&g).unwrap();
            assert_eq!(r.chi, want);
            assert!(verify_coloring(&g, &r.assignment));
            assert!(r.assignment.iter().all(|&c| c < want));
        }
    }

    #[test]
    fn coloring_is_minimal_on_odd_cycle() {
        let c5 = Hypergraph::new(5, (0..5).map(|i| vec![i, (i + 1) % 5])).unwrap();
        assert_eq!(strong_chromatic_number(&c5).unwrap().chi, 3);
    }
}
