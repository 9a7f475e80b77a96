//! Immutable hypergraph model and the structural/metric queries built on it.
//!
//! Vertices are dense indices `0..n`. Every edge is stored as a sorted vertex
//! list and the edge list itself is kept in lexicographic order, so two
//! hypergraphs with the same vertex count and edge set compare equal no
//! matter how they were built.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("hypergraph needs at least one vertex")]
    NoVertices,
    #[error("edge {edge} has {size} distinct vertices; edges need at least 2")]
    EdgeTooSmall { edge: usize, size: usize },
    #[error("vertex {vertex} is out of range for a hypergraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {edge} duplicates an earlier edge")]
    DuplicateEdge { edge: usize },
    #[error("invalid cardinality: {0}")]
    InvalidCardinality(String),
    #[error("hypergraph is not uniform")]
    NotUniform,
    #[error("uniform cardinalities differ ({left} vs {right})")]
    CardinalityMismatch { left: usize, right: usize },
    #[error("{vertices} vertices exceed the vertex budget of {budget}")]
    SizeOverflow { vertices: u128, budget: usize },
    #[error("hypergraph is disconnected")]
    Disconnected,
    #[error("vertex subset must be nonempty")]
    EmptySubset,
}

/// Largest vertex count the generators and products will build.
pub const VERTEX_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph", into = "RawHypergraph")]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
    degrees: Vec<usize>,
    neighbors: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawHypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = HypergraphError;

    fn try_from(raw: RawHypergraph) -> Result<Self, Self::Error> {
        Hypergraph::new(raw.n, raw.edges)
    }
}

impl From<Hypergraph> for RawHypergraph {
    fn from(g: Hypergraph) -> Self {
        RawHypergraph { n: g.n, edges: g.edges }
    }
}

impl Hypergraph {
    /// Validates and builds a hypergraph. Each edge is read as a vertex set,
    /// so repeated vertices inside one edge collapse before the size check.
    pub fn new<I, E>(n: usize, edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = usize>,
    {
        if n == 0 {
            return Err(HypergraphError::NoVertices);
        }
        let mut seen = BTreeSet::new();
        for (idx, edge) in edges.into_iter().enumerate() {
            let set: BTreeSet<usize> = edge.into_iter().collect();
            if let Some(&v) = set.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange { vertex: v, n });
            }
            if set.len() < 2 {
                return Err(HypergraphError::EdgeTooSmall { edge: idx, size: set.len() });
            }
            let sorted: Vec<usize> = set.into_iter().collect();
            if !seen.insert(sorted) {
                return Err(HypergraphError::DuplicateEdge { edge: idx });
            }
        }
        Ok(Self::from_canonical(n, seen.into_iter().collect()))
    }

    /// `edges` must already be sorted, deduplicated and valid.
    pub(crate) fn from_canonical(n: usize, edges: Vec<Vec<usize>>) -> Self {
        let mut degrees = vec![0; n];
        let mut nbr: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for e in &edges {
            for &v in e {
                degrees[v] += 1;
                nbr[v].extend(e.iter().copied().filter(|&u| u != v));
            }
        }
        let neighbors = nbr.into_iter().map(|s| s.into_iter().collect()).collect();
        Hypergraph { n, edges, degrees, neighbors }
    }

    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Result<Self, HypergraphError> {
        Self::new(n, Vec::<Vec<usize>>::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Sorted list of vertices sharing at least one edge with `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.neighbors[i].binary_search(&j).is_ok()
    }

    pub fn rank(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn corank(&self) -> usize {
        self.edges.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Common edge cardinality, when there is at least one edge and all agree.
    pub fn uniformity(&self) -> Option<usize> {
        let r = self.rank();
        (r > 0 && r == self.corank()).then_some(r)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.degrees.iter().copied().min().unwrap_or(0)
    }

    pub fn is_regular(&self) -> bool {
        self.degrees.iter().all(|&d| d == self.degrees[0])
    }

    pub fn has_isolated_vertex(&self) -> bool {
        self.degrees.contains(&0)
    }

    /// True when some pair of distinct vertices shares no edge.
    pub fn has_nonadjacent_pair(&self) -> bool {
        self.neighbors.iter().any(|nb| nb.len() + 1 < self.n)
    }

    /// Per-pair edge counts `d_ij` as a dense row-major matrix.
    pub fn codegrees(&self) -> Vec<Vec<usize>> {
        let mut c = vec![vec![0; self.n]; self.n];
        for e in &self.edges {
            for (a, &i) in e.iter().enumerate() {
                for &j in &e[a + 1..] {
                    c[i][j] += 1;
                    c[j][i] += 1;
                }
            }
        }
        c
    }

    pub fn summary(&self) -> StructuralSummary {
        StructuralSummary {
            rank: self.rank(),
            corank: self.corank(),
            degrees: self.degrees.clone(),
            codegrees: self.codegrees(),
            is_uniform: self.uniformity().is_some(),
            uniform_m: self.uniformity(),
        }
    }

    fn check_vertex(&self, v: usize) -> Result<(), HypergraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(HypergraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// BFS layers from a set of sources; `None` marks unreachable vertices.
    fn bfs(&self, sources: impl IntoIterator<Item = usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            for &y in &self.neighbors[x] {
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Shortest path length between `i` and `j`; `Ok(None)` when unreachable.
    pub fn distance(&self, i: usize, j: usize) -> Result<Option<usize>, HypergraphError> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        Ok(self.bfs([i])[j])
    }

    pub fn distances(&self) -> DistanceMatrix {
        let rows = (0..self.n).map(|s| self.bfs([s])).collect();
        DistanceMatrix { rows }
    }

    pub fn diameter(&self) -> Result<usize, HypergraphError> {
        self.distances().diameter().ok_or(HypergraphError::Disconnected)
    }

    /// Minimum distance between two vertex sets; `Ok(None)` when no pair is connected.
    pub fn set_distance(
        &self,
        s1: &VertexSubset,
        s2: &VertexSubset,
    ) -> Result<Option<usize>, HypergraphError> {
        if s1.is_empty() || s2.is_empty() {
            return Err(HypergraphError::EmptySubset);
        }
        self.check_subset(s1)?;
        self.check_subset(s2)?;
        let dist = self.bfs(s1.iter());
        Ok(s2.iter().filter_map(|v| dist[v]).min())
    }

    fn check_subset(&self, s: &VertexSubset) -> Result<(), HypergraphError> {
        match s.iter().last() {
            Some(v) => self.check_vertex(v),
            None => Ok(()),
        }
    }

    /// Indices (into [`Hypergraph::edges`]) of edges meeting both `s` and its complement.
    pub fn edge_boundary(&self, s: &VertexSubset) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| {
                let inside = e.iter().filter(|&&v| s.contains(v)).count();
                inside > 0 && inside < e.len()
            })
            .map(|(idx, _)| idx)
            .collect()
    }

    /// Vertices outside `s` adjacent to some vertex of `s`.
    pub fn vertex_boundary(&self, s: &VertexSubset) -> VertexSubset {
        let members: BTreeSet<usize> = s
            .iter()
            .flat_map(|v| self.neighbors[v].iter().copied())
            .filter(|&u| !s.contains(u))
            .collect();
        VertexSubset { members: members.into_iter().collect() }
    }

    /// Sum of degrees over `s`.
    pub fn volume(&self, s: &VertexSubset) -> usize {
        s.iter().map(|v| self.degrees[v]).sum()
    }

    pub fn total_volume(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut comp = vec![s];
            label[s] = id;
            let mut head = 0;
            while head < comp.len() {
                let x = comp[head];
                head += 1;
                for &y in &self.neighbors[x] {
                    if label[y] == usize::MAX {
                        label[y] = id;
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn component_count(&self) -> usize {
        self.connected_components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Two-colourability of the underlying adjacency graph.
    pub fn is_bipartite_underlying(&self) -> bool {
        let mut side = vec![None; self.n];
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                let sx = side[x].unwrap();
                for &y in &self.neighbors[x] {
                    match side[y] {
                        None => {
                            side[y] = Some(!sx);
                            queue.push_back(y);
                        }
                        Some(sy) if sy == sx => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(n={}, edges=[", self.n)?;
        for (k, e) in self.edges.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e:?}")?;
        }
        f.write_str("])")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralSummary {
    pub rank: usize,
    pub corank: usize,
    pub degrees: Vec<usize>,
    pub codegrees: Vec<Vec<usize>>,
    pub is_uniform: bool,
    pub uniform_m: Option<usize>,
}

/// All-pairs shortest path lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    rows: Vec<Vec<Option<usize>>>,
}

impl DistanceMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<usize> {
        self.rows[i][j]
    }

    /// `None` when some pair is unreachable.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for row in &self.rows {
            for d in row {
                best = best.max((*d)?);
            }
        }
        Some(best)
    }
}

/// A set of vertex indices, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSubset {
    members: Vec<usize>,
}

impl VertexSubset {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self, HypergraphError> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&v) = set.iter().find(|&&v| v >= n) {
            return Err(HypergraphError::VertexOutOfRange { vertex: v, n });
        }
        Ok(VertexSubset { members: set.into_iter().collect() })
    }

    pub fn from_mask(mask: u64) -> Self {
        let members = (0..64).filter(|b| mask >> b & 1 == 1).collect();
        VertexSubset { members }
    }

    /// Bitmask form; only meaningful when every member is below 64.
    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &v| m | 1 << v)
    }

    pub fn full(n: usize) -> Self {
        VertexSubset { members: (0..n).collect() }
    }

    pub fn complement(&self, n: usize) -> Self {
        VertexSubset { members: (0..n).filter(|&v| !self.contains(v)).collect() }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bowtie() -> Hypergraph {
        Hypergraph::new(5, [vec![0, 1, 2], vec![2, 3, 4]]).unwrap()
    }

    fn subset(n: usize, v: &[usize]) -> VertexSubset {
        VertexSubset::new(n, v.iter().copied()).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            Hypergraph::new(3, [vec![0]]),
            Err(HypergraphError::EdgeTooSmall { edge: 0, size: 1 })
        ));
        assert!(matches!(
            Hypergraph::new(3, [vec![1, 1]]),
            Err(HypergraphError::EdgeTooSmall { .. })
        ));
        assert!(matches!(
            Hypergraph::new(3, [vec![0, 3]]),
            Err(HypergraphError::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert!(matches!(
            Hypergraph::new(3, [vec![0, 1], vec![1, 0]]),
            Err(HypergraphError::DuplicateEdge { edge: 1 })
        ));
        assert!(matches!(Hypergraph::empty(0), Err(HypergraphError::NoVertices)));
    }

    #[test]
    fn single_triple() {
        let g = Hypergraph::new(3, [vec![2, 0, 1]]).unwrap();
        assert_eq!(g.edges(), &[vec![0, 1, 2]]);
        assert_eq!(g.degrees(), &[1, 1, 1]);
        assert_eq!(g.uniformity(), Some(3));
        assert_eq!(g.distance(0, 2).unwrap(), Some(1));
        assert_eq!(g.diameter().unwrap(), 1);
    }

    #[test]
    fn bowtie_metrics() {
        let g = bowtie();
        assert_eq!(g.distance(0, 3).unwrap(), Some(2));
        assert_eq!(g.diameter().unwrap(), 2);
        assert_eq!(g.set_distance(&subset(5, &[0]), &subset(5, &[4])).unwrap(), Some(2));
        assert_eq!(g.set_distance(&subset(5, &[0, 1]), &subset(5, &[2])).unwrap(), Some(1));
        assert_eq!(g.set_distance(&subset(5, &[0, 1]), &subset(5, &[1, 3])).unwrap(), Some(0));
        assert_eq!(
            g.set_distance(&subset(5, &[]), &subset(5, &[1])),
            Err(HypergraphError::EmptySubset)
        );
        assert_eq!(g.connected_components().len(), 1);
    }

    #[test]
    fn bowtie_boundaries() {
        let g = bowtie();
        let s = subset(5, &[0, 1]);
        assert_eq!(g.edge_boundary(&s).len(), 1);
        assert_eq!(g.vertex_boundary(&s).as_slice(), &[2]);
        assert_eq!(g.volume(&s), 2);
        let all = VertexSubset::full(5);
        assert!(g.edge_boundary(&all).is_empty());
        assert!(g.vertex_boundary(&all).is_empty());
    }

    #[test]
    fn complete_k34_boundary_of_singleton() {
        let g = Hypergraph::new(4, [vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
            .unwrap();
        let s = subset(4, &[0]);
        assert_eq!(g.edge_boundary(&s).len(), 3);
        assert_eq!(g.vertex_boundary(&s).as_slice(), &[1, 2, 3]);
        assert_eq!(g.volume(&s), 3);
        assert!(!g.has_nonadjacent_pair());
    }

    #[test]
    fn disjoint_triples() {
        let g = Hypergraph::new(6, [vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(g.connected_components(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(g.distance(0, 4).unwrap(), None);
        assert_eq!(g.diameter(), Err(HypergraphError::Disconnected));
    }

    #[test]
    fn codegree_summary() {
        let g = Hypergraph::new(4, [vec![0, 1], vec![0, 1, 2], vec![2, 3]]).unwrap();
        let s = g.summary();
        assert_eq!((s.rank, s.corank, s.is_uniform), (3, 2, false));
        assert_eq!(s.codegrees[0][1], 2);
        assert_eq!(s.codegrees[1][2], 1);
        assert_eq!(s.codegrees[0][3], 0);
        assert!(!g.is_bipartite_underlying());
    }

    #[test]
    fn serde_validates() {
        let g = bowtie();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"n":5,"edges":[[0,1,2],[2,3,4]]}"#);
        let back: Hypergraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Hypergraph>(r#"{"n":2,"edges":[[0]]}"#).is_err());
    }
}
