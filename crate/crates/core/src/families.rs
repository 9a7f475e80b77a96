//! Generators for the named hypergraph families and the product/complement/join constructions.

use std::collections::BTreeSet;

use crate::hypergraph::{Hypergraph, HypergraphError, VERTEX_BUDGET};

/// Largest edge count any generator will materialise.
pub const EDGE_BUDGET: u128 = 1 << 22;

/// Binomial coefficient as an exact integer, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All `m`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..m).collect();
    loop {
        out.push(cur.clone());
        let mut i = m;
        while i > 0 && cur[i - 1] == n - m + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..m {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn check_edge_budget(count: u128) -> Result<(), HypergraphError> {
    if count > EDGE_BUDGET {
        return Err(HypergraphError::SizeOverflow { vertices: count, budget: EDGE_BUDGET as usize });
    }
    Ok(())
}

pub fn complete_uniform(n: usize, m: usize) -> Result<Hypergraph, HypergraphError> {
    if m < 2 || m > n {
        return Err(HypergraphError::InvalidCardinality(format!(
            "complete uniform hypergraph needs 2 <= m <= n, got n={n}, m={m}"
        )));
    }
    check_edge_budget(binomial(n as u64, m as u64))?;
    Ok(Hypergraph::from_canonical(n, k_subsets(n, m)))
}

/// All `m`-subsets of `V1 = 0..n1`, `V2 = n1..n1+n2` meeting both parts.
pub fn complete_bipartite_uniform(
    n1: usize,
    n2: usize,
    m: usize,
) -> Result<Hypergraph, HypergraphError> {
    if m < 2 || n1 == 0 || n2 == 0 || n1 + n2 < m {
        return Err(HypergraphError::InvalidCardinality(format!(
            "complete bipartite uniform hypergraph needs m >= 2, n1, n2 >= 1 and n1+n2 >= m, \
             got n1={n1}, n2={n2}, m={m}"
        )));
    }
    let n = n1 + n2;
    check_edge_budget(binomial(n as u64, m as u64))?;
    let edges = k_subsets(n, m)
        .into_iter()
        .filter(|e| e[0] < n1 && e[m - 1] >= n1)
        .collect();
    Ok(Hypergraph::from_canonical(n, edges))
}

/// `Q(n, m)`: vertices are words in `{0..m-1}^n`, first coordinate most significant;
/// edges are the axis-parallel lines.
pub fn cube_hypergraph(n: usize, m: usize) -> Result<Hypergraph, HypergraphError> {
    cube_hypergraph_with_budget(n, m, VERTEX_BUDGET)
}

pub fn cube_hypergraph_with_budget(
    n: usize,
    m: usize,
    budget: usize,
) -> Result<Hypergraph, HypergraphError> {
    if n == 0 || m < 2 {
        return Err(HypergraphError::InvalidCardinality(format!(
            "cube hypergraph needs n >= 1 and m >= 2, got n={n}, m={m}"
        )));
    }
    let count = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > budget as u128 {
        return Err(HypergraphError::SizeOverflow { vertices: count, budget });
    }
    let total = count as usize;
    let mut edges = Vec::with_capacity(n * total / m);
    let mut stride = 1;
    for _axis in 0..n {
        for v in 0..total {
            if (v / stride) % m == 0 {
                edges.push((0..m).map(|t| v + t * stride).collect());
            }
        }
        stride *= m;
    }
    edges.sort_unstable();
    Ok(Hypergraph::from_canonical(total, edges))
}

/// The (7,3,1) design on 0-based labels.
pub fn fano_plane() -> Hypergraph {
    let lines: [[usize; 3]; 7] =
        [[1, 2, 3], [1, 4, 7], [1, 5, 6], [2, 4, 6], [2, 5, 7], [3, 4, 5], [3, 6, 7]];
    Hypergraph::new(7, lines.iter().map(|l| l.iter().map(|v| v - 1).collect::<Vec<_>>()))
        .expect("fano plane is valid")
}

/// Two triangles sharing vertex 2.
pub fn bowtie() -> Hypergraph {
    Hypergraph::new(5, [vec![0, 1, 2], vec![2, 3, 4]]).expect("bowtie is valid")
}

/// `k` triples glued in a path: edges `{2i, 2i+1, 2i+2}`.
pub fn chain(k: usize) -> Result<Hypergraph, HypergraphError> {
    if k == 0 {
        return Err(HypergraphError::InvalidCardinality("chain needs at least one edge".into()));
    }
    Hypergraph::new(2 * k + 1, (0..k).map(|i| vec![2 * i, 2 * i + 1, 2 * i + 2]))
}

/// Row-major product: `(a, x) -> a * n2 + x`.
pub fn cartesian_product(g1: &Hypergraph, g2: &Hypergraph) -> Result<Hypergraph, HypergraphError> {
    let (n1, n2) = (g1.n(), g2.n());
    let count = n1 as u128 * n2 as u128;
    if count > VERTEX_BUDGET as u128 {
        return Err(HypergraphError::SizeOverflow { vertices: count, budget: VERTEX_BUDGET });
    }
    let mut edges = Vec::with_capacity(n1 * g2.edge_count() + n2 * g1.edge_count());
    for a in 0..n1 {
        for e in g2.edges() {
            edges.push(e.iter().map(|&x| a * n2 + x).collect::<Vec<_>>());
        }
    }
    for x in 0..n2 {
        for e in g1.edges() {
            edges.push(e.iter().map(|&a| a * n2 + x).collect::<Vec<_>>());
        }
    }
    edges.sort_unstable();
    Ok(Hypergraph::from_canonical(n1 * n2, edges))
}

/// Complement inside the complete `m`-uniform hypergraph, with `m` read off `g`.
pub fn uniform_complement(g: &Hypergraph) -> Result<Hypergraph, HypergraphError> {
    let m = g.uniformity().ok_or(HypergraphError::NotUniform)?;
    uniform_complement_with(g, m)
}

/// Complement with an explicit cardinality, so edgeless hypergraphs are allowed.
pub fn uniform_complement_with(g: &Hypergraph, m: usize) -> Result<Hypergraph, HypergraphError> {
    match g.uniformity() {
        Some(k) if k != m => return Err(HypergraphError::CardinalityMismatch { left: k, right: m }),
        None if g.edge_count() > 0 => return Err(HypergraphError::NotUniform),
        _ => {}
    }
    if m < 2 {
        return Err(HypergraphError::InvalidCardinality(format!("m must be >= 2, got {m}")));
    }
    check_edge_budget(binomial(g.n() as u64, m as u64))?;
    let present: BTreeSet<&[usize]> = g.edges().iter().map(Vec::as_slice).collect();
    let edges = k_subsets(g.n(), m).into_iter().filter(|e| !present.contains(e.as_slice())).collect();
    Ok(Hypergraph::from_canonical(g.n(), edges))
}

/// `g1 + g2`: disjoint union plus every `m`-subset meeting both parts.
pub fn join(g1: &Hypergraph, g2: &Hypergraph) -> Result<Hypergraph, HypergraphError> {
    let m1 = g1.uniformity().ok_or(HypergraphError::NotUniform)?;
    let m2 = g2.uniformity().ok_or(HypergraphError::NotUniform)?;
    if m1 != m2 {
        return Err(HypergraphError::CardinalityMismatch { left: m1, right: m2 });
    }
    join_with(g1, g2, m1)
}

/// Join with an explicit cardinality; either side may be edgeless.
pub fn join_with(g1: &Hypergraph, g2: &Hypergraph, m: usize) -> Result<Hypergraph, HypergraphError> {
    for g in [g1, g2] {
        match g.uniformity() {
            Some(k) if k != m => {
                return Err(HypergraphError::CardinalityMismatch { left: k, right: m })
            }
            None if g.edge_count() > 0 => return Err(HypergraphError::NotUniform),
            _ => {}
        }
    }
    if m < 2 {
        return Err(HypergraphError::InvalidCardinality(format!("m must be >= 2, got {m}")));
    }
    let (n1, n2) = (g1.n(), g2.n());
    let n = n1 + n2;
    if n > VERTEX_BUDGET {
        return Err(HypergraphError::SizeOverflow { vertices: n as u128, budget: VERTEX_BUDGET });
    }
    check_edge_budget(binomial(n as u64, m as u64))?;
    let mut edges: Vec<Vec<usize>> = g1.edges().to_vec();
    edges.extend(g2.edges().iter().map(|e| e.iter().map(|&v| v + n1).collect()));
    edges.extend(k_subsets(n, m).into_iter().filter(|e| e[0] < n1 && e[m - 1] >= n1));
    edges.sort_unstable();
    Ok(Hypergraph::from_canonical(n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(60, 30), 118264581564861424);
    }

    #[test]
    fn complete_family() {
        let g = complete_uniform(3, 3).unwrap();
        assert_eq!((g.edge_count(), g.degrees()), (1, &[1, 1, 1][..]));
        let g = complete_uniform(4, 3).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert!(g.degrees().iter().all(|&d| d == 3));
        let g = complete_uniform(7, 3).unwrap();
        assert_eq!(g.edge_count(), 35);
        let c = g.codegrees();
        assert!((0..7).all(|i| (0..7).all(|j| i == j || c[i][j] == 5)));
        assert!(complete_uniform(2, 3).is_err());
        assert!(complete_uniform(4, 1).is_err());
    }

    #[test]
    fn bipartite_family() {
        let g = complete_bipartite_uniform(1, 2, 3).unwrap();
        assert_eq!(g.edges(), &[vec![0, 1, 2]]);
        assert_eq!(complete_bipartite_uniform(2, 2, 3).unwrap().edge_count(), 4);
        assert!(matches!(
            complete_bipartite_uniform(1, 1, 3),
            Err(HypergraphError::InvalidCardinality(_))
        ));
        // 3+3 choose 3 minus the two one-sided triples
        assert_eq!(complete_bipartite_uniform(3, 3, 3).unwrap().edge_count(), 18);
    }

    #[test]
    fn cubes() {
        assert_eq!(cube_hypergraph(1, 3).unwrap(), complete_uniform(3, 3).unwrap());
        let q = cube_hypergraph(2, 3).unwrap();
        assert_eq!((q.n(), q.edge_count()), (9, 6));
        assert_eq!(q.diameter().unwrap(), 2);
        let c4 = cube_hypergraph(2, 2).unwrap();
        assert_eq!(c4.edges(), &[vec![0, 1], vec![0, 2], vec![1, 3], vec![2, 3]]);
        let q33 = cube_hypergraph(3, 3).unwrap();
        assert_eq!((q33.n(), q33.edge_count()), (27, 27));
        assert!(matches!(
            cube_hypergraph_with_budget(5, 4, 1000),
            Err(HypergraphError::SizeOverflow { vertices: 1024, budget: 1000 })
        ));
    }

    #[test]
    fn cube_is_iterated_product() {
        let q1 = cube_hypergraph(1, 3).unwrap();
        let q2 = cartesian_product(&q1, &q1).unwrap();
        assert_eq!(q2, cube_hypergraph(2, 3).unwrap());
        let q3 = cartesian_product(&q1, &q2).unwrap();
        assert_eq!(q3, cube_hypergraph(3, 3).unwrap());
    }

    #[test]
    fn fano() {
        let f = fano_plane();
        assert_eq!(f.edge_count(), 7);
        assert!(f.degrees().iter().all(|&d| d == 3));
        let c = f.codegrees();
        assert!((0..7).all(|i| (0..7).all(|j| i == j || c[i][j] == 1)));
    }

    #[test]
    fn products() {
        let k33 = complete_uniform(3, 3).unwrap();
        let dot = Hypergraph::empty(1).unwrap();
        assert_eq!(cartesian_product(&k33, &dot).unwrap(), k33);
        assert_eq!(cartesian_product(&dot, &k33).unwrap(), k33);
        let p = cartesian_product(&k33, &k33).unwrap();
        assert_eq!((p.n(), p.edge_count()), (9, 6));
        let b = bowtie();
        let bp = cartesian_product(&b, &k33).unwrap();
        for a in 0..5 {
            for x in 0..3 {
                assert_eq!(bp.degree(a * 3 + x), b.degree(a) + k33.degree(x));
            }
        }
    }

    #[test]
    fn complements() {
        let k34 = complete_uniform(4, 3).unwrap();
        assert_eq!(uniform_complement(&k34).unwrap().edge_count(), 0);
        let f = fano_plane();
        let fc = uniform_complement(&f).unwrap();
        assert_eq!(fc.edge_count(), 28);
        assert_eq!(uniform_complement(&fc).unwrap(), f);
        for i in 0..7 {
            assert_eq!(f.degree(i) + fc.degree(i), 15);
        }
        let mixed = Hypergraph::new(3, [vec![0, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(uniform_complement(&mixed), Err(HypergraphError::NotUniform));
        let empty = Hypergraph::empty(4).unwrap();
        assert_eq!(uniform_complement_with(&empty, 3).unwrap(), k34);
    }

    #[test]
    fn joins() {
        let k33 = complete_uniform(3, 3).unwrap();
        assert_eq!(join(&k33, &k33).unwrap(), complete_uniform(6, 3).unwrap());
        let e3 = Hypergraph::empty(3).unwrap();
        let j = join_with(&e3, &e3, 3).unwrap();
        assert_eq!(j.edge_count(), 18);
        assert_eq!(j, complete_bipartite_uniform(3, 3, 3).unwrap());
        let k44 = complete_uniform(4, 4).unwrap();
        assert_eq!(
            join(&k33, &k44),
            Err(HypergraphError::CardinalityMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn chains() {
        let c = chain(2).unwrap();
        assert_eq!(c, bowtie());
        assert_eq!(chain(4).unwrap().diameter().unwrap(), 4);
    }
}
