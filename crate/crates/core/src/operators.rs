//! Connectivity matrices of a hypergraph under the weighted clique expansion
//! `A_ij = sum_{e ∋ i,j} 1/(|e|-1)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::Hypergraph;
use crate::matrix::{RowStochastic, SquareMatrix, SymMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("vertex {0} is isolated (degree 0)")]
    IsolatedVertex(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Adjacency,
    Laplacian,
    Normalized,
    Transition,
}

impl MatrixKind {
    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Adjacency => "adjacency",
            MatrixKind::Laplacian => "laplacian",
            MatrixKind::Normalized => "normalized",
            MatrixKind::Transition => "transition",
        }
    }
}

impl std::str::FromStr for MatrixKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "adjacency" | "A" => Ok(MatrixKind::Adjacency),
            "laplacian" | "L" => Ok(MatrixKind::Laplacian),
            "normalized" | "Delta" => Ok(MatrixKind::Normalized),
            "transition" | "P" => Ok(MatrixKind::Transition),
            _ => Err(format!(
                "unknown matrix '{s}' (expected adjacency, laplacian, normalized or transition)"
            )),
        }
    }
}

pub fn adjacency(g: &Hypergraph) -> SymMatrix {
    let mut a = SymMatrix::zeros(g.n());
    for e in g.edges() {
        let w = 1.0 / (e.len() - 1) as f64;
        for (k, &i) in e.iter().enumerate() {
            for &j in &e[k + 1..] {
                a.add_sym(i, j, w);
            }
        }
    }
    a
}

pub fn degree_matrix(g: &Hypergraph) -> SymMatrix {
    let mut d = SymMatrix::zeros(g.n());
    for (i, &di) in g.degrees().iter().enumerate() {
        d.set_sym(i, i, di as f64);
    }
    d
}

/// `L = D - A`.
pub fn laplacian(g: &Hypergraph) -> SymMatrix {
    let a = adjacency(g);
    SymMatrix::from_upper(g.n(), |i, j| if i == j { g.degree(i) as f64 } else { -a.get(i, j) })
}

fn check_isolated(g: &Hypergraph) -> Result<(), OperatorError> {
    match g.degrees().iter().position(|&d| d == 0) {
        Some(v) => Err(OperatorError::IsolatedVertex(v)),
        None => Ok(()),
    }
}

/// The row form `Δ = I - D⁻¹A` and the symmetric form `ℒ = I - D^{-1/2} A D^{-1/2}`.
pub fn normalized_laplacian(g: &Hypergraph) -> Result<(SquareMatrix, SymMatrix), OperatorError> {
    Ok((row_normalized_laplacian(g)?, sym_normalized_laplacian(g)?))
}

pub fn row_normalized_laplacian(g: &Hypergraph) -> Result<SquareMatrix, OperatorError> {
    let p = transition_kernel(g)?;
    Ok(SquareMatrix::from_fn(g.n(), |i, j| if i == j { 1.0 } else { 0.0 } - p.get(i, j)))
}

pub fn sym_normalized_laplacian(g: &Hypergraph) -> Result<SymMatrix, OperatorError> {
    check_isolated(g)?;
    let a = adjacency(g);
    let s: Vec<f64> = g.degrees().iter().map(|&d| 1.0 / (d as f64).sqrt()).collect();
    Ok(SymMatrix::from_upper(g.n(), |i, j| {
        let v = a.get(i, j) * s[i] * s[j];
        if i == j {
            1.0 - v
        } else {
            -v
        }
    }))
}

/// `P = D⁻¹A`.
pub fn transition_kernel(g: &Hypergraph) -> Result<RowStochastic, OperatorError> {
    check_isolated(g)?;
    let a = adjacency(g);
    let p = SquareMatrix::from_fn(g.n(), |i, j| a.get(i, j) / g.degree(i) as f64);
    // Row sums of A equal the degrees exactly up to rounding, far inside the tolerance.
    Ok(RowStochastic::try_new(p).expect("rows of D^-1 A sum to one"))
}

/// `φ_m(n) = n/(n-1) * C(n-1, m-1)`, with `φ_m(1) = 0`.
pub fn phi(m: usize, n: usize) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    n as f64 / (n - 1) as f64 * crate::families::binomial(n as u64 - 1, m as u64 - 1) as f64
}

/// `θ = C(n-2, m-2)/(m-1)`, the adjacency weight of the complete `m`-uniform hypergraph.
pub fn theta_complete(m: usize, n: usize) -> f64 {
    if n < 2 || m < 2 {
        return 0.0;
    }
    crate::families::binomial(n as u64 - 2, m as u64 - 2) as f64 / (m - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{bowtie, complete_uniform, fano_plane, uniform_complement};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn adjacency_examples() {
        let a = adjacency(&complete_uniform(3, 3).unwrap());
        assert!((0..3).all(|i| (0..3).all(|j| close(a.get(i, j), if i == j { 0.0 } else { 0.5 }))));
        let b = adjacency(&bowtie());
        let incident = [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)];
        for i in 0..5 {
            for j in 0..5 {
                let want = if incident.contains(&(i.min(j), i.max(j))) { 0.5 } else { 0.0 };
                assert!(close(b.get(i, j), want));
            }
        }
        let f = fano_plane();
        let fa = adjacency(&f);
        assert!(fa.row_sums().iter().all(|&s| close(s, 3.0)));
    }

    #[test]
    fn laplacian_examples() {
        let l = laplacian(&complete_uniform(4, 3).unwrap());
        assert!((0..4).all(|i| (0..4).all(|j| close(l.get(i, j), if i == j { 3.0 } else { -1.0 }))));
        let l = laplacian(&complete_uniform(3, 3).unwrap());
        assert!(close(l.get(0, 0), 1.0) && close(l.get(0, 1), -0.5));
        assert!(laplacian(&bowtie()).row_sums().iter().all(|s| s.abs() < 1e-15));
    }

    #[test]
    fn normalized_examples() {
        let k34 = complete_uniform(4, 3).unwrap();
        let (delta, sym) = normalized_laplacian(&k34).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { -1.0 / 3.0 };
                assert!(close(delta.get(i, j), want));
                assert!(close(sym.get(i, j), want));
            }
        }
        let fano = row_normalized_laplacian(&fano_plane()).unwrap();
        let k37 = row_normalized_laplacian(&complete_uniform(7, 3).unwrap()).unwrap();
        assert!(fano.max_abs_diff(&k37) <= 1e-12);
        let iso = Hypergraph::new(3, [vec![0, 1]]).unwrap();
        assert_eq!(normalized_laplacian(&iso).unwrap_err(), OperatorError::IsolatedVertex(2));
    }

    #[test]
    fn transition_examples() {
        let p = transition_kernel(&bowtie()).unwrap();
        assert_eq!(p.row(2), &[0.25, 0.25, 0.0, 0.25, 0.25]);
        let g = crate::random::random_connected_3uniform(3);
        let p = transition_kernel(&g).unwrap();
        for x in 0..g.n() {
            for y in 0..g.n() {
                let lhs = g.degree(x) as f64 * p.get(x, y);
                let rhs = g.degree(y) as f64 * p.get(y, x);
                assert!((lhs - rhs).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn complement_identities() {
        let g = crate::random::random_uniform(7, 3, 12, 4).unwrap();
        let gc = uniform_complement(&g).unwrap();
        let (a, ac) = (adjacency(&g), adjacency(&gc));
        let (l, lc) = (laplacian(&g), laplacian(&gc));
        let th = theta_complete(3, 7);
        let ph = phi(3, 7);
        assert!(close(th, 5.0 / 2.0));
        assert!(close(ph, 17.5));
        for i in 0..7 {
            for j in 0..7 {
                let off = if i == j { 0.0 } else { th };
                assert!(close(a.get(i, j) + ac.get(i, j), off));
                let want = if i == j { ph - th } else { -th };
                assert!(close(l.get(i, j) + lc.get(i, j), want));
            }
        }
    }

    #[test]
    fn phi_values() {
        assert!(close(phi(3, 4), 4.0));
        assert!(close(phi(3, 3), 1.5));
        assert_eq!(phi(3, 1), 0.0);
        assert!(close(phi(3, 8), 8.0 / 7.0 * 21.0));
    }
}
