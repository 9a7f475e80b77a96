//! Dense symmetric eigendecomposition (cyclic Jacobi) and spectral utilities.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::Hypergraph;
use crate::matrix::{MatrixError, SquareMatrix, SymMatrix};
use crate::operators::{self, OperatorError};

/// Default absolute tolerance for clustering eigenvalues.
pub const CLUSTER_TOL: f64 = 1e-7;
pub const MAX_SWEEPS: usize = 100;
const OFF_DIAG_REL_TOL: f64 = 1e-12;
const SIGN_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error(transparent)]
    NotSymmetric(#[from] MatrixError),
    #[error("Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("hypergraph is disconnected")]
    Disconnected,
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("spectrum is empty")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` pairs with `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<f64>>,
    pub tol: f64,
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Full eigendecomposition of a symmetric matrix.
pub fn sym_eigen(m: &SymMatrix, tol: f64) -> Result<Spectrum, SpectraError> {
    let n = m.order();
    let mut a = m.as_square().as_slice().to_vec();
    let mut v = SquareMatrix::identity(n).as_slice().to_vec();
    let target = OFF_DIAG_REL_TOL * m.frobenius();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a, n);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(SpectraError::NoConvergence { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&k| a[k * n + k]).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| {
            let mut col: Vec<f64> = (0..n).map(|r| v[r * n + k]).collect();
            fix_sign(&mut col);
            col
        })
        .collect();
    Ok(Spectrum { eigenvalues, eigenvectors, tol })
}

/// Checks symmetry first, then decomposes.
pub fn sym_eigen_dense(m: &SquareMatrix, tol: f64) -> Result<Spectrum, SpectraError> {
    let s = SymMatrix::try_from_square(m.clone())?;
    sym_eigen(&s, tol)
}

/// Makes the largest-magnitude entry positive; near-ties go to the lowest index.
pub fn fix_sign(v: &mut [f64]) {
    let big = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(k) = v.iter().position(|x| x.abs() >= big - SIGN_TIE_TOL) {
        if v[k] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `λ_k` with 1-based `k`.
    pub fn lambda(&self, k: usize) -> f64 {
        self.eigenvalues[k - 1]
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.len() - 1]
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest `|λ|` after removing one copy of the top eigenvalue.
    pub fn second_largest_abs(&self) -> f64 {
        self.eigenvalues[..self.len().saturating_sub(1)].iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Groups of (representative value, multiplicity); values within `tol` of
    /// their predecessor join its group.
    pub fn clusters(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize, f64)> = Vec::new();
        for &x in &self.eigenvalues {
            match out.last_mut() {
                Some((sum, count, last)) if x - *last <= tol => {
                    *sum += x;
                    *count += 1;
                    *last = x;
                }
                _ => out.push((x, 1, x)),
            }
        }
        out.into_iter().map(|(s, c, _)| (s / c as f64, c)).collect()
    }

    pub fn distinct_count(&self, tol: f64) -> usize {
        self.clusters(tol).len()
    }

    pub fn zero_multiplicity(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|x| x.abs() <= tol).count()
    }

    /// `max_k ‖M v_k − λ_k v_k‖₂`.
    pub fn max_residual(&self, m: &SymMatrix) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(&l, v)| {
                let mv = m.mul_vec(v);
                mv.iter().zip(v).map(|(a, b)| (a - l * b).powi(2)).sum::<f64>().sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `max |VᵀV − I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let k = self.len();
        let mut worst = 0.0f64;
        for i in 0..k {
            for j in i..k {
                let d = crate::matrix::dot(&self.eigenvectors[i], &self.eigenvectors[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((d - want).abs());
            }
        }
        worst
    }
}

/// Max absolute gap between two equal-length sorted value lists.
pub fn multiset_distance(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    Some(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

/// `{λ + μ}` over all pairs.
pub fn sumset(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
    out.sort_by(f64::total_cmp);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronVector {
    pub value: f64,
    pub vector: Vec<f64>,
    /// Smallest entry.
    pub alpha: f64,
}

pub fn perron_vector(g: &Hypergraph, a: &SymMatrix) -> Result<PerronVector, SpectraError> {
    if !g.is_connected() {
        return Err(SpectraError::Disconnected);
    }
    let s = sym_eigen(a, CLUSTER_TOL)?;
    let mut vector = s.eigenvectors.last().ok_or(SpectraError::Empty)?.clone();
    if vector.iter().sum::<f64>() < 0.0 {
        vector.iter_mut().for_each(|x| *x = -*x);
    }
    let alpha = vector.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(PerronVector { value: s.max(), vector, alpha })
}

pub fn adjacency_spectrum(g: &Hypergraph) -> Result<Spectrum, SpectraError> {
    sym_eigen(&operators::adjacency(g), CLUSTER_TOL)
}

pub fn laplacian_spectrum(g: &Hypergraph) -> Result<Spectrum, SpectraError> {
    sym_eigen(&operators::laplacian(g), CLUSTER_TOL)
}

/// Spectrum of `Δ`, computed through the similar symmetric form `ℒ`.
/// The eigenvectors returned are those of `ℒ`; see [`delta_eigenvectors`].
pub fn normalized_spectrum(g: &Hypergraph) -> Result<Spectrum, SpectraError> {
    sym_eigen(&operators::sym_normalized_laplacian(g)?, CLUSTER_TOL)
}

/// Eigenvectors of `Δ = I − D⁻¹A` recovered as `D^{-1/2} v`, rescaled to unit length.
pub fn delta_eigenvectors(g: &Hypergraph, s: &Spectrum) -> Vec<Vec<f64>> {
    s.eigenvectors
        .iter()
        .map(|v| {
            let mut w: Vec<f64> =
                v.iter().zip(g.degrees()).map(|(x, &d)| x / (d as f64).sqrt()).collect();
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            w.iter_mut().for_each(|x| *x /= norm);
            fix_sign(&mut w);
            w
        })
        .collect()
}

pub fn spectrum_of(g: &Hypergraph, kind: operators::MatrixKind) -> Result<Spectrum, SpectraError> {
    use operators::MatrixKind::*;
    match kind {
        Adjacency => adjacency_spectrum(g),
        Laplacian => laplacian_spectrum(g),
        Normalized => normalized_spectrum(g),
        Transition => {
            // P = I − Δ; eigenvectors taken from the symmetric form, eigenvalues reversed.
            let s = normalized_spectrum(g)?;
            let eigenvalues = s.eigenvalues.iter().rev().map(|l| 1.0 - l).collect();
            let eigenvectors = s.eigenvectors.into_iter().rev().collect();
            Ok(Spectrum { eigenvalues, eigenvectors, tol: s.tol })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{bowtie, complete_uniform};

    fn check_invariants(m: &SymMatrix, s: &Spectrum) {
        let scale = m.frobenius().max(1.0);
        assert!(s.max_residual(m) <= 1e-8 * scale);
        assert!(s.orthonormality_error() <= 1e-8);
        let tr = m.trace();
        let sum: f64 = s.eigenvalues.iter().sum();
        assert!((tr - sum).abs() <= 1e-8 * tr.abs().max(1.0));
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn identity() {
        let m = SymMatrix::identity(5);
        let s = sym_eigen(&m, CLUSTER_TOL).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0; 5]);
        check_invariants(&m, &s);
    }

    #[test]
    fn complete_laplacian() {
        let g = complete_uniform(4, 3).unwrap();
        let m = operators::laplacian(&g);
        let s = sym_eigen(&m, CLUSTER_TOL).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([0.0, 4.0, 4.0, 4.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(s.distinct_count(CLUSTER_TOL), 2);
        check_invariants(&m, &s);
    }

    #[test]
    fn complete_adjacency_multiplicity() {
        for m in 3..=6 {
            let s = adjacency_spectrum(&complete_uniform(m, m).unwrap()).unwrap();
            let c = s.clusters(CLUSTER_TOL);
            assert_eq!(c.len(), 2);
            assert!((c[0].0 + 1.0 / (m - 1) as f64).abs() < 1e-12);
            assert_eq!(c[0].1, m - 1);
            assert!((c[1].0 - 1.0).abs() < 1e-12);
        }
        let s = adjacency_spectrum(&complete_uniform(3, 3).unwrap()).unwrap();
        assert!((s.spectral_radius() - 1.0).abs() < 1e-12);
        assert!((s.second_largest_abs() - 0.5).abs() < 1e-12);
        let s = adjacency_spectrum(&complete_uniform(4, 3).unwrap()).unwrap();
        assert!((s.spectral_radius() - 3.0).abs() < 1e-12);
        assert!((s.second_largest_abs() - 1.0).abs() < 1e-12);
        let z = sym_eigen(&SymMatrix::zeros(3), CLUSTER_TOL).unwrap();
        assert_eq!(z.spectral_radius(), 0.0);
    }

    #[test]
    fn bowtie_spectra() {
        let g = bowtie();
        let l = laplacian_spectrum(&g).unwrap();
        assert!(multiset_distance(&l.eigenvalues, &[0.0, 0.5, 1.5, 1.5, 2.5]).unwrap() < 1e-12);
        let r = 17f64.sqrt();
        let a = adjacency_spectrum(&g).unwrap();
        let want = [(1.0 - r) / 4.0, -0.5, -0.5, 0.5, (1.0 + r) / 4.0];
        assert!(multiset_distance(&a.eigenvalues, &want).unwrap() < 1e-12);
        let d = normalized_spectrum(&g).unwrap();
        assert!(multiset_distance(&d.eigenvalues, &[0.0, 0.5, 1.5, 1.5, 1.5]).unwrap() < 1e-12);
        assert_eq!(d.zero_multiplicity(CLUSTER_TOL), 1);
    }

    #[test]
    fn perron() {
        let g = complete_uniform(4, 3).unwrap();
        let p = perron_vector(&g, &operators::adjacency(&g)).unwrap();
        assert!(p.vector.iter().all(|x| (x - 0.5).abs() < 1e-12));
        let b = bowtie();
        let p = perron_vector(&b, &operators::adjacency(&b)).unwrap();
        assert!(p.alpha > 0.0);
        assert!((p.vector[0] - p.vector[1]).abs() < 1e-12);
        assert!((p.vector[3] - p.vector[4]).abs() < 1e-12);
        assert!((p.vector[0] - p.vector[3]).abs() < 1e-12);
        let two = Hypergraph::new(6, [vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(
            perron_vector(&two, &operators::adjacency(&two)).unwrap_err(),
            SpectraError::Disconnected
        );
    }

    #[test]
    fn disconnected_zero_multiplicity() {
        let g = Hypergraph::new(6, [vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(laplacian_spectrum(&g).unwrap().zero_multiplicity(CLUSTER_TOL), 2);
    }

    #[test]
    fn delta_vectors_are_eigenvectors() {
        let g = bowtie();
        let s = normalized_spectrum(&g).unwrap();
        let delta = operators::row_normalized_laplacian(&g).unwrap();
        for (l, v) in s.eigenvalues.iter().zip(delta_eigenvectors(&g, &s)) {
            let dv = delta.mul_vec(&v);
            assert!(dv.iter().zip(&v).all(|(a, b)| (a - l * b).abs() < 1e-10));
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let m = SquareMatrix::from_row_major(2, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(sym_eigen_dense(&m, CLUSTER_TOL), Err(SpectraError::NotSymmetric(_))));
    }

    #[test]
    fn deterministic() {
        let g = crate::random::random_connected_3uniform(11);
        let a = laplacian_spectrum(&g).unwrap();
        let b = laplacian_spectrum(&g).unwrap();
        assert_eq!(a, b);
    }
}
