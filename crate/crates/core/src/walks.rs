//! Random walks driven by the transition kernel `P = D⁻¹A`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::Hypergraph;
use crate::matrix::RowStochastic;
use crate::operators::{self, OperatorError};
use crate::random::rng_for;
use crate::spectra::{self, SpectraError};

/// Stream used by [`simulate`]; walk `k` of a batch uses stream `WALK_STREAM + k`.
pub const WALK_STREAM: u64 = 1 << 32;
pub const CERT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("walk is not ergodic: the hypergraph is disconnected")]
    NotErgodic,
    #[error("vertex {vertex} is out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("function has {got} values, expected {n}")]
    Length { got: usize, n: usize },
}

fn cumulative_rows(p: &RowStochastic) -> Vec<Vec<f64>> {
    (0..p.order())
        .map(|x| {
            let mut acc = 0.0;
            p.row(x)
                .iter()
                .map(|&w| {
                    acc += w;
                    acc
                })
                .collect()
        })
        .collect()
}

/// Inverse-CDF draw from a cumulative row; rounding at the top end falls back
/// to the last vertex with positive mass.
fn draw(cum: &[f64], row: &[f64], u: f64) -> usize {
    let k = cum.partition_point(|&c| c <= u);
    if k < cum.len() {
        k
    } else {
        row.iter().rposition(|&w| w > 0.0).expect("row has mass")
    }
}

/// Trajectory `v_0 = start, v_1, …, v_steps`.
pub fn simulate(g: &Hypergraph, start: usize, steps: usize, seed: u64) -> Result<Vec<usize>, WalkError> {
    simulate_stream(g, start, steps, seed, 0)
}

/// Like [`simulate`] on an independent stream, for batches sharing one seed.
pub fn simulate_stream(
    g: &Hypergraph,
    start: usize,
    steps: usize,
    seed: u64,
    stream: u64,
) -> Result<Vec<usize>, WalkError> {
    if start >= g.n() {
        return Err(WalkError::VertexOutOfRange { vertex: start, n: g.n() });
    }
    let p = operators::transition_kernel(g)?;
    let cum = cumulative_rows(&p);
    let mut rng = rng_for(seed, WALK_STREAM + stream);
    let mut path = Vec::with_capacity(steps + 1);
    let mut x = start;
    path.push(x);
    for _ in 0..steps {
        x = draw(&cum[x], p.row(x), rng.gen::<f64>());
        path.push(x);
    }
    Ok(path)
}

pub fn visit_frequencies(path: &[usize], n: usize) -> Vec<f64> {
    let mut counts = vec![0usize; n];
    for &v in path {
        counts[v] += 1;
    }
    counts.iter().map(|&c| c as f64 / path.len() as f64).collect()
}

/// `π(i) = d_i / vol(V)`.
pub fn stationary(g: &Hypergraph) -> Vec<f64> {
    let vol = g.total_volume() as f64;
    g.degrees().iter().map(|&d| d as f64 / vol).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkAnalysis {
    /// `max(|1 − λ₂(Δ)|, |1 − λₙ(Δ)|)`.
    pub rho: f64,
    pub lambda2: f64,
    pub lambda_n: f64,
    pub stationary: Vec<f64>,
    pub connected: bool,
    /// Exact: the underlying graph has an odd cycle.
    pub aperiodic: bool,
    /// Co-rank 2 means the co-rank criterion alone cannot rule out periodicity.
    pub periodicity_flag: bool,
}

impl WalkAnalysis {
    /// `⌈log(1/ε)/(1 − ρ)⌉`; `None` when `ρ ≥ 1`.
    pub fn mixing_steps(&self, eps: f64) -> Option<u64> {
        (self.rho < 1.0).then(|| ((1.0 / eps).ln() / (1.0 - self.rho)).ceil() as u64)
    }
}

pub fn analyze(g: &Hypergraph) -> Result<WalkAnalysis, WalkError> {
    let s = spectra::normalized_spectrum(g)?;
    let n = s.len();
    let (lambda2, lambda_n) = if n >= 2 { (s.lambda(2), s.lambda(n)) } else { (0.0, 0.0) };
    let mut rho = if n >= 2 { (1.0 - lambda2).abs().max((1.0 - lambda_n).abs()) } else { 0.0 };
    // Bipartite or disconnected walks have ρ = 1 exactly; don't let rounding hide that.
    if (rho - 1.0).abs() <= 1e-12 {
        rho = 1.0;
    }
    Ok(WalkAnalysis {
        rho,
        lambda2,
        lambda_n,
        stationary: stationary(g),
        connected: g.is_connected(),
        aperiodic: !g.is_bipartite_underlying(),
        periodicity_flag: g.corank() <= 2,
    })
}

pub fn mixing_steps(g: &Hypergraph, eps: f64) -> Result<Option<u64>, WalkError> {
    Ok(analyze(g)?.mixing_steps(eps))
}

/// `‖f‖_μ` with `μ(i) = d_i`.
pub fn mu_norm(g: &Hypergraph, f: &[f64]) -> f64 {
    f.iter().zip(g.degrees()).map(|(x, &d)| d as f64 * x * x).sum::<f64>().sqrt()
}

/// `f̄ = (1/vol V) Σ d_i f(i)`, returned as a constant function.
pub fn equilibrium_apply(g: &Hypergraph, f: &[f64]) -> Result<Vec<f64>, WalkError> {
    if f.len() != g.n() {
        return Err(WalkError::Length { got: f.len(), n: g.n() });
    }
    if let Some(v) = g.degrees().iter().position(|&d| d == 0) {
        return Err(OperatorError::IsolatedVertex(v).into());
    }
    let vol = g.total_volume() as f64;
    let mean = f.iter().zip(g.degrees()).map(|(x, &d)| d as f64 * x).sum::<f64>() / vol;
    Ok(vec![mean; g.n()])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub t: u64,
    /// `‖Pᵗf − f̄‖_μ`.
    pub lhs: f64,
    /// `ρᵗ ‖f‖_μ`.
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCertificate {
    pub rho: f64,
    pub f_norm: f64,
    pub points: Vec<ConvergencePoint>,
    pub periodicity_flag: bool,
    pub holds: bool,
}

/// Bound check `‖Pᵗf − f̄‖_μ ≤ ρᵗ‖f‖_μ` at `t`.
pub fn convergence_certificate(g: &Hypergraph, f: &[f64], t: u64) -> Result<ConvergencePoint, WalkError> {
    let cert = convergence_trace(g, f, &[t])?;
    Ok(cert.points.into_iter().next().expect("one point"))
}

/// Certificate at each requested `t` (any order); `Pᵗf` is advanced by
/// repeated matrix-vector products.
pub fn convergence_trace(g: &Hypergraph, f: &[f64], ts: &[u64]) -> Result<ConvergenceCertificate, WalkError> {
    if !g.is_connected() {
        return Err(WalkError::NotErgodic);
    }
    let fbar = equilibrium_apply(g, f)?;
    let p = operators::transition_kernel(g)?;
    let analysis = analyze(g)?;
    let f_norm = mu_norm(g, f);
    let mut order: Vec<usize> = (0..ts.len()).collect();
    order.sort_by_key(|&k| ts[k]);
    let mut points = vec![None; ts.len()];
    let mut cur = f.to_vec();
    let mut at = 0u64;
    for k in order {
        while at < ts[k] {
            cur = p.apply(&cur);
            at += 1;
        }
        let diff: Vec<f64> = cur.iter().zip(&fbar).map(|(a, b)| a - b).collect();
        let lhs = mu_norm(g, &diff);
        let rhs = analysis.rho.powi(ts[k].min(i32::MAX as u64) as i32) * f_norm;
        points[k] = Some(ConvergencePoint { t: ts[k], lhs, rhs, holds: lhs <= rhs + CERT_SLACK });
    }
    let points: Vec<ConvergencePoint> = points.into_iter().map(Option::unwrap).collect();
    let holds = points.iter().all(|p| p.holds);
    Ok(ConvergenceCertificate {
        rho: analysis.rho,
        f_norm,
        points,
        periodicity_flag: analysis.periodicity_flag,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{bowtie, complete_uniform};

    #[test]
    fn zero_steps() {
        assert_eq!(simulate(&bowtie(), 3, 0, 1).unwrap(), vec![3]);
    }

    #[test]
    fn reproducible_and_valid() {
        let g = bowtie();
        let a = simulate(&g, 0, 500, 42).unwrap();
        assert_eq!(a, simulate(&g, 0, 500, 42).unwrap());
        assert_ne!(a, simulate(&g, 0, 500, 43).unwrap());
        assert!(a.windows(2).all(|w| g.adjacent(w[0], w[1])));
    }

    #[test]
    fn empirical_frequencies() {
        let g = complete_uniform(3, 3).unwrap();
        let f = visit_frequencies(&simulate(&g, 0, 100_000, 7).unwrap(), 3);
        assert!(f.iter().all(|x| (x - 1.0 / 3.0).abs() < 0.01));
        let b = bowtie();
        let f = visit_frequencies(&simulate(&b, 0, 100_000, 7).unwrap(), 5);
        assert!((f[2] - 2.0 / 6.0).abs() < 0.01);
    }

    #[test]
    fn rho_values() {
        let a = analyze(&complete_uniform(3, 3).unwrap()).unwrap();
        assert!((a.rho - 0.5).abs() < 1e-12);
        let a = analyze(&complete_uniform(4, 3).unwrap()).unwrap();
        assert!((a.rho - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(a.mixing_steps(1e-3), Some(((1e3f64).ln() / (2.0 / 3.0)).ceil() as u64));
    }

    #[test]
    fn certificates() {
        let g = complete_uniform(3, 3).unwrap();
        let c = convergence_certificate(&g, &[1.0, 0.0, 0.0], 5).unwrap();
        assert!(c.holds);
        assert!(c.lhs <= 0.5f64.powi(5) * (1.0f64).sqrt() + 1e-12);
        let c = convergence_certificate(&bowtie(), &[2.0; 5], 3).unwrap();
        assert!(c.lhs.abs() < 1e-12);
        let k34 = complete_uniform(4, 3).unwrap();
        let trace = convergence_trace(&k34, &[1.0, -2.0, 0.5, 3.0], &[10, 1, 5]).unwrap();
        assert!(trace.holds);
        assert_eq!(trace.points[0].t, 10);
        // On K³₄ the non-constant part is an eigenvector with ratio exactly −1/3.
        let r = trace.points[0].lhs / trace.points[2].lhs;
        assert!((r - (1.0f64 / 3.0).powi(5)).abs() < 1e-9);
        let two = Hypergraph::new(6, [vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(convergence_certificate(&two, &[0.0; 6], 1).unwrap_err(), WalkError::NotErgodic);
    }

    #[test]
    fn equilibrium() {
        let b = bowtie();
        let e = equilibrium_apply(&b, &[1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(e.iter().all(|&x| (x - 1.0 / 6.0).abs() < 1e-15));
        let e2 = equilibrium_apply(&b, &e).unwrap();
        assert_eq!(e, e2);
        let p = operators::transition_kernel(&b).unwrap();
        let f = [0.3, -1.0, 2.0, 0.0, 5.0];
        let lhs = equilibrium_apply(&b, &p.apply(&f)).unwrap();
        let rhs = equilibrium_apply(&b, &f).unwrap();
        assert!((lhs[0] - rhs[0]).abs() < 1e-14);
    }

    #[test]
    fn periodicity() {
        let c4 = crate::families::cube_hypergraph(2, 2).unwrap();
        let a = analyze(&c4).unwrap();
        assert!(!a.aperiodic && a.periodicity_flag);
        assert!((a.rho - 1.0).abs() < 1e-12);
        assert_eq!(a.mixing_steps(0.01), None);
    }
}
