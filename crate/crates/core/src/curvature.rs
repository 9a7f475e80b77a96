//! Bakry–Émery Γ/Γ₂ forms with CD(m, K) certificates, and Ollivier curvature
//! via exact optimal transport.
//!
//! Sign convention: `Δ = P − I`, so `(Δf)(i) = q_i · f` with `q_i` the i-th row
//! of `P − I`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{DistanceMatrix, Hypergraph};
use crate::matrix::{RowStochastic, SymMatrix};
use crate::operators::{self, OperatorError};
use crate::spectra::{self, SpectraError};
use crate::transport::{self, TransportError};

/// Smallest eigenvalue accepted as nonnegative in PSD tests.
pub const PSD_TOL: f64 = -1e-9;
pub const BEST_K_TOL: f64 = 1e-6;
const DISTRIBUTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurvatureError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("dimension must exceed 1, got {0}")]
    InvalidDimension(f64),
    #[error("{which} is not a probability distribution on the vertex set")]
    NotDistribution { which: &'static str },
    #[error("hypergraph is disconnected")]
    Disconnected,
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("vertex {vertex} is out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "value")]
pub enum Dimension {
    Finite(f64),
    Infinite,
}

impl Dimension {
    fn inverse(self) -> Result<f64, CurvatureError> {
        match self {
            Dimension::Infinite => Ok(0.0),
            Dimension::Finite(m) if m > 1.0 => Ok(1.0 / m),
            Dimension::Finite(m) => Err(CurvatureError::InvalidDimension(m)),
        }
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dimension::Finite(m) => write!(f, "{m}"),
            Dimension::Infinite => f.write_str("inf"),
        }
    }
}

/// Γ and Γ₂ at one vertex as quadratic forms on functions `V → ℝ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFormPair {
    pub vertex: usize,
    pub gamma: SymMatrix,
    /// From the operator composition `½(ΔΓ(f,f) − 2Γ(f,Δf))`.
    pub gamma2: SymMatrix,
    pub delta_row: Vec<f64>,
}

fn delta_row(p: &RowStochastic, i: usize) -> Vec<f64> {
    let mut q = p.row(i).to_vec();
    q[i] -= 1.0;
    q
}

fn gamma_matrix(p: &RowStochastic, i: usize) -> SymMatrix {
    let n = p.order();
    let mut g = SymMatrix::zeros(n);
    for j in 0..n {
        let w = 0.5 * p.get(i, j);
        if w == 0.0 {
            continue;
        }
        g.add_sym(i, i, w);
        g.add_sym(j, j, w);
        g.add_sym(i, j, -w);
    }
    g
}

fn gamma2_composition(p: &RowStochastic, i: usize, gamma_i: &SymMatrix) -> SymMatrix {
    let n = p.order();
    let qi = delta_row(p, i);
    let mut out = gamma_i.scaled(-0.5);
    let mut cross = vec![0.0; n * n];
    for j in 0..n {
        let pij = p.get(i, j);
        if pij == 0.0 {
            continue;
        }
        out = out.add_scaled(0.5 * pij, &gamma_matrix(p, j));
        let qj = delta_row(p, j);
        // ½ p_ij (e_j − e_i)(q_j − q_i)ᵀ
        for c in 0..n {
            let dq = 0.5 * pij * (qj[c] - qi[c]);
            cross[j * n + c] += dq;
            cross[i * n + c] -= dq;
        }
    }
    for r in 0..n {
        for c in r..n {
            let s = 0.5 * (cross[r * n + c] + cross[c * n + r]);
            out.add_sym(r, c, -s);
        }
    }
    out
}

pub fn gamma_forms(g: &Hypergraph, i: usize) -> Result<QuadraticFormPair, CurvatureError> {
    if i >= g.n() {
        return Err(CurvatureError::VertexOutOfRange { vertex: i, n: g.n() });
    }
    let p = operators::transition_kernel(g)?;
    Ok(forms_with_kernel(&p, i))
}

fn forms_with_kernel(p: &RowStochastic, i: usize) -> QuadraticFormPair {
    let gamma = gamma_matrix(p, i);
    let gamma2 = gamma2_composition(p, i, &gamma);
    QuadraticFormPair { vertex: i, gamma, gamma2, delta_row: delta_row(p, i) }
}

impl QuadraticFormPair {
    pub fn gamma_value(&self, f: &[f64]) -> f64 {
        self.gamma.quad_form(f)
    }

    pub fn gamma2_value(&self, f: &[f64]) -> f64 {
        self.gamma2.quad_form(f)
    }

    pub fn delta_value(&self, f: &[f64]) -> f64 {
        crate::matrix::dot(&self.delta_row, f)
    }
}

/// Γ₂ at `i` assembled from the three-term expansion
/// `¼ Σ_j Σ_k p_ij p_jk (f(i) − 2f(j) + f(k))² − Γ(f,f)(i) + ½ (Δf(i))²`.
pub fn gamma2_display(g: &Hypergraph, i: usize) -> Result<SymMatrix, CurvatureError> {
    let p = operators::transition_kernel(g)?;
    let n = g.n();
    let mut out = gamma_matrix(&p, i).scaled(-1.0);
    let q = delta_row(&p, i);
    for r in 0..n {
        for c in r..n {
            out.add_sym(r, c, 0.5 * q[r] * q[c]);
        }
    }
    for j in 0..n {
        let pij = p.get(i, j);
        if pij == 0.0 {
            continue;
        }
        for k in 0..n {
            let pjk = p.get(j, k);
            if pjk == 0.0 {
                continue;
            }
            let w = 0.25 * pij * pjk;
            let vec = if k == i { vec![(i, 2.0), (j, -2.0)] } else { vec![(i, 1.0), (j, -2.0), (k, 1.0)] };
            // Indices are distinct, so each unordered pair is visited once and
            // add_sym fills both mirrored entries.
            for (s, &(a, x)) in vec.iter().enumerate() {
                for &(b, y) in &vec[s..] {
                    out.add_sym(a, b, w * x * y);
                }
            }
        }
    }
    Ok(out)
}

/// `d* = max_i max_{j∼i} d_i / A_ij`.
pub fn d_star(g: &Hypergraph) -> f64 {
    let a = operators::adjacency(g);
    let mut best = 0.0f64;
    for i in 0..g.n() {
        for &j in g.neighbors(i) {
            best = best.max(g.degree(i) as f64 / a.get(i, j));
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdCertificate {
    pub dimension: Dimension,
    pub k: f64,
    pub holds: bool,
    pub worst_vertex: usize,
    pub min_eigenvalue: f64,
}

/// Per-vertex local data for repeated CD checks at different `K`.
struct LocalForms {
    base: SymMatrix,
    gamma: SymMatrix,
    full_rank: bool,
}

fn restrict(m: &SymMatrix, idx: &[usize]) -> SymMatrix {
    SymMatrix::from_upper(idx.len(), |a, b| m.get(idx[a], idx[b]))
}

fn local_forms(g: &Hypergraph, inv_m: f64) -> Result<Vec<LocalForms>, CurvatureError> {
    let p = operators::transition_kernel(g)?;
    let dist = g.distances();
    (0..g.n())
        .into_par_iter()
        .map(|i| {
            let f = forms_with_kernel(&p, i);
            let ball: Vec<usize> =
                (0..g.n()).filter(|&v| dist.get(i, v).is_some_and(|d| d <= 2)).collect();
            let mut base = f.gamma2.clone();
            for r in 0..g.n() {
                for c in r..g.n() {
                    base.add_sym(r, c, -inv_m * f.delta_row[r] * f.delta_row[c]);
                }
            }
            Ok(LocalForms {
                full_rank: ball.len() == g.n(),
                base: restrict(&base, &ball),
                gamma: restrict(&f.gamma, &ball),
            })
        })
        .collect()
}

fn check_forms(forms: &[LocalForms], k: f64) -> Result<(bool, usize, f64), CurvatureError> {
    let mins: Vec<f64> = forms
        .par_iter()
        .map(|lf| {
            let m = lf.base.add_scaled(-k, &lf.gamma);
            let s = spectra::sym_eigen(&m, spectra::CLUSTER_TOL)?;
            // Outside the 2-ball the form vanishes, contributing zero eigenvalues.
            Ok(if lf.full_rank { s.min() } else { s.min().min(0.0) })
        })
        .collect::<Result<_, SpectraError>>()?;
    let (worst, &min) = mins
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .expect("at least one vertex");
    Ok((min >= PSD_TOL, worst, min))
}

/// Tests `Γ₂ − (1/m) q qᵀ − K Γ ⪰ 0` at every vertex.
pub fn cd_check(g: &Hypergraph, m: Dimension, k: f64) -> Result<CdCertificate, CurvatureError> {
    let inv_m = m.inverse()?;
    let forms = local_forms(g, inv_m)?;
    let (holds, worst_vertex, min_eigenvalue) = check_forms(&forms, k)?;
    Ok(CdCertificate { dimension: m, k, holds, worst_vertex, min_eigenvalue })
}

/// Largest `K` (to within [`BEST_K_TOL`]) for which CD(m, K) holds.
pub fn best_k(g: &Hypergraph, m: Dimension) -> Result<f64, CurvatureError> {
    let inv_m = m.inverse()?;
    let forms = local_forms(g, inv_m)?;
    let holds = |k: f64| check_forms(&forms, k).map(|r| r.0);
    let dmax = g.max_degree().max(1) as f64;
    let (mut lo, mut hi) = (-4.0 * dmax, 2.0);
    let mut width = hi - lo;
    while !holds(lo)? {
        width *= 2.0;
        hi = lo;
        lo -= width;
    }
    while holds(hi)? {
        width *= 2.0;
        lo = hi;
        hi += width;
    }
    while hi - lo > BEST_K_TOL {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WassersteinResult {
    pub w1: f64,
    /// Full `n × n` coupling.
    pub plan: Vec<Vec<f64>>,
    pub certified: bool,
    pub dual_gap: f64,
    pub min_reduced_cost: f64,
}

fn check_distribution(d: &[f64], n: usize, which: &'static str) -> Result<(), CurvatureError> {
    if d.len() != n || d.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(CurvatureError::NotDistribution { which });
    }
    if (d.iter().sum::<f64>() - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(CurvatureError::NotDistribution { which });
    }
    Ok(())
}

pub fn wasserstein(g: &Hypergraph, mu: &[f64], nu: &[f64]) -> Result<WassersteinResult, CurvatureError> {
    wasserstein_with(g, &g.distances(), mu, nu)
}

fn wasserstein_with(
    g: &Hypergraph,
    dist: &DistanceMatrix,
    mu: &[f64],
    nu: &[f64],
) -> Result<WassersteinResult, CurvatureError> {
    let n = g.n();
    check_distribution(mu, n, "mu")?;
    check_distribution(nu, n, "nu")?;
    if !g.is_connected() {
        return Err(CurvatureError::Disconnected);
    }
    let src: Vec<usize> = (0..n).filter(|&v| mu[v] > 0.0).collect();
    let dst: Vec<usize> = (0..n).filter(|&v| nu[v] > 0.0).collect();
    let cost: Vec<Vec<f64>> = src
        .iter()
        .map(|&u| dst.iter().map(|&v| dist.get(u, v).expect("connected") as f64).collect())
        .collect();
    let a: Vec<f64> = src.iter().map(|&u| mu[u]).collect();
    let b: Vec<f64> = dst.iter().map(|&v| nu[v]).collect();
    let sol = transport::solve(&a, &b, &cost)?;
    let mut plan = vec![vec![0.0; n]; n];
    for (r, &u) in src.iter().enumerate() {
        for (c, &v) in dst.iter().enumerate() {
            plan[u][v] = sol.plan[r][c];
        }
    }
    Ok(WassersteinResult {
        w1: sol.cost,
        plan,
        certified: sol.certified(),
        dual_gap: (sol.cost - sol.dual_objective).abs(),
        min_reduced_cost: sol.min_reduced_cost,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OllivierResult {
    pub pair: (usize, usize),
    pub kappa: f64,
    pub w1: f64,
    pub transport_plan: Vec<Vec<f64>>,
    pub certified: bool,
}

/// `κ(x, y) = 1 − T₁(p_x, p_y)` for adjacent `x, y`; `p_x` is row `x` of `P`.
pub fn ollivier_kappa(g: &Hypergraph, x: usize, y: usize) -> Result<OllivierResult, CurvatureError> {
    let p = operators::transition_kernel(g)?;
    ollivier_with(g, &p, &g.distances(), x, y)
}

fn ollivier_with(
    g: &Hypergraph,
    p: &RowStochastic,
    dist: &DistanceMatrix,
    x: usize,
    y: usize,
) -> Result<OllivierResult, CurvatureError> {
    for v in [x, y] {
        if v >= g.n() {
            return Err(CurvatureError::VertexOutOfRange { vertex: v, n: g.n() });
        }
    }
    if !g.adjacent(x, y) {
        return Err(CurvatureError::NotAdjacent(x, y));
    }
    let w = wasserstein_with(g, dist, p.row(x), p.row(y))?;
    Ok(OllivierResult {
        pair: (x, y),
        kappa: 1.0 - w.w1,
        w1: w.w1,
        transport_plan: w.plan,
        certified: w.certified,
    })
}

/// Curvature of every adjacent pair `x < y`, in lexicographic order.
pub fn all_pair_curvatures(g: &Hypergraph) -> Result<Vec<OllivierResult>, CurvatureError> {
    let p = operators::transition_kernel(g)?;
    let dist = g.distances();
    let pairs: Vec<(usize, usize)> = (0..g.n())
        .flat_map(|x| g.neighbors(x).iter().filter(move |&&y| y > x).map(move |&y| (x, y)))
        .collect();
    pairs.par_iter().map(|&(x, y)| ollivier_with(g, &p, &dist, x, y)).collect()
}

/// `κ(x) = (1/d_x) Σ_{y∼x} κ(x, y)`.
pub fn scalar_curvature(g: &Hypergraph, x: usize) -> Result<f64, CurvatureError> {
    if x >= g.n() {
        return Err(CurvatureError::VertexOutOfRange { vertex: x, n: g.n() });
    }
    let p = operators::transition_kernel(g)?;
    let dist = g.distances();
    let mut sum = 0.0;
    for &y in g.neighbors(x) {
        sum += ollivier_with(g, &p, &dist, x, y)?.kappa;
    }
    Ok(sum / g.degree(x) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub pairs: Vec<OllivierResult>,
    pub scalar: Vec<f64>,
    pub min_kappa: f64,
    pub d_star: f64,
    pub cd_default: CdCertificate,
    pub best_k2: f64,
}

pub fn curvature_report(g: &Hypergraph) -> Result<CurvatureReport, CurvatureError> {
    if !g.is_connected() {
        return Err(CurvatureError::Disconnected);
    }
    let pairs = all_pair_curvatures(g)?;
    let mut sums = vec![0.0; g.n()];
    for r in &pairs {
        sums[r.pair.0] += r.kappa;
        sums[r.pair.1] += r.kappa;
    }
    // κ(x, y) = κ(y, x) since both equal 1 − T₁ of the same pair of measures.
    let scalar = sums.iter().enumerate().map(|(x, s)| s / g.degree(x) as f64).collect();
    let min_kappa = pairs.iter().map(|r| r.kappa).fold(f64::INFINITY, f64::min);
    let ds = d_star(g);
    let cd_default = cd_check(g, Dimension::Finite(2.0), 1.0 / ds - 1.0)?;
    let best_k2 = best_k(g, Dimension::Finite(2.0))?;
    Ok(CurvatureReport { pairs, scalar, min_kappa, d_star: ds, cd_default, best_k2 })
}

/// CRV-2 and CRV-3 reports for `g`.
pub fn curvature_spectral_audit(g: &Hypergraph) -> (crate::bounds::BoundReport, crate::bounds::BoundReport) {
    use crate::bounds::{evaluate, BoundId, EvalOptions};
    let opts = EvalOptions::default();
    let crv2 = evaluate(g, BoundId::Crv2, &opts).expect("CRV-2 takes no required options");
    let crv3 = evaluate(g, BoundId::Crv3, &opts).expect("CRV-3 takes no required options");
    (crv2, crv3)
}
