//! Transportation simplex for small balanced transport problems.
//!
//! Northwest-corner start, MODI potentials on the basis tree, Bland's rule for
//! both the entering and the leaving cell. The result carries the dual
//! potentials so optimality can be checked independently of the iteration.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CERT_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-12;
const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransportError {
    #[error("supplies sum to {supply} but demands sum to {demand}")]
    Unbalanced { supply: f64, demand: f64 },
    #[error("cost matrix is {rows}x{cols}, expected {m}x{n}")]
    Shape { rows: usize, cols: usize, m: usize, n: usize },
    #[error("masses must be finite and nonnegative")]
    BadMass,
    #[error("empty supply or demand")]
    Empty,
    #[error("pivot budget exhausted")]
    NoConvergence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportSolution {
    /// `plan[i][j]` is the mass moved from source `i` to sink `j`.
    pub plan: Vec<Vec<f64>>,
    pub cost: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub dual_objective: f64,
    /// `min_ij (c_ij − u_i − v_j)`.
    pub min_reduced_cost: f64,
    pub pivots: usize,
}

impl TransportSolution {
    pub fn certified(&self) -> bool {
        self.min_reduced_cost >= -CERT_TOL && (self.cost - self.dual_objective).abs() <= CERT_TOL
    }
}

pub fn solve(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> Result<TransportSolution, TransportError> {
    let (m, n) = (supply.len(), demand.len());
    if m == 0 || n == 0 {
        return Err(TransportError::Empty);
    }
    if cost.len() != m || cost.iter().any(|r| r.len() != n) {
        return Err(TransportError::Shape {
            rows: cost.len(),
            cols: cost.first().map_or(0, Vec::len),
            m,
            n,
        });
    }
    if supply.iter().chain(demand).any(|&x| !x.is_finite() || x < 0.0) {
        return Err(TransportError::BadMass);
    }
    let (ts, td): (f64, f64) = (supply.iter().sum(), demand.iter().sum());
    if (ts - td).abs() > 1e-12 * ts.max(td).max(1.0) {
        return Err(TransportError::Unbalanced { supply: ts, demand: td });
    }

    let mut flow = vec![vec![0.0; n]; m];
    let mut basis: Vec<(usize, usize)> = Vec::with_capacity(m + n - 1);
    {
        let (mut a, mut b) = (supply.to_vec(), demand.to_vec());
        let (mut i, mut j) = (0, 0);
        loop {
            let x = a[i].min(b[j]);
            flow[i][j] = x;
            basis.push((i, j));
            a[i] -= x;
            b[j] -= x;
            if i == m - 1 && j == n - 1 {
                break;
            }
            // Advance exactly one index so the basis stays a spanning tree.
            if j == n - 1 || (i < m - 1 && a[i] <= b[j]) {
                i += 1;
            } else {
                j += 1;
            }
        }
    }
    debug_assert_eq!(basis.len(), m + n - 1);

    let mut pivots = 0;
    loop {
        let (u, v) = potentials(m, n, &basis, cost);
        let mut entering = None;
        'scan: for i in 0..m {
            for j in 0..n {
                if cost[i][j] - u[i] - v[j] < -PIVOT_TOL * (1.0 + cost[i][j].abs()) && !basis.contains(&(i, j)) {
                    entering = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((ei, ej)) = entering else {
            return Ok(finish(flow, cost, supply, demand, u, v, pivots));
        };
        if pivots == MAX_PIVOTS {
            return Err(TransportError::NoConvergence);
        }
        pivots += 1;

        let path = tree_path(m, n, &basis, ei, m + ej);
        // Cells on the path from column ej back to row ei alternate −, +, −, ...
        let minus: Vec<usize> = path.iter().rev().step_by(2).copied().collect();
        let plus: Vec<usize> = path.iter().rev().skip(1).step_by(2).copied().collect();
        let theta = minus.iter().map(|&k| flow[basis[k].0][basis[k].1]).fold(f64::INFINITY, f64::min);
        let leave = *minus
            .iter()
            .filter(|&&k| flow[basis[k].0][basis[k].1] <= theta)
            .min_by_key(|&&k| basis[k])
            .expect("cycle has a minus cell");
        for &k in &minus {
            let (i, j) = basis[k];
            flow[i][j] -= theta;
        }
        for &k in &plus {
            let (i, j) = basis[k];
            flow[i][j] += theta;
        }
        let (li, lj) = basis[leave];
        flow[li][lj] = 0.0;
        flow[ei][ej] = theta;
        basis[leave] = (ei, ej);
    }
}

fn potentials(m: usize, n: usize, basis: &[(usize, usize)], cost: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let adj = tree_adjacency(m, n, basis);
    let mut pot = vec![f64::NAN; m + n];
    pot[0] = 0.0;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for &(y, k) in &adj[x] {
            if pot[y].is_nan() {
                let (i, j) = basis[k];
                pot[y] = cost[i][j] - pot[x];
                queue.push_back(y);
            }
        }
    }
    let v = pot.split_off(m);
    (pot, v)
}

fn tree_adjacency(m: usize, n: usize, basis: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); m + n];
    for (k, &(i, j)) in basis.iter().enumerate() {
        adj[i].push((m + j, k));
        adj[m + j].push((i, k));
    }
    adj
}

/// Basis indices along the tree path from node `from` to node `to`.
fn tree_path(m: usize, n: usize, basis: &[(usize, usize)], from: usize, to: usize) -> Vec<usize> {
    let adj = tree_adjacency(m, n, basis);
    let mut via: Vec<Option<(usize, usize)>> = vec![None; m + n];
    let mut seen = vec![false; m + n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &(y, k) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                via[y] = Some((x, k));
                queue.push_back(y);
            }
        }
    }
    let mut path = Vec::new();
    let mut x = to;
    while let Some((prev, k)) = via[x] {
        path.push(k);
        x = prev;
    }
    path.reverse();
    path
}

fn finish(
    flow: Vec<Vec<f64>>,
    cost: &[Vec<f64>],
    supply: &[f64],
    demand: &[f64],
    u: Vec<f64>,
    v: Vec<f64>,
    pivots: usize,
) -> TransportSolution {
    let total: f64 = flow.iter().zip(cost).flat_map(|(fr, cr)| fr.iter().zip(cr).map(|(f, c)| f * c)).sum();
    let dual: f64 = supply.iter().zip(&u).map(|(a, x)| a * x).sum::<f64>()
        + demand.iter().zip(&v).map(|(b, y)| b * y).sum::<f64>();
    let mut min_rc = f64::INFINITY;
    for (i, row) in cost.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            min_rc = min_rc.min(c - u[i] - v[j]);
        }
    }
    TransportSolution { plan: flow, cost: total, u, v, dual_objective: dual, min_reduced_cost: min_rc, pivots }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_marginals() {
        let cost = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let s = solve(&[0.5, 0.5], &[0.5, 0.5], &cost).unwrap();
        assert_eq!(s.cost, 0.0);
        assert!(s.certified());
    }

    #[test]
    fn textbook_problem() {
        // Classic 3x4 instance with optimum 743.
        let cost = vec![
            vec![19.0, 30.0, 50.0, 10.0],
            vec![70.0, 30.0, 40.0, 60.0],
            vec![40.0, 8.0, 70.0, 20.0],
        ];
        let s = solve(&[7.0, 9.0, 18.0], &[5.0, 8.0, 7.0, 14.0], &cost).unwrap();
        assert!((s.cost - 743.0).abs() < 1e-9);
        assert!(s.certified());
        for (i, row) in s.plan.iter().enumerate() {
            assert!((row.iter().sum::<f64>() - [7.0, 9.0, 18.0][i]).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_start() {
        let cost = vec![vec![2.0, 1.0, 3.0], vec![1.0, 2.0, 1.0], vec![3.0, 1.0, 2.0]];
        let s = solve(&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0], &cost).unwrap();
        assert!((s.cost - 4.0).abs() < 1e-12);
        assert!(s.certified());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(solve(&[1.0], &[0.5], &[vec![0.0]]), Err(TransportError::Unbalanced { .. })));
        assert!(matches!(solve(&[1.0], &[1.0], &[vec![0.0, 1.0]]), Err(TransportError::Shape { .. })));
        assert!(matches!(solve(&[], &[], &[]), Err(TransportError::Empty)));
        assert!(matches!(solve(&[-1.0, 2.0], &[1.0], &[vec![0.0], vec![0.0]]), Err(TransportError::BadMass)));
    }
}
