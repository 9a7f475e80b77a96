//! Dense matrix containers: symmetric, general square, and row-stochastic.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Entrywise symmetry tolerance.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix is not symmetric: |M[{i}][{j}] - M[{j}][{i}]| = {gap:e}")]
    NotSymmetric { i: usize, j: usize, gap: f64 },
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("row {row} sums to {sum}, not 1")]
    NotStochastic { row: usize, sum: f64 },
    #[error("row {row} has a negative entry")]
    NegativeEntry { row: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self, MatrixError> {
        if data.len() != n * n {
            return Err(MatrixError::Shape { expected: n * n, got: data.len() });
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SquareMatrix { n, data }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn mul(&self, other: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> SquareMatrix {
        SquareMatrix::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn max_abs_diff(&self, other: &SquareMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Dense text export: one row per line, space separated, 17 significant digits.
    pub fn to_dense_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{v:.16e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_dense_text(text: &str) -> Result<Self, String> {
        let rows: Vec<Vec<f64>> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split_whitespace().map(|t| t.parse::<f64>().map_err(|e| e.to_string())).collect())
            .collect::<Result<_, _>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err("matrix text is not square".into());
        }
        Ok(SquareMatrix { n, data: rows.concat() })
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dense symmetric matrix; symmetry is checked at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymMatrix(SquareMatrix);

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix(SquareMatrix::zeros(n))
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix(SquareMatrix::identity(n))
    }

    pub fn try_from_square(m: SquareMatrix) -> Result<Self, MatrixError> {
        let n = m.order();
        let scale = m.data.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        for i in 0..n {
            for j in i + 1..n {
                let gap = (m.get(i, j) - m.get(j, i)).abs();
                if gap > SYMMETRY_TOL * scale {
                    return Err(MatrixError::NotSymmetric { i, j, gap });
                }
            }
        }
        Ok(SymMatrix(m))
    }

    /// Builds from the upper triangle `f(i, j)` with `i <= j`, mirrored.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        SymMatrix(m)
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.0.set(i, j, v);
        self.0.set(j, i, v);
    }

    pub fn add_sym(&mut self, i: usize, j: usize, v: f64) {
        let cur = self.get(i, j);
        self.0.set(i, j, cur + v);
        if i != j {
            self.0.set(j, i, cur + v);
        }
    }

    pub fn as_square(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn into_square(self) -> SquareMatrix {
        self.0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.0.mul_vec(x)
    }

    /// `x^T M x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.mul_vec(x))
    }

    pub fn frobenius(&self) -> f64 {
        self.0.frobenius()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.order()).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        SymMatrix(SquareMatrix { n: self.order(), data: self.0.data.iter().map(|v| v * s).collect() })
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.order(), other.order());
        let data = self.0.data.iter().zip(&other.0.data).map(|(a, b)| a + s * b).collect();
        SymMatrix(SquareMatrix { n: self.order(), data })
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    pub fn to_dense_text(&self) -> String {
        self.0.to_dense_text()
    }
}

/// Square matrix with nonnegative rows summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RowStochastic(SquareMatrix);

impl RowStochastic {
    pub const ROW_SUM_TOL: f64 = 1e-12;

    pub fn try_new(m: SquareMatrix) -> Result<Self, MatrixError> {
        for i in 0..m.order() {
            let row = m.row(i);
            if row.iter().any(|&v| v < 0.0) {
                return Err(MatrixError::NegativeEntry { row: i });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > Self::ROW_SUM_TOL {
                return Err(MatrixError::NotStochastic { row: i, sum });
            }
        }
        Ok(RowStochastic(m))
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    pub fn as_square(&self) -> &SquareMatrix {
        &self.0
    }

    /// `(P f)(x) = sum_y P(x, y) f(y)`.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.0.mul_vec(f)
    }

    /// Row-vector action `(mu P)(y) = sum_x mu(x) P(x, y)`.
    pub fn apply_left(&self, mu: &[f64]) -> Vec<f64> {
        let n = self.order();
        let mut out = vec![0.0; n];
        for (x, &w) in mu.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (o, p) in out.iter_mut().zip(self.row(x)) {
                *o += w * p;
            }
        }
        out
    }

    pub fn to_dense_text(&self) -> String {
        self.0.to_dense_text()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetry_check() {
        let m = SquareMatrix::from_row_major(2, vec![1.0, 2.0, 2.0 + 1e-9, 1.0]).unwrap();
        assert!(matches!(SymMatrix::try_from_square(m), Err(MatrixError::NotSymmetric { .. })));
        let m = SquareMatrix::from_row_major(2, vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(SymMatrix::try_from_square(m).is_ok());
    }

    #[test]
    fn dense_text_round_trip() {
        let m = SquareMatrix::from_row_major(2, vec![1.0 / 3.0, -0.1, 2e-300, 7.0]).unwrap();
        let text = m.to_dense_text();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("3.3333333333333331e-1 "));
        assert_eq!(SquareMatrix::parse_dense_text(&text).unwrap(), m);
    }

    #[test]
    fn stochastic_rows() {
        let p = SquareMatrix::from_row_major(2, vec![0.0, 1.0, 0.5, 0.5]).unwrap();
        let p = RowStochastic::try_new(p).unwrap();
        assert_eq!(p.apply(&[1.0, 3.0]), vec![3.0, 2.0]);
        assert_eq!(p.apply_left(&[1.0 / 3.0, 2.0 / 3.0]), vec![1.0 / 3.0, 2.0 / 3.0]);
        let bad = SquareMatrix::from_row_major(1, vec![0.9]).unwrap();
        assert!(RowStochastic::try_new(bad).is_err());
    }
}
