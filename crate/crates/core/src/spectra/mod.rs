//! Dense symmetric matrices, their spectra, PSD square roots and pattern
//! conformance against a graph.

mod eigen;
mod pattern;
mod text;

pub use eigen::{psd_sqrt, spectrum, symmetric_eigen, EigenCluster, EigenDecomposition, SpectrumSummary};
pub use pattern::{pattern_graph, pattern_matches, PatternReport, PatternViolation};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative asymmetry accepted (and averaged away) when wrapping a raw matrix.
const SYMMETRY_SLACK: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry ({i},{j}) is not finite")]
    NonFinite { i: usize, j: usize },
    #[error("entries ({i},{j}) and ({j},{i}) differ by {diff:e}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },
    #[error("eigensolver did not converge (max residual {residual:e}, matrix norm {norm:e})")]
    NoConvergence { residual: f64, norm: f64 },
    #[error("matrix is not positive semidefinite: eigenvalue {min_eigenvalue:e} with norm {norm:e}")]
    NotPsd { min_eigenvalue: f64, norm: f64 },
    #[error("matrix dimension {matrix} does not match graph order {graph}")]
    DimensionMismatch { matrix: usize, graph: usize },
    #[error("matrix text line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid tolerance configuration: {0}")]
    Tolerance(String),
}

/// Numerical tolerances shared by every check in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative gap below which sorted eigenvalues belong to one cluster.
    pub eig_tol: f64,
    /// Singular values below `rank_tol * sigma_max` count as zero.
    pub rank_tol: f64,
    /// Smallest magnitude treated as a structurally nonzero entry.
    pub entry_floor: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { eig_tol: 1e-8, rank_tol: 1e-8, entry_floor: 1e-6 }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<(), SpectraError> {
        let all = [self.eig_tol, self.rank_tol, self.entry_floor];
        if all.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(SpectraError::Tolerance("tolerances must be positive and finite".into()));
        }
        if self.entry_floor <= self.eig_tol {
            return Err(SpectraError::Tolerance("entry_floor must exceed eig_tol".into()));
        }
        Ok(())
    }
}

/// A dense real symmetric matrix. Writes go to both `(i,j)` and `(j,i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    data: DMatrix<f64>,
}

impl SymmetricMatrix {
    /// Wraps a square finite matrix. Asymmetry up to `1e-10` relative to the
    /// largest entry is averaged out; anything larger is an error.
    pub fn from_dmatrix(m: DMatrix<f64>) -> Result<Self, SpectraError> {
        let (rows, cols) = m.shape();
        if rows != cols {
            return Err(SpectraError::NotSquare { rows, cols });
        }
        let scale = m.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
        for i in 0..rows {
            for j in 0..cols {
                if !m[(i, j)].is_finite() {
                    return Err(SpectraError::NonFinite { i, j });
                }
            }
        }
        for i in 0..rows {
            for j in (i + 1)..cols {
                let diff = (m[(i, j)] - m[(j, i)]).abs();
                if diff > SYMMETRY_SLACK * scale {
                    return Err(SpectraError::NotSymmetric { i, j, diff });
                }
            }
        }
        let data = DMatrix::from_fn(rows, cols, |i, j| {
            if i == j {
                m[(i, i)]
            } else {
                0.5 * (m[(i, j)] + m[(j, i)])
            }
        });
        Ok(SymmetricMatrix { data })
    }

    /// Builds from `f(i, j)` evaluated on the upper triangle (`i <= j`).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[(i, j)] = v;
                data[(j, i)] = v;
            }
        }
        SymmetricMatrix { data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, SpectraError> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(SpectraError::NotSquare { rows: n, cols: r.len() });
        }
        Self::from_dmatrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix { data: DMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        SymmetricMatrix { data: DMatrix::identity(n, n) }
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[(i, j)] = value;
        self.data[(j, i)] = value;
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn trace(&self) -> f64 {
        self.data.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        SymmetricMatrix { data: &self.data * c }
    }

    /// `self + c I`.
    pub fn shifted(&self, c: f64) -> Self {
        let n = self.dim();
        SymmetricMatrix { data: &self.data + DMatrix::identity(n, n) * c }
    }

    /// Simultaneous row/column permutation: new index `i` is old `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self::from_fn(order.len(), |i, j| self.get(order[i], order[j]))
    }

    pub fn direct_sum(&self, other: &SymmetricMatrix) -> Self {
        let (a, b) = (self.dim(), other.dim());
        Self::from_fn(a + b, |i, j| match (i < a, j < a) {
            (true, true) => self.get(i, j),
            (false, false) => other.get(i - a, j - a),
            _ => 0.0,
        })
    }

    /// Largest entry of `|A^2 - I|`; zero exactly when `A` is an involution.
    pub fn involution_defect(&self) -> f64 {
        let n = self.dim();
        let sq = &self.data * &self.data - DMatrix::<f64>::identity(n, n);
        sq.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    /// Plain-text form: `n`, then `n` rows of 17-significant-digit values.
    pub fn to_text(&self) -> String {
        text::write(self)
    }

    pub fn from_text(s: &str) -> Result<Self, SpectraError> {
        text::read(s)
    }
}

impl Serialize for SymmetricMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymmetricMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        SymmetricMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        let m = DMatrix::from_row_slice(2, 3, &[0.0; 6]);
        assert!(matches!(SymmetricMatrix::from_dmatrix(m), Err(SpectraError::NotSquare { .. })));
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(matches!(SymmetricMatrix::from_dmatrix(m), Err(SpectraError::NotSymmetric { i: 0, j: 1, .. })));
        let m = DMatrix::from_row_slice(2, 2, &[f64::NAN, 0.0, 0.0, 0.0]);
        assert!(matches!(SymmetricMatrix::from_dmatrix(m), Err(SpectraError::NonFinite { i: 0, j: 0 })));
    }

    #[test]
    fn set_mirrors() {
        let mut a = SymmetricMatrix::zeros(3);
        a.set(0, 2, 5.0);
        assert_eq!(a.get(2, 0), 5.0);
    }

    #[test]
    fn tolerance_validation() {
        assert!(ToleranceConfig::default().validate().is_ok());
        let bad = ToleranceConfig { entry_floor: 1e-9, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = ToleranceConfig { rank_tol: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn direct_sum_and_permutation() {
        let a = SymmetricMatrix::from_diagonal(&[1.0, 2.0]);
        let b = SymmetricMatrix::from_diagonal(&[3.0]);
        let s = a.direct_sum(&b);
        assert_eq!(s.rows(), vec![vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 3.0]]);
        assert_eq!(s.permuted(&[2, 0, 1]).get(0, 0), 3.0);
    }
}
