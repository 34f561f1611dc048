use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{SpectraError, SymmetricMatrix, ToleranceConfig};

/// Per-pair residual bound `||Av - lambda v|| <= RESIDUAL_TOL * ||A||`.
const RESIDUAL_TOL: f64 = 1e-10;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl EigenDecomposition {
    /// Spectral norm of the decomposed matrix.
    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    /// Rebuilds `V f(diag) V^T`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> SymmetricMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let fk = f(lambda);
            for i in 0..n {
                scaled[(i, k)] *= fk;
            }
        }
        let m = scaled * self.vectors.transpose();
        SymmetricMatrix::from_fn(n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
    }
}

pub fn symmetric_eigen(a: &SymmetricMatrix) -> Result<EigenDecomposition, SpectraError> {
    let n = a.dim();
    if n == 0 {
        return Ok(EigenDecomposition { values: vec![], vectors: DMatrix::zeros(0, 0) });
    }
    let eig = SymmetricEigen::try_new(a.as_matrix().clone(), f64::EPSILON, 10_000).ok_or(
        SpectraError::NoConvergence { residual: f64::INFINITY, norm: a.frobenius_norm() },
    )?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values: Vec<f64> = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, idx[k])]);

    let norm = values.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let residual = (0..n)
        .map(|k| (a.as_matrix() * vectors.column(k) - vectors.column(k) * values[k]).norm())
        .fold(0.0f64, f64::max);
    if residual > RESIDUAL_TOL * norm.max(f64::MIN_POSITIVE) && residual > 0.0 {
        return Err(SpectraError::NoConvergence { residual, norm });
    }
    Ok(EigenDecomposition { values, vectors })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenCluster {
    /// Mean of the clustered eigenvalues.
    pub value: f64,
    pub multiplicity: usize,
}

/// Distinct eigenvalues of a symmetric matrix under a clustering tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub clusters: Vec<EigenCluster>,
    pub tol: f64,
    pub q: usize,
    /// All eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
}

impl SpectrumSummary {
    pub fn from_sorted_values(values: &[f64], eig_tol: f64) -> Self {
        let radius = values.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let gap = eig_tol * radius.max(1.0);
        let mut clusters: Vec<(f64, usize)> = Vec::new();
        let mut last = f64::NEG_INFINITY;
        for &v in values {
            match clusters.last_mut() {
                Some((sum, count)) if v - last <= gap => {
                    *sum += v;
                    *count += 1;
                }
                _ => clusters.push((v, 1)),
            }
            last = v;
        }
        let clusters: Vec<EigenCluster> = clusters
            .into_iter()
            .map(|(sum, count)| EigenCluster { value: sum / count as f64, multiplicity: count })
            .collect();
        SpectrumSummary { q: clusters.len(), clusters, tol: eig_tol, eigenvalues: values.to_vec() }
    }

    pub fn distinct_values(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| c.value).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.multiplicity).collect()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    /// Multiplicity of the cluster containing `value`, or 0.
    pub fn multiplicity_of(&self, value: f64) -> usize {
        let gap = self.tol * self.spectral_radius().max(1.0);
        self.clusters.iter().find(|c| (c.value - value).abs() <= gap).map_or(0, |c| c.multiplicity)
    }

    /// Whether both summaries have the same distinct eigenvalues within `tol`
    /// (relative to `max(1, radius)`).
    pub fn same_distinct_set(&self, other: &SpectrumSummary, tol: f64) -> bool {
        let scale = self.spectral_radius().max(other.spectral_radius()).max(1.0);
        self.q == other.q
            && self.clusters.iter().zip(&other.clusters).all(|(a, b)| (a.value - b.value).abs() <= tol * scale)
    }

    /// Smallest distance between a cluster of `self` and one of `other`.
    pub fn min_cluster_distance(&self, other: &SpectrumSummary) -> Option<(f64, f64, f64)> {
        let mut best: Option<(f64, f64, f64)> = None;
        for a in &self.clusters {
            for b in &other.clusters {
                let d = (a.value - b.value).abs();
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, a.value, b.value));
                }
            }
        }
        best
    }
}

pub fn spectrum(a: &SymmetricMatrix, cfg: &ToleranceConfig) -> Result<SpectrumSummary, SpectraError> {
    let eig = symmetric_eigen(a)?;
    Ok(SpectrumSummary::from_sorted_values(&eig.values, cfg.eig_tol))
}

/// Symmetric PSD square root; eigenvalues down to `-eig_tol * max(1, ||A||)`
/// are clamped to zero.
pub fn psd_sqrt(a: &SymmetricMatrix, cfg: &ToleranceConfig) -> Result<SymmetricMatrix, SpectraError> {
    let eig = symmetric_eigen(a)?;
    let norm = eig.norm();
    if let Some(&min) = eig.values.first() {
        if min < -cfg.eig_tol * norm.max(1.0) {
            return Err(SpectraError::NotPsd { min_eigenvalue: min, norm });
        }
    }
    // rounding-level eigenvalues of a singular input map to an exact zero
    let floor = ROUNDING_ZERO * norm.max(1.0);
    Ok(eig.apply(|l| if l <= floor { 0.0 } else { l.sqrt() }))
}

const ROUNDING_ZERO: f64 = 1e-13;
