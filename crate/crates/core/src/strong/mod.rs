//! Numerical verification of the Strong Spectral Property (SSP) and the
//! Strong Multiplicity Property (SMP), SSP-respecting direct sums, and
//! spectrum-preserving lifts to spanning supergraphs.
//!
//! The unknowns are the entries `x_ij` (`i < j`) of a symmetric `X` at the
//! non-edges of the pattern of `A`. The constraint rows are the strictly upper
//! entries of the antisymmetric commutator `[A, X]`, plus for SMP one trace
//! row `tr(E X) = 0` per spectral projector `E` of `A`. The projectors span
//! the same space as the powers `A^0, ..., A^(n-1)`.

mod lift;

pub use lift::{lift_to_supergraph, LiftOptions, LiftReport};

use nalgebra::{DMatrix, SVD};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectra::{spectrum, symmetric_eigen, SpectraError, SymmetricMatrix, ToleranceConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum StrongMode {
    Ssp,
    Smp,
}

impl std::fmt::Display for StrongMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StrongMode::Ssp => "SSP",
            StrongMode::Smp => "SMP",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrongError {
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("summand {which} fails the {mode} check (nullity {nullity})")]
    SummandFails { which: usize, mode: StrongMode, nullity: usize },
    #[error("spectra overlap: cluster {left} of the first summand and {right} of the second are {distance:e} apart")]
    SpectraOverlap { left: f64, right: f64, distance: f64 },
    #[error("{mode} fails after the operation (nullity {nullity})")]
    Postcondition { mode: StrongMode, nullity: usize },
    #[error("matrix fails the {mode} check (nullity {nullity})")]
    PropertyFails { mode: StrongMode, nullity: usize },
    #[error("matrix has an entry at ({u},{v}) but that pair is not an edge of the target graph")]
    NotSupergraph { u: usize, v: usize },
    #[error("matrix dimension {matrix} does not match graph order {graph}")]
    DimensionMismatch { matrix: usize, graph: usize },
    #[error("lift did not converge after {restarts} restarts (final residual {residual:e}, epsilon {epsilon:e})")]
    LiftFailed { residual: f64, restarts: usize, epsilon: f64 },
}

/// Outcome of a strong property check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongPropertyReport {
    pub mode: StrongMode,
    pub holds: bool,
    pub nullity: usize,
    /// Number of free entries of `X`.
    pub unknowns: usize,
    /// Singular values of the normalized constraint matrix, descending.
    pub singular_values: Vec<f64>,
    /// A unit-Frobenius-norm solution `X` when the property fails.
    pub witness: Option<SymmetricMatrix>,
    /// For a witness: `||[A,X]||_F / (||A||_F ||X||_F)` and, for SMP, the
    /// largest normalized trace residual.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

/// Entries with magnitude below `cfg.entry_floor` are free positions of `X`.
pub fn strong_property_check(
    a: &SymmetricMatrix,
    mode: StrongMode,
    cfg: &ToleranceConfig,
) -> Result<StrongPropertyReport, StrongError> {
    let n = a.dim();
    let free: Vec<(usize, usize)> =
        (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).filter(|&(i, j)| a.get(i, j).abs() < cfg.entry_floor).collect();
    if free.is_empty() {
        return Ok(StrongPropertyReport {
            mode,
            holds: true,
            nullity: 0,
            unknowns: 0,
            singular_values: vec![],
            witness: None,
            residuals: vec![],
            iterations: 0,
        });
    }

    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let m = a.as_matrix() / scale;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for p in 0..n {
        for q in (p + 1)..n {
            let row: Vec<f64> = free
                .iter()
                .map(|&(i, j)| {
                    let mut c = 0.0;
                    if q == j {
                        c += m[(p, i)];
                    }
                    if q == i {
                        c += m[(p, j)];
                    }
                    if p == i {
                        c -= m[(j, q)];
                    }
                    if p == j {
                        c -= m[(i, q)];
                    }
                    c
                })
                .collect();
            rows.push(row);
        }
    }
    let projectors = if mode == StrongMode::Smp { spectral_projectors(a, cfg)? } else { vec![] };
    for e in &projectors {
        rows.push(free.iter().map(|&(i, j)| 2.0 * e[(i, j)]).collect());
    }

    let u = free.len();
    let r = rows.len().max(u);
    let c = DMatrix::from_fn(r, u, |i, j| rows.get(i).map_or(0.0, |row| row[j]));
    let svd = SVD::new(c.clone(), false, true);
    let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let singular_values: Vec<f64> = idx.iter().map(|&k| svd.singular_values[k]).collect();
    let sigma_max = singular_values[0];
    let nullity = singular_values.iter().filter(|&&s| s <= cfg.rank_tol * sigma_max).count();

    let mut witness = None;
    let mut residuals = vec![];
    if nullity > 0 {
        let k = *idx.last().expect("nonempty");
        let mut x = SymmetricMatrix::zeros(n);
        for (col, &(i, j)) in free.iter().enumerate() {
            x.set(i, j, v_t[(k, col)] / std::f64::consts::SQRT_2);
        }
        let comm = a.as_matrix() * x.as_matrix() - x.as_matrix() * a.as_matrix();
        residuals.push(comm.norm() / (a.frobenius_norm().max(f64::MIN_POSITIVE) * x.frobenius_norm()));
        if mode == StrongMode::Smp {
            let worst = projectors
                .iter()
                .map(|e| (e * x.as_matrix()).trace().abs() / (e.norm() * x.frobenius_norm()))
                .fold(0.0, f64::max);
            residuals.push(worst);
        }
        witness = Some(x);
    }
    Ok(StrongPropertyReport {
        mode,
        holds: nullity == 0,
        nullity,
        unknowns: u,
        singular_values,
        witness,
        residuals,
        iterations: 0,
    })
}

fn spectral_projectors(a: &SymmetricMatrix, cfg: &ToleranceConfig) -> Result<Vec<DMatrix<f64>>, SpectraError> {
    let eig = symmetric_eigen(a)?;
    let summary = crate::spectra::SpectrumSummary::from_sorted_values(&eig.values, cfg.eig_tol);
    let n = a.dim();
    let mut out = Vec::with_capacity(summary.q);
    let mut start = 0;
    for cl in &summary.clusters {
        let mut e = DMatrix::zeros(n, n);
        for k in start..start + cl.multiplicity {
            let v = eig.vectors.column(k);
            e += v * v.transpose();
        }
        out.push(e);
        start += cl.multiplicity;
    }
    Ok(out)
}

/// `A1 ⊕ A2`, after checking that both summands have the property and that
/// their spectra are disjoint; the sum is re-checked before returning.
pub fn direct_sum_checked(
    a1: &SymmetricMatrix,
    a2: &SymmetricMatrix,
    mode: StrongMode,
    cfg: &ToleranceConfig,
) -> Result<(SymmetricMatrix, StrongPropertyReport), StrongError> {
    for (which, a) in [(1, a1), (2, a2)] {
        let r = strong_property_check(a, mode, cfg)?;
        if !r.holds {
            return Err(StrongError::SummandFails { which, mode, nullity: r.nullity });
        }
    }
    let s1 = spectrum(a1, cfg)?;
    let s2 = spectrum(a2, cfg)?;
    let gap = cfg.eig_tol * s1.spectral_radius().max(s2.spectral_radius()).max(1.0);
    if let Some((distance, left, right)) = s1.min_cluster_distance(&s2) {
        if distance <= gap {
            return Err(StrongError::SpectraOverlap { left, right, distance });
        }
    }
    let sum = a1.direct_sum(a2);
    let report = strong_property_check(&sum, mode, cfg)?;
    if !report.holds {
        return Err(StrongError::Postcondition { mode, nullity: report.nullity });
    }
    Ok((sum, report))
}
