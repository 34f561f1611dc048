//! Lifting a matrix with a strong property to a spanning supergraph.
//!
//! The iterate is always an exact orthogonal similarity `M = Q^T A Q`, so its
//! spectrum is the spectrum of `A`. Gauss-Newton acts on the skew generator
//! `K` of a Cayley update `Q <- Q (I - K/2)^{-1} (I + K/2)`, whose first-order
//! effect is `dM = MK - KM`. The equations pin every pair outside `E(A)`:
//! zero on the non-edges of `G`, `eps * s_uv` on the new edges, with random
//! signs `s_uv`. The strong property of `A` makes this map surjective at `A`.

use nalgebra::{DMatrix, SVD};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{strong_property_check, StrongError, StrongMode, StrongPropertyReport};
use crate::graph::Graph;
use crate::spectra::{pattern_matches, spectrum, SymmetricMatrix, ToleranceConfig};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftOptions {
    /// New-edge magnitude relative to `max(1, spectral radius)`.
    pub epsilon: f64,
    pub max_iter: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions { epsilon: 1e-2, max_iter: 50, max_restarts: 5, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftReport {
    pub matrix: SymmetricMatrix,
    pub mode: StrongMode,
    pub iterations: usize,
    pub restarts: usize,
    pub epsilon: f64,
    /// Max-norm equation residual after each iteration of the successful run.
    pub residuals: Vec<f64>,
    /// `max |sorted sigma(M) - sorted sigma(A)|`.
    pub spectrum_deviation: f64,
    pub strong: StrongPropertyReport,
}

const CONVERGED: f64 = 1e-13;

/// Returns a matrix in `S(G)` with the spectrum of `a` and the same strong
/// property. `a` must lie in `S(H)` for a spanning subgraph `H` of `G`.
pub fn lift_to_supergraph(
    a: &SymmetricMatrix,
    g: &Graph,
    mode: StrongMode,
    cfg: &ToleranceConfig,
    opts: &LiftOptions,
) -> Result<LiftReport, StrongError> {
    let n = a.dim();
    if n != g.order() {
        return Err(StrongError::DimensionMismatch { matrix: n, graph: g.order() });
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if a.get(i, j).abs() >= cfg.entry_floor && !g.has_edge(i, j) {
                return Err(StrongError::NotSupergraph { u: i, v: j });
            }
        }
    }
    let initial = strong_property_check(a, mode, cfg)?;
    if !initial.holds {
        return Err(StrongError::PropertyFails { mode, nullity: initial.nullity });
    }
    let base = spectrum(a, cfg)?;
    let scale = base.spectral_radius().max(1.0);

    // Every pair not carried by `a` is constrained.
    let pinned: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .filter(|&(i, j)| a.get(i, j).abs() < cfg.entry_floor)
        .collect();
    let new_edges: Vec<(usize, usize)> = pinned.iter().copied().filter(|&(i, j)| g.has_edge(i, j)).collect();
    if new_edges.is_empty() {
        return Ok(LiftReport {
            matrix: a.clone(),
            mode,
            iterations: 0,
            restarts: 0,
            epsilon: 0.0,
            residuals: vec![],
            spectrum_deviation: 0.0,
            strong: initial,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut eps = opts.epsilon * scale;
    let mut last_residual = f64::INFINITY;
    for restart in 0..=opts.max_restarts {
        let targets: Vec<f64> = pinned
            .iter()
            .map(|&(i, j)| if g.has_edge(i, j) { if rng.random::<bool>() { eps } else { -eps } } else { 0.0 })
            .collect();
        match newton(a, &pinned, &targets, opts.max_iter, scale) {
            Ok((m, residuals)) => {
                let m = snap_non_edges(&m, g);
                let pattern = pattern_matches(&m, g, cfg)?;
                if pattern.matches {
                    let lifted = spectrum(&m, cfg)?;
                    let deviation = lifted
                        .eigenvalues
                        .iter()
                        .zip(&base.eigenvalues)
                        .map(|(x, y)| (x - y).abs())
                        .fold(0.0, f64::max);
                    let strong = strong_property_check(&m, mode, cfg)?;
                    if strong.holds && lifted.q == base.q && deviation <= 1e-8 * scale {
                        return Ok(LiftReport {
                            matrix: m,
                            mode,
                            iterations: residuals.len(),
                            restarts: restart,
                            epsilon: eps,
                            residuals,
                            spectrum_deviation: deviation,
                            strong,
                        });
                    }
                }
                last_residual = 0.0;
            }
            Err(r) => last_residual = r,
        }
        if restart < opts.max_restarts {
            eps *= 2.0;
        }
    }
    Err(StrongError::LiftFailed { residual: last_residual, restarts: opts.max_restarts, epsilon: eps })
}

/// Gauss-Newton with least-norm steps. Returns the iterate and the residual
/// history, or the final residual on failure.
fn newton(
    a: &SymmetricMatrix,
    pinned: &[(usize, usize)],
    targets: &[f64],
    max_iter: usize,
    scale: f64,
) -> Result<(SymmetricMatrix, Vec<f64>), f64> {
    let n = a.dim();
    let params: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let mut q = DMatrix::<f64>::identity(n, n);
    let mut m = a.as_matrix().clone();
    let mut history = Vec::new();
    for _ in 0..max_iter {
        let r: Vec<f64> = pinned.iter().zip(targets).map(|(&(p, s), t)| m[(p, s)] - t).collect();
        let res = r.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if res <= CONVERGED * scale {
            return Ok((SymmetricMatrix::from_fn(n, |i, j| m[(i, j)]), history));
        }
        let jac = DMatrix::from_fn(pinned.len(), params.len(), |row, col| {
            let (p, s) = pinned[row];
            let (i, j) = params[col];
            let mut v = 0.0;
            if s == j {
                v += m[(p, i)];
            }
            if s == i {
                v -= m[(p, j)];
            }
            if p == i {
                v -= m[(j, s)];
            }
            if p == j {
                v += m[(i, s)];
            }
            v
        });
        let rhs = nalgebra::DVector::from_iterator(r.len(), r.iter().map(|x| -x));
        let svd = SVD::new(jac, true, true);
        let cutoff = 1e-12 * svd.singular_values.max();
        let step = match svd.solve(&rhs, cutoff) {
            Ok(s) => s,
            Err(_) => return Err(res),
        };
        let mut k = DMatrix::<f64>::zeros(n, n);
        for (col, &(i, j)) in params.iter().enumerate() {
            k[(i, j)] = step[col];
            k[(j, i)] = -step[col];
        }
        let eye = DMatrix::<f64>::identity(n, n);
        let lhs = &eye - &k * 0.5;
        let cayley = match lhs.lu().solve(&(&eye + &k * 0.5)) {
            Some(c) => c,
            None => return Err(res),
        };
        q *= cayley;
        let full = q.transpose() * a.as_matrix() * &q;
        m = DMatrix::from_fn(n, n, |i, j| 0.5 * (full[(i, j)] + full[(j, i)]));
        history.push(res);
        if !res.is_finite() {
            return Err(res);
        }
    }
    let r = pinned.iter().zip(targets).map(|(&(p, s), t)| (m[(p, s)] - t).abs()).fold(0.0, f64::max);
    if r <= CONVERGED * scale {
        Ok((SymmetricMatrix::from_fn(n, |i, j| m[(i, j)]), history))
    } else {
        Err(r)
    }
}

fn snap_non_edges(m: &SymmetricMatrix, g: &Graph) -> SymmetricMatrix {
    let mut out = m.clone();
    for i in 0..m.dim() {
        for j in (i + 1)..m.dim() {
            if !g.has_edge(i, j) {
                out.set(i, j, 0.0);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unchanged_when_graph_already_matches() {
        let a = SymmetricMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 0.0]]).unwrap();
        let g = Graph::complete(2).unwrap();
        let r = lift_to_supergraph(&a, &g, StrongMode::Ssp, &ToleranceConfig::default(), &LiftOptions::default()).unwrap();
        assert_eq!(r.matrix, a);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn diagonal_to_edge_is_a_rotation() {
        let a = SymmetricMatrix::from_diagonal(&[1.0, 2.0]);
        let g = Graph::complete(2).unwrap();
        let cfg = ToleranceConfig::default();
        let r = lift_to_supergraph(&a, &g, StrongMode::Ssp, &cfg, &LiftOptions::default()).unwrap();
        let m = &r.matrix;
        // closed form: Q(t)^T diag(1,2) Q(t) has off-diagonal sin(t)cos(t) and
        // trace 3, determinant 2
        let off = m.get(0, 1);
        assert!((off.abs() - 0.02).abs() < 1e-12, "{off}");
        assert!((m.trace() - 3.0).abs() < 1e-12);
        let det = m.get(0, 0) * m.get(1, 1) - off * off;
        assert!((det - 2.0).abs() < 1e-12);
        let t = 0.5 * (2.0 * off.abs()).asin();
        assert!((m.get(0, 0) - (t.cos().powi(2) + 2.0 * t.sin().powi(2))).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_supergraph_and_failing_property() {
        let cfg = ToleranceConfig::default();
        let a = SymmetricMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let err = lift_to_supergraph(&a, &Graph::empty(2).unwrap(), StrongMode::Ssp, &cfg, &LiftOptions::default());
        assert!(matches!(err, Err(StrongError::NotSupergraph { u: 0, v: 1 })));
        let i2 = SymmetricMatrix::identity(2);
        let err = lift_to_supergraph(&i2, &Graph::complete(2).unwrap(), StrongMode::Ssp, &cfg, &LiftOptions::default());
        assert!(matches!(err, Err(StrongError::PropertyFails { .. })));
    }
}
