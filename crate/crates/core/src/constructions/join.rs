//! Spectral join of two symmetric matrices along a shared eigenvalue, and
//! vertex duplication built on it.
//!
//! Given `A` with diagonal entry `mu` at position `p` and a unit eigenvector
//! `u` of `B` for `mu`, write `A = [[A1, b], [b^T, mu]]` after moving `p` last.
//! Then `C = [[A1, b u^T], [u b^T, B]]` has `sigma(C) = sigma(A) ∪ (sigma(B) \ {mu})`.

use nalgebra::DVector;

use super::ConstructionError;
use crate::spectra::{spectrum, SymmetricMatrix, ToleranceConfig};

/// Rows of the result: the rows of `A` other than `pos` in their original
/// order, followed by the rows of `B`.
pub fn spectral_join_hs04(
    a: &SymmetricMatrix,
    pos: usize,
    b: &SymmetricMatrix,
    u: &DVector<f64>,
) -> Result<SymmetricMatrix, ConstructionError> {
    let n = a.dim();
    let m = b.dim();
    if pos >= n {
        return Err(ConstructionError::IndexOutOfRange { index: pos, dim: n });
    }
    if u.len() != m {
        return Err(ConstructionError::IndexOutOfRange { index: u.len(), dim: m });
    }
    let mu = a.get(pos, pos);
    let scale = b.frobenius_norm().max(mu.abs()).max(f64::MIN_POSITIVE);
    let unit = (u.norm() - 1.0).abs();
    let rayleigh = (u.transpose() * b.as_matrix() * u)[(0, 0)];
    if unit <= 1e-10 && (rayleigh - mu).abs() > 1e-8 * scale {
        return Err(ConstructionError::DiagonalMismatch { expected: mu, found: rayleigh });
    }
    let residual = (b.as_matrix() * u - u * mu).norm();
    if unit > 1e-10 || residual > 1e-10 * scale {
        return Err(ConstructionError::EigenpairResidual { mu, residual: residual.max(unit) });
    }
    let keep: Vec<usize> = (0..n).filter(|&i| i != pos).collect();
    let k = keep.len();
    Ok(SymmetricMatrix::from_fn(k + m, |i, j| match (i < k, j < k) {
        (true, true) => a.get(keep[i], keep[j]),
        (true, false) => a.get(keep[i], pos) * u[j - k],
        (false, false) => b.get(i - k, j - k),
        (false, true) => unreachable!("upper triangle only"),
    }))
}

fn reorder_after_join(c: &SymmetricMatrix, v: usize) -> SymmetricMatrix {
    // join output: A without v (n-1 rows), then the two copies of v
    let n = c.dim() - 1;
    let order: Vec<usize> = (0..=n)
        .map(|i| if i == n { n } else if i == v { n - 1 } else if i < v { i } else { i - 1 })
        .collect();
    c.permuted(&order)
}

/// Matrix for `dup(G, v)` from `A` in `S(G)` when `a_vv` is an eigenvalue of
/// `A`. Vertex `v` keeps its index and the duplicate is appended last; the
/// multiplicity of `a_vv` grows by one.
pub fn duplicate_matrix(a: &SymmetricMatrix, v: usize, cfg: &ToleranceConfig) -> Result<SymmetricMatrix, ConstructionError> {
    let n = a.dim();
    if v >= n {
        return Err(ConstructionError::IndexOutOfRange { index: v, dim: n });
    }
    let lambda = a.get(v, v);
    let s = spectrum(a, cfg)?;
    let distance = s.eigenvalues.iter().map(|x| (x - lambda).abs()).fold(f64::INFINITY, f64::min);
    if distance > cfg.eig_tol * s.spectral_radius().max(1.0) {
        return Err(ConstructionError::NotAnEigenvalue { vertex: v, value: lambda, distance });
    }
    let b = SymmetricMatrix::from_diagonal(&[lambda, lambda]);
    let u = DVector::from_element(2, std::f64::consts::FRAC_1_SQRT_2);
    Ok(reorder_after_join(&spectral_join_hs04(a, v, &b, &u)?, v))
}

/// Matrix for `jdup(G, v)` from `A` in `S(G)`, using
/// `B = 1/2 [[mu + l, mu - l], [mu - l, mu + l]]` with `mu = a_vv` and `l` an
/// eigenvalue of `A` other than `mu`. The distinct eigenvalues are unchanged.
/// Without `lambda`, the eigenvalue farthest from `mu` is used.
pub fn joined_duplicate_matrix(
    a: &SymmetricMatrix,
    v: usize,
    lambda: Option<f64>,
    cfg: &ToleranceConfig,
) -> Result<SymmetricMatrix, ConstructionError> {
    let n = a.dim();
    if v >= n {
        return Err(ConstructionError::IndexOutOfRange { index: v, dim: n });
    }
    let mu = a.get(v, v);
    let s = spectrum(a, cfg)?;
    let gap = cfg.eig_tol * s.spectral_radius().max(1.0);
    let lambda = match lambda {
        Some(l) => {
            let distance = s.distinct_values().iter().map(|x| (x - l).abs()).fold(f64::INFINITY, f64::min);
            if distance > gap {
                return Err(ConstructionError::NotAnEigenvalue { vertex: v, value: l, distance });
            }
            l
        }
        None => s
            .distinct_values()
            .into_iter()
            .max_by(|x, y| (x - mu).abs().total_cmp(&(y - mu).abs()))
            .expect("nonempty spectrum"),
    };
    if (lambda - mu).abs() <= gap.max(cfg.entry_floor) {
        return Err(ConstructionError::NoPartnerEigenvalue);
    }
    let b = SymmetricMatrix::from_rows(&[
        vec![0.5 * (mu + lambda), 0.5 * (mu - lambda)],
        vec![0.5 * (mu - lambda), 0.5 * (mu + lambda)],
    ])?;
    let u = DVector::from_element(2, std::f64::consts::FRAC_1_SQRT_2);
    Ok(reorder_after_join(&spectral_join_hs04(a, v, &b, &u)?, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::spectra::{pattern_graph, pattern_matches};

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn p4() -> SymmetricMatrix {
        let r2 = 2f64.sqrt();
        SymmetricMatrix::from_rows(&[
            vec![1.0, r2, 0.0, 0.0],
            vec![r2, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, r2],
            vec![0.0, 0.0, r2, -1.0],
        ])
        .unwrap()
    }

    #[test]
    fn one_by_one_join_reproduces_b() {
        let a = SymmetricMatrix::from_diagonal(&[2.0]);
        let b = SymmetricMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let u = DVector::from_element(2, std::f64::consts::FRAC_1_SQRT_2);
        let c = spectral_join_hs04(&a, 0, &b, &u).unwrap();
        assert_eq!(c, b);
    }

    #[test]
    fn join_rejects_bad_pairs() {
        let a = SymmetricMatrix::from_diagonal(&[3.0, 1.0]);
        let b = SymmetricMatrix::from_diagonal(&[1.0, 2.0]);
        let u = DVector::from_vec(vec![1.0, 0.0]);
        assert!(matches!(spectral_join_hs04(&a, 0, &b, &u), Err(ConstructionError::DiagonalMismatch { .. })));
        let u = DVector::from_vec(vec![0.6, 0.6]);
        assert!(matches!(spectral_join_hs04(&a, 1, &b, &u), Err(ConstructionError::EigenpairResidual { .. })));
    }

    #[test]
    fn duplicating_p4_leaves_keeps_distinct_set() {
        let a = p4();
        let c = duplicate_matrix(&a, 0, &cfg()).unwrap();
        let c = duplicate_matrix(&c, 3, &cfg()).unwrap();
        let g = Graph::path(4).unwrap().duplicate_vertex(0, false).unwrap().duplicate_vertex(3, false).unwrap();
        assert!(pattern_matches(&c, &g, &cfg()).unwrap().matches);
        let before = spectrum(&a, &cfg()).unwrap();
        let after = spectrum(&c, &cfg()).unwrap();
        assert!(before.same_distinct_set(&after, 1e-10));
        assert_eq!(after.multiplicity_of(1.0), 2);
        assert_eq!(after.multiplicity_of(-1.0), 2);
    }

    #[test]
    fn duplicate_of_scalar() {
        let c = duplicate_matrix(&SymmetricMatrix::from_diagonal(&[4.0]), 0, &cfg()).unwrap();
        assert_eq!(spectrum(&c, &cfg()).unwrap().clusters[0].multiplicity, 2);
        assert!(matches!(
            duplicate_matrix(&p4(), 1, &cfg()),
            Err(ConstructionError::NotAnEigenvalue { vertex: 1, .. })
        ));
    }

    #[test]
    fn joined_duplicate_on_p3() {
        let a = SymmetricMatrix::from_rows(&[vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let c = joined_duplicate_matrix(&a, 0, None, &cfg()).unwrap();
        let g = Graph::path(3).unwrap().duplicate_vertex(0, true).unwrap();
        assert_eq!(pattern_graph(&c, &cfg()), g);
        assert!(spectrum(&a, &cfg()).unwrap().same_distinct_set(&spectrum(&c, &cfg()).unwrap(), 1e-10));
        let flat = SymmetricMatrix::identity(2);
        assert!(matches!(joined_duplicate_matrix(&flat, 0, None, &cfg()), Err(ConstructionError::NoPartnerEigenvalue)));
    }
}
