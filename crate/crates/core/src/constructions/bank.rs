//! Explicit certificate matrices, each evaluated from its closed form.

use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::graph::Graph;
use crate::spectra::{pattern_matches, spectrum, SymmetricMatrix, ToleranceConfig};
use crate::strong::{strong_property_check, StrongMode};

/// Orthogonality claims are checked as `max |A^2 - I| <= ORTHOGONALITY_TOL`.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropertyLevel {
    None,
    Smp,
    Ssp,
}

impl PropertyLevel {
    pub fn mode(self) -> Option<StrongMode> {
        match self {
            PropertyLevel::None => None,
            PropertyLevel::Smp => Some(StrongMode::Smp),
            PropertyLevel::Ssp => Some(StrongMode::Ssp),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "lowercase")]
pub enum Verification {
    Unverified,
    Verified,
    Failed(String),
}

/// A matrix in `S(graph)` witnessing `q(graph) <= claimed_q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub graph: Graph,
    pub matrix: SymmetricMatrix,
    pub claimed_q: usize,
    pub property_level: PropertyLevel,
    /// Whether `matrix^2 = I` is part of the claim.
    pub orthogonal: bool,
    pub verified: Verification,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub pattern_ok: bool,
    pub violations: usize,
    pub near_floor: usize,
    pub q_found: usize,
    pub involution_defect: Option<f64>,
    pub property_nullity: Option<usize>,
    pub passed: bool,
}

impl Certificate {
    pub fn new(
        name: impl Into<String>,
        graph: Graph,
        matrix: SymmetricMatrix,
        claimed_q: usize,
        property_level: PropertyLevel,
        orthogonal: bool,
    ) -> Self {
        Certificate { name: name.into(), graph, matrix, claimed_q, property_level, orthogonal, verified: Verification::Unverified }
    }

    /// Runs every check and records the outcome in `verified`.
    pub fn verify(&mut self, cfg: &ToleranceConfig) -> Result<CertificateCheck, ConstructionError> {
        let pattern = pattern_matches(&self.matrix, &self.graph, cfg)?;
        let q_found = spectrum(&self.matrix, cfg)?.q;
        let involution_defect = self.orthogonal.then(|| self.matrix.involution_defect());
        let property_nullity = match self.property_level.mode() {
            Some(mode) => Some(strong_property_check(&self.matrix, mode, cfg)?.nullity),
            None => None,
        };
        let mut reasons = Vec::new();
        if !pattern.matches {
            reasons.push(format!("{} pattern violations", pattern.violations.len()));
        }
        if q_found != self.claimed_q {
            reasons.push(format!("found {q_found} eigenvalue clusters, claimed {}", self.claimed_q));
        }
        if let Some(d) = involution_defect.filter(|&d| d > ORTHOGONALITY_TOL) {
            reasons.push(format!("max |A^2 - I| = {d:e}"));
        }
        if let Some(k) = property_nullity.filter(|&k| k > 0) {
            reasons.push(format!("{:?} nullity {k}", self.property_level));
        }
        let passed = reasons.is_empty();
        self.verified = if passed { Verification::Verified } else { Verification::Failed(reasons.join("; ")) };
        Ok(CertificateCheck {
            pattern_ok: pattern.matches,
            violations: pattern.violations.len(),
            near_floor: pattern.near_floor.len(),
            q_found,
            involution_defect,
            property_nullity,
            passed,
        })
    }

    /// Verifies and converts a failure into an error.
    pub fn verified(mut self, cfg: &ToleranceConfig) -> Result<Self, ConstructionError> {
        self.verify(cfg)?;
        match &self.verified {
            Verification::Verified => Ok(self),
            Verification::Failed(reason) => {
                Err(ConstructionError::Verification { name: self.name.clone(), reason: reason.clone() })
            }
            Verification::Unverified => unreachable!("verify always records an outcome"),
        }
    }
}

fn complement_of(n: usize, tree: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, tree).expect("bank graph").complement()
}

fn block_swap(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3], scale: f64) -> SymmetricMatrix {
    SymmetricMatrix::from_fn(6, |i, j| {
        let v = match (i < 3, j < 3) {
            (true, true) => a[i][j],
            (true, false) => b[i][j - 3],
            (false, false) => -a[i - 3][j - 3],
            (false, true) => b[i - 3][j],
        };
        v * scale
    })
}

/// Orthogonal matrix in `S(P_6^c)`.
pub fn p6_complement() -> Certificate {
    let s6 = 6f64.sqrt();
    let a = [[3.0, 2.0, s6], [2.0, 0.0, -2.0 * s6], [s6, -2.0 * s6, 1.0]];
    let b = [[3.0, 2.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, -1.0]];
    let x = block_swap(&a, &b, 2f64.powf(-2.5));
    // P_6 labelled 0-5-1-4-2-3
    let g = complement_of(6, &[(0, 5), (1, 4), (1, 5), (2, 3), (2, 4)]);
    Certificate::new("p6c", g, x, 2, PropertyLevel::None, true)
}

/// Orthogonal matrix in `S((S^3_{2,2})^c)`.
pub fn s3_22_complement() -> Certificate {
    let r2 = 2f64.sqrt();
    let (ap, am) = (1.5 * r2 + 2.0, 1.5 * r2 - 2.0);
    let s = 2.0 * r2;
    let rows = [
        [-1.0, 1.0, ap, am, s, 3.0, 0.0],
        [1.0, -1.0, am, ap, -s, 3.0, 0.0],
        [ap, am, -1.0, 1.0, s, 0.0, 3.0],
        [am, ap, 1.0, -1.0, -s, 0.0, 3.0],
        [s, -s, s, -s, -2.0, 0.0, 0.0],
        [3.0, 3.0, 0.0, 0.0, 0.0, 0.0, -3.0 * r2],
        [0.0, 0.0, 3.0, 3.0, 0.0, -3.0 * r2, 0.0],
    ];
    let x = SymmetricMatrix::from_fn(7, |i, j| rows[i][j] / 6.0);
    // spine 5-4-6, leaves 2,3 on 5 and 0,1 on 6
    let g = complement_of(7, &[(0, 6), (1, 6), (2, 5), (3, 5), (4, 5), (4, 6)]);
    Certificate::new("s3_22c", g, x, 2, PropertyLevel::None, true)
}

/// Orthogonal matrix in `S((S^2_{2,2})^c)`.
pub fn s2_22_complement() -> Certificate {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let a = [[1.0, 1.0, 1.0], [1.0, 0.0, -1.0], [1.0, -1.0, 0.0]];
    let b = [[0.0, 0.0, 0.0], [0.0, h, -h], [0.0, -h, h]];
    let x = block_swap(&a, &b, 1.0 / 3f64.sqrt());
    // spine 3-0, leaves 1,2 on 3 and 4,5 on 0
    let g = complement_of(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (2, 3)]);
    Certificate::new("s2_22c", g, x, 2, PropertyLevel::None, true)
}

/// Orthogonal matrix in `S(W(2,1,(2,2))^c)`.
pub fn w2_1_22_complement() -> Certificate {
    let r6 = 6f64.sqrt();
    let (ap, am) = ((3.0 + r6) / 2.0, (3.0 - r6) / 2.0);
    let rows = [
        [0.0, -3.0, 3.0, -3.0, 3.0, 0.0, 0.0, 0.0],
        [-3.0, ap, -am, -ap, am, r6, 0.0, r6],
        [3.0, -am, ap, am, -ap, r6, 0.0, r6],
        [-3.0, -ap, am, ap, -am, 0.0, r6, r6],
        [3.0, am, -ap, -am, ap, 0.0, r6, r6],
        [0.0, r6, r6, 0.0, 0.0, -2.0 - r6, -2.0 + r6, 2.0],
        [0.0, 0.0, 0.0, r6, r6, -2.0 + r6, -2.0 - r6, 2.0],
        [0.0, r6, r6, r6, r6, 2.0, 2.0, -2.0],
    ];
    let x = SymmetricMatrix::from_fn(8, |i, j| rows[i][j] / 6.0);
    // root 0 with children 5, 6, 7; leaves 3,4 on 5 and 1,2 on 6
    let g = complement_of(8, &[(0, 5), (0, 6), (0, 7), (1, 6), (2, 6), (3, 5), (4, 5)]);
    Certificate::new("w2_1_22c", g, x, 2, PropertyLevel::None, true)
}

/// The graph `H`: a 7-cycle with one chord between vertices at distance two,
/// labelled as the rows of [`h_complement_ssp`].
pub fn h_graph() -> Graph {
    Graph::from_edges(7, &[(0, 1), (0, 3), (0, 6), (1, 5), (1, 6), (2, 4), (2, 5), (3, 4)]).expect("bank graph")
}

/// Orthogonal matrix in `S(H^c)` with the SSP.
pub fn h_complement_ssp() -> Certificate {
    let (r2, r3, r6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());
    let rows = [
        [0.0, 0.0, 4.0, 0.0, 2.0 * r2, 2.0 * r3, 0.0],
        [0.0, -3.0, -r6, 3.0, 2.0 * r3, 0.0, 0.0],
        [4.0, -r6, 0.0, -r6, 0.0, 0.0, 2.0 * r2],
        [0.0, 3.0, -r6, 1.0, 0.0, 2.0 * r2, 2.0 * r3],
        [2.0 * r2, 2.0 * r3, 0.0, 0.0, 3.0, -r6, -1.0],
        [2.0 * r3, 0.0, 0.0, 2.0 * r2, -r6, 2.0, -r6],
        [0.0, 0.0, 2.0 * r2, 2.0 * r3, -1.0, -r6, 3.0],
    ];
    let x = SymmetricMatrix::from_fn(7, |i, j| rows[i][j] / 6.0);
    Certificate::new("hc_ssp", h_graph().complement(), x, 2, PropertyLevel::Ssp, true)
}

/// Matrix in `S(P_4)` with spectrum `{±1, ±sqrt 5}` whose leaf diagonal
/// entries `1` and `-1` are eigenvalues.
pub fn p4_matrix() -> Certificate {
    let r2 = 2f64.sqrt();
    let rows = [[1.0, r2, 0.0, 0.0], [r2, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, r2], [0.0, 0.0, r2, -1.0]];
    let x = SymmetricMatrix::from_fn(4, |i, j| rows[i][j]);
    Certificate::new("p4", Graph::path(4).expect("bank graph"), x, 4, PropertyLevel::None, false)
}

/// `X` in `S(W(k,0))` with distinct eigenvalues `{0, ±1, ±2}`. Rows: the `k`
/// grandchildren, the `k` children, then the root.
pub fn w_k0_matrix(k: usize) -> Certificate {
    let v = (3.0 / k as f64).sqrt();
    let n = 2 * k + 1;
    let x = SymmetricMatrix::from_fn(n, |i, j| {
        if j == i + k && i < k {
            1.0
        } else if j == 2 * k && (k..2 * k).contains(&i) {
            v
        } else {
            0.0
        }
    });
    let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (i, i + k)).collect();
    edges.extend((k..2 * k).map(|i| (i, 2 * k)));
    let g = Graph::from_edges(n, &edges).expect("bank graph");
    Certificate::new(format!("w{k}_0_x"), g, x, 5, PropertyLevel::None, false)
}

/// `Y` in `S(W(k,1))` with distinct eigenvalues `{0, ±1, -2, 3}`. Rows: the
/// `k` grandchildren, the `k` children, the root, then the leaf child.
pub fn w_k1_matrix(k: usize) -> Certificate {
    let w = (4.0 / k as f64).sqrt();
    let n = 2 * k + 2;
    let root = 2 * k;
    let x = SymmetricMatrix::from_fn(n, |i, j| {
        if j == i + k && i < k {
            1.0
        } else if j == root && (k..2 * k).contains(&i) {
            w
        } else if i >= root {
            1.0
        } else {
            0.0
        }
    });
    let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (i, i + k)).collect();
    edges.extend((k..2 * k).map(|i| (i, root)));
    edges.push((root, root + 1));
    let g = Graph::from_edges(n, &edges).expect("bank graph");
    Certificate::new(format!("w{k}_1_y"), g, x, 5, PropertyLevel::None, false)
}

/// Every bank entry, unverified. The `W(k,l)` matrices are included for
/// `k = 2..=6`.
pub fn certificate_bank() -> Vec<Certificate> {
    let mut bank = vec![
        p6_complement(),
        s3_22_complement(),
        s2_22_complement(),
        w2_1_22_complement(),
        h_complement_ssp(),
        p4_matrix(),
    ];
    for k in 2..=6 {
        bank.push(w_k0_matrix(k));
        bank.push(w_k1_matrix(k));
    }
    bank
}

pub fn bank_entry(name: &str) -> Option<Certificate> {
    certificate_bank().into_iter().find(|c| c.name == name)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BankIndexEntry {
    pub name: String,
    pub graph6: String,
    pub claimed_q: usize,
    pub property_level: PropertyLevel,
}

/// Writes `<name>.txt` in the matrix text format for every entry, plus
/// `index.json`.
pub fn export_bank(dir: &Path, bank: &[Certificate]) -> io::Result<Vec<BankIndexEntry>> {
    fs::create_dir_all(dir)?;
    let mut index = Vec::with_capacity(bank.len());
    for c in bank {
        fs::write(dir.join(format!("{}.txt", c.name)), c.matrix.to_text())?;
        index.push(BankIndexEntry {
            name: c.name.clone(),
            graph6: c.graph.to_graph6(),
            claimed_q: c.claimed_q,
            property_level: c.property_level,
        });
    }
    let json = serde_json::to_string_pretty(&index).map_err(io::Error::other)?;
    fs::write(dir.join("index.json"), json + "\n")?;
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_verifies() {
        let cfg = ToleranceConfig::default();
        for mut c in certificate_bank() {
            let check = c.verify(&cfg).unwrap();
            assert!(check.passed, "{}: {:?} {:?}", c.name, check, c.verified);
            assert_eq!(c.verified, Verification::Verified);
        }
    }

    #[test]
    fn w_matrices_have_stated_spectra() {
        let cfg = ToleranceConfig::default();
        for k in 2..=6 {
            let x = spectrum(&w_k0_matrix(k).matrix, &cfg).unwrap().distinct_values();
            for (got, want) in x.iter().zip([-2.0, -1.0, 0.0, 1.0, 2.0]) {
                assert!((got - want).abs() < 1e-12, "k={k}: {x:?}");
            }
            let y = spectrum(&w_k1_matrix(k).matrix, &cfg).unwrap().distinct_values();
            for (got, want) in y.iter().zip([-2.0, -1.0, 0.0, 1.0, 3.0]) {
                assert!((got - want).abs() < 1e-12, "k={k}: {y:?}");
            }
        }
    }

    #[test]
    fn export_writes_matrices_and_index() {
        let dir = std::env::temp_dir().join(format!("distinctq-bank-{}", std::process::id()));
        let bank = certificate_bank();
        let index = export_bank(&dir, &bank).unwrap();
        assert_eq!(index.len(), bank.len());
        let text = fs::read_to_string(dir.join("hc_ssp.txt")).unwrap();
        assert_eq!(SymmetricMatrix::from_text(&text).unwrap(), bank[4].matrix);
        let parsed: Vec<BankIndexEntry> =
            serde_json::from_str(&fs::read_to_string(dir.join("index.json")).unwrap()).unwrap();
        assert_eq!(parsed, index);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn tampered_entry_fails() {
        let cfg = ToleranceConfig::default();
        let mut c = p6_complement();
        c.claimed_q = 3;
        assert!(!c.verify(&cfg).unwrap().passed);
        assert!(matches!(c.verified, Verification::Failed(_)));
    }
}
