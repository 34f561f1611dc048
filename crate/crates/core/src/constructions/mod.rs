//! Orthogonal matrix families with controllable patterns, the spectral join
//! and vertex duplication at matrix level, and a bank of explicit certificates.
//!
//! For an `m x n` block `B` with `||B|| < 1` and `alpha` in `[-1, 1]`,
//!
//! ```text
//! M(B, alpha) = [ sqrt(I - a^2 B B^T)   a B                    ]
//!               [ a B^T                 -sqrt(I - a^2 B^T B)   ]
//! ```
//!
//! squares to the identity. With a unit `v` such that `B^T v = 0`, the bordered
//! matrix `M^(B, v, alpha)` puts `v` in the first row and column and replaces the
//! upper-left block by `sqrt(I - (a^2 B B^T + v v^T))`; it is also an involution.

pub mod bank;
mod join;

pub use bank::{bank_entry, certificate_bank, export_bank, BankIndexEntry, Certificate, CertificateCheck, PropertyLevel, Verification};
pub use join::{duplicate_matrix, joined_duplicate_matrix, spectral_join_hs04};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::spectra::{psd_sqrt, SpectraError, SymmetricMatrix, ToleranceConfig};
use crate::strong::StrongError;

/// Number of evenly spaced candidates `1, 1 - 1/N, ..., 1/N` tried by [`select_alpha`].
pub const ALPHA_GRID_SIZE: usize = 257;
/// Target spectral norm when scaling a block built from a 0/1 pattern.
pub const BLOCK_NORM: f64 = 0.99;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Strong(#[from] StrongError),
    #[error("block has spectral norm {norm}, expected < 1")]
    Norm { norm: f64 },
    #[error("alpha {alpha} is outside [-1, 1]")]
    Alpha { alpha: f64 },
    #[error("bordered construction needs a border vector")]
    MissingBorder,
    #[error("border vector has length {found}, expected {expected}")]
    BorderLength { expected: usize, found: usize },
    #[error("border vector is zero")]
    ZeroBorder,
    #[error("border vector is not in the kernel of B^T (residual {residual:e})")]
    BorderNotInKernel { residual: f64 },
    #[error("{which} is not generalised irreducible")]
    NotIrreducible { which: &'static str },
    #[error("no alpha on the grid keeps every square-root entry above the floor (best alpha {best_alpha}, min entry {best_min_entry:e})")]
    AlphaSelection { best_alpha: f64, best_min_entry: f64 },
    #[error("entry ({i},{j}) = {value} is negative")]
    NegativeEntry { i: usize, j: usize, value: f64 },
    #[error("u is not a unit eigenvector of B for mu = {mu} (residual {residual:e})")]
    EigenpairResidual { mu: f64, residual: f64 },
    #[error("u^T B u = {found} differs from the designated diagonal entry {expected}")]
    DiagonalMismatch { expected: f64, found: f64 },
    #[error("diagonal entry {value} of vertex {vertex} is not an eigenvalue (distance {distance:e})")]
    NotAnEigenvalue { vertex: usize, value: f64, distance: f64 },
    #[error("matrix has a single eigenvalue, so no partner eigenvalue exists")]
    NoPartnerEigenvalue,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("certificate {name} failed verification: {reason}")]
    Verification { name: String, reason: String },
}

/// An `m x n` block of norm below one, optionally with a unit border vector
/// `v` in the left space such that `B^T v = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteBlock {
    b: DMatrix<f64>,
    v: Option<DVector<f64>>,
}

impl BipartiteBlock {
    pub fn new(b: DMatrix<f64>) -> Result<Self, ConstructionError> {
        let norm = spectral_norm(&b);
        if norm.is_nan() || norm >= 1.0 {
            return Err(ConstructionError::Norm { norm });
        }
        Ok(BipartiteBlock { b, v: None })
    }

    /// `v` is normalized here; it must satisfy `||B^T v|| <= 1e-12`.
    pub fn with_border(b: DMatrix<f64>, v: DVector<f64>) -> Result<Self, ConstructionError> {
        let mut block = Self::new(b)?;
        if v.len() != block.m() {
            return Err(ConstructionError::BorderLength { expected: block.m(), found: v.len() });
        }
        let len = v.norm();
        if len == 0.0 {
            return Err(ConstructionError::ZeroBorder);
        }
        let v = v / len;
        let residual = (block.b.transpose() * &v).norm();
        if residual > 1e-12 {
            return Err(ConstructionError::BorderNotInKernel { residual });
        }
        block.v = Some(v);
        Ok(block)
    }

    /// Scales `b` to spectral norm [`BLOCK_NORM`] (a zero block is kept).
    pub fn rescaled(b: DMatrix<f64>, v: Option<DVector<f64>>) -> Result<Self, ConstructionError> {
        let norm = spectral_norm(&b);
        let b = if norm > 0.0 { b * (BLOCK_NORM / norm) } else { b };
        match v {
            Some(v) => Self::with_border(b, v),
            None => Self::new(b),
        }
    }

    pub fn m(&self) -> usize {
        self.b.nrows()
    }

    pub fn n(&self) -> usize {
        self.b.ncols()
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn v(&self) -> Option<&DVector<f64>> {
        self.v.as_ref()
    }

    pub fn norm(&self) -> f64 {
        spectral_norm(&self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub alpha: f64,
    pub grid_size: usize,
    pub entry_floor: f64,
}

impl Default for ConstructionParams {
    fn default() -> Self {
        ConstructionParams { alpha: 1.0, grid_size: ALPHA_GRID_SIZE, entry_floor: ToleranceConfig::default().entry_floor }
    }
}

impl ConstructionParams {
    pub fn with_alpha(alpha: f64) -> Self {
        ConstructionParams { alpha, ..Default::default() }
    }
}

pub fn spectral_norm(b: &DMatrix<f64>) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    b.clone().svd(false, false).singular_values.max()
}

fn check_alpha(alpha: f64) -> Result<(), ConstructionError> {
    if alpha.abs() <= 1.0 {
        Ok(())
    } else {
        Err(ConstructionError::Alpha { alpha })
    }
}

fn sqrt_blocks(block: &BipartiteBlock, alpha: f64) -> Result<(SymmetricMatrix, SymmetricMatrix), ConstructionError> {
    let cfg = ToleranceConfig::default();
    let (m, n) = (block.m(), block.n());
    let bbt = &block.b * block.b.transpose();
    let btb = block.b.transpose() * &block.b;
    let left = SymmetricMatrix::from_dmatrix(DMatrix::identity(m, m) - bbt * (alpha * alpha))?;
    let right = SymmetricMatrix::from_dmatrix(DMatrix::identity(n, n) - btb * (alpha * alpha))?;
    Ok((psd_sqrt(&left, &cfg)?, psd_sqrt(&right, &cfg)?))
}

fn bordered_sqrt(block: &BipartiteBlock, alpha: f64) -> Result<SymmetricMatrix, ConstructionError> {
    let v = block.v.as_ref().ok_or(ConstructionError::MissingBorder)?;
    let m = block.m();
    let inner = DMatrix::identity(m, m) - (&block.b * block.b.transpose()) * (alpha * alpha) - v * v.transpose();
    Ok(psd_sqrt(&SymmetricMatrix::from_dmatrix(inner)?, &ToleranceConfig::default())?)
}

/// `M(B, alpha)`, rows ordered as the `m` left vertices then the `n` right ones.
pub fn build_m(block: &BipartiteBlock, params: &ConstructionParams) -> Result<SymmetricMatrix, ConstructionError> {
    check_alpha(params.alpha)?;
    let (m, n) = (block.m(), block.n());
    let (left, right) = sqrt_blocks(block, params.alpha)?;
    let a = params.alpha;
    Ok(SymmetricMatrix::from_fn(m + n, |i, j| match (i < m, j < m) {
        (true, true) => left.get(i, j),
        (true, false) => a * block.b[(i, j - m)],
        (false, false) => -right.get(i - m, j - m),
        (false, true) => unreachable!("upper triangle only"),
    }))
}

/// `M^(B, v, alpha)`: index 0 is the border vertex, then the `m` left and `n`
/// right vertices.
pub fn build_mhat(block: &BipartiteBlock, params: &ConstructionParams) -> Result<SymmetricMatrix, ConstructionError> {
    check_alpha(params.alpha)?;
    let v = block.v.as_ref().ok_or(ConstructionError::MissingBorder)?;
    let (m, n) = (block.m(), block.n());
    let middle = bordered_sqrt(block, params.alpha)?;
    let (_, right) = sqrt_blocks(block, params.alpha)?;
    let a = params.alpha;
    Ok(SymmetricMatrix::from_fn(1 + m + n, |i, j| {
        if i == 0 {
            return if j == 0 { 0.0 } else if j <= m { v[j - 1] } else { 0.0 };
        }
        let (i, j) = (i - 1, j - 1);
        match (i < m, j < m) {
            (true, true) => middle.get(i, j),
            (true, false) => a * block.b[(i, j - m)],
            (false, false) => -right.get(i - m, j - m),
            (false, true) => unreachable!("upper triangle only"),
        }
    }))
}

/// Result of a generalised irreducibility test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Irreducibility {
    pub irreducible: bool,
    /// Set when the input had entries of both signs, so cancellation in
    /// powers was ignored and only the support was used.
    pub pattern_level: bool,
}

/// For every `(i, j)` some power `A^k`, `k >= 1`, has a nonzero `(i, j)` entry,
/// decided on the support digraph. Entries with magnitude at most `zero_tol`
/// are treated as zero.
pub fn is_generalised_irreducible(a: &DMatrix<f64>, zero_tol: f64) -> Irreducibility {
    let n = a.nrows();
    let has_pos = a.iter().any(|&x| x > zero_tol);
    let has_neg = a.iter().any(|&x| x < -zero_tol);
    let support = |i: usize, j: usize| a[(i, j)].abs() > zero_tol;
    let mut irreducible = n > 0;
    'outer: for s in 0..n {
        // vertices reachable from s by walks of length >= 1
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&j| support(s, j)).collect();
        for &j in &stack {
            seen[j] = true;
        }
        while let Some(x) = stack.pop() {
            for (y, reached) in seen.iter_mut().enumerate() {
                if !*reached && support(x, y) {
                    *reached = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|&r| !r) {
            irreducible = false;
            break 'outer;
        }
    }
    Irreducibility { irreducible, pattern_level: has_pos && has_neg }
}

/// Permutations putting a nonnegative `B` in the form `diag(B', B'')` with
/// both row blocks nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducibilitySplit {
    /// New row `i` is old row `row_order[i]`.
    pub row_order: Vec<usize>,
    pub col_order: Vec<usize>,
    pub m1: usize,
    pub n1: usize,
}

/// Splits `B` when `B B^T` is reducible; `None` when it is irreducible or
/// `B` has a single row.
pub fn reducibility_split(b: &DMatrix<f64>) -> Result<Option<ReducibilitySplit>, ConstructionError> {
    let (m, n) = b.shape();
    for i in 0..m {
        for j in 0..n {
            if b[(i, j)] < 0.0 {
                return Err(ConstructionError::NegativeEntry { i, j, value: b[(i, j)] });
            }
        }
    }
    if m < 2 {
        return Ok(None);
    }
    // rows reachable from row 0 through shared column support
    let mut rows = vec![false; m];
    let mut cols = vec![false; n];
    rows[0] = true;
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if b[(i, j)] > 0.0 && !cols[j] {
                cols[j] = true;
                for (k, seen) in rows.iter_mut().enumerate() {
                    if !*seen && b[(k, j)] > 0.0 {
                        *seen = true;
                        stack.push(k);
                    }
                }
            }
        }
    }
    let m1 = rows.iter().filter(|&&r| r).count();
    if m1 == m {
        return Ok(None);
    }
    let pick = |flags: &[bool]| -> Vec<usize> {
        let (mut first, rest): (Vec<usize>, Vec<usize>) = (0..flags.len()).partition(|&i| flags[i]);
        first.extend(rest);
        first
    };
    let row_order = pick(&rows);
    let col_order = pick(&cols);
    let n1 = cols.iter().filter(|&&c| c).count();
    Ok(Some(ReducibilitySplit { row_order, col_order, m1, n1 }))
}

/// Minimum magnitude over the entries that must be nonzero for the given alpha.
fn admissibility(block: &BipartiteBlock, alpha: f64, bordered: bool) -> Result<f64, ConstructionError> {
    let (left, right) = sqrt_blocks(block, alpha)?;
    let first = if bordered { bordered_sqrt(block, alpha)? } else { left };
    let mut min = first.as_matrix().amin().min(right.as_matrix().amin());
    for &x in block.b.iter() {
        if x != 0.0 {
            min = min.min((alpha * x).abs());
        }
    }
    Ok(min)
}

/// First grid value `alpha = 1 - i/N` for which every entry of the square-root
/// blocks (the bordered block when `bordered`) and every nonzero entry of
/// `alpha B` has magnitude at least `cfg.entry_floor`.
pub fn select_alpha(block: &BipartiteBlock, bordered: bool, cfg: &ToleranceConfig) -> Result<f64, ConstructionError> {
    select_alpha_on_grid(block, bordered, ALPHA_GRID_SIZE, cfg)
}

pub fn select_alpha_on_grid(
    block: &BipartiteBlock,
    bordered: bool,
    grid_size: usize,
    cfg: &ToleranceConfig,
) -> Result<f64, ConstructionError> {
    if bordered && block.v.is_none() {
        return Err(ConstructionError::MissingBorder);
    }
    let bbt = &block.b * block.b.transpose();
    let btb = block.b.transpose() * &block.b;
    let tol = cfg.eig_tol * block.b.amax().max(1.0);
    if !is_generalised_irreducible(&bbt, tol).irreducible {
        return Err(ConstructionError::NotIrreducible { which: "B B^T" });
    }
    if !is_generalised_irreducible(&btb, tol).irreducible {
        return Err(ConstructionError::NotIrreducible { which: "B^T B" });
    }
    let mut best = (f64::NAN, -1.0);
    for i in 0..grid_size {
        let alpha = 1.0 - i as f64 / grid_size as f64;
        let min = admissibility(block, alpha, bordered)?;
        if min >= cfg.entry_floor {
            return Ok(alpha);
        }
        if min > best.1 {
            best = (alpha, min);
        }
    }
    Err(ConstructionError::AlphaSelection { best_alpha: best.0, best_min_entry: best.1 })
}

/// The orthogonal matrix in `S(G^c)` for a bipartite `G` whose colour classes
/// admit no spanning union of two complete bipartite graphs. Rows and columns
/// follow the vertex labels of `g`.
pub fn bipartite_complement_matrix(g: &Graph, cfg: &ToleranceConfig) -> Result<SymmetricMatrix, ConstructionError> {
    let colors = g.two_coloring().ok_or(ConstructionError::NotBipartite)?;
    let black: Vec<usize> = (0..g.order()).filter(|&v| !colors[v]).collect();
    let white: Vec<usize> = (0..g.order()).filter(|&v| colors[v]).collect();
    let b = DMatrix::from_fn(black.len(), white.len(), |i, j| if g.has_edge(black[i], white[j]) { 0.0 } else { 1.0 });
    let block = BipartiteBlock::rescaled(b, None)?;
    let alpha = select_alpha(&block, false, cfg)?;
    let m = build_m(&block, &ConstructionParams { alpha, entry_floor: cfg.entry_floor, ..Default::default() })?;
    let order: Vec<usize> = black.iter().chain(&white).copied().collect();
    Ok(m.permuted(&inverse(&order)))
}

pub(crate) fn inverse(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        inv[v] = i;
    }
    inv
}
