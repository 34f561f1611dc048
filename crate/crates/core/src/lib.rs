//! Bounds and certificates for the minimum number of distinct eigenvalues
//! `q(G)` of symmetric matrices with a prescribed off-diagonal pattern.

pub mod graph;
pub mod spectra;
pub mod strong;
pub mod constructions;
pub mod bounds;
pub mod families;
pub mod conjecture;
