use serde::{Deserialize, Serialize};

use super::{SpectraError, SymmetricMatrix, ToleranceConfig};
use crate::graph::Graph;

/// Entries within this factor of `entry_floor` on either side are flagged.
const NEAR_FLOOR_FACTOR: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternViolation {
    pub i: usize,
    pub j: usize,
    pub value: f64,
    /// Whether `{i,j}` is an edge of the graph.
    pub is_edge: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternReport {
    pub matches: bool,
    pub violations: Vec<PatternViolation>,
    /// Conforming entries whose magnitude is within a factor of ten of the floor.
    pub near_floor: Vec<PatternViolation>,
}

pub fn pattern_matches(
    a: &SymmetricMatrix,
    g: &Graph,
    cfg: &ToleranceConfig,
) -> Result<PatternReport, SpectraError> {
    let n = a.dim();
    if n != g.order() {
        return Err(SpectraError::DimensionMismatch { matrix: n, graph: g.order() });
    }
    let floor = cfg.entry_floor;
    let mut violations = Vec::new();
    let mut near_floor = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let value = a.get(i, j);
            let is_edge = g.has_edge(i, j);
            let mag = value.abs();
            let entry = PatternViolation { i, j, value, is_edge };
            if is_edge != (mag >= floor) {
                violations.push(entry);
            } else if (is_edge && mag < floor * NEAR_FLOOR_FACTOR) || (!is_edge && mag * NEAR_FLOOR_FACTOR >= floor) {
                near_floor.push(entry);
            }
        }
    }
    Ok(PatternReport { matches: violations.is_empty(), violations, near_floor })
}

/// The graph of off-diagonal entries with magnitude at least `entry_floor`.
pub fn pattern_graph(a: &SymmetricMatrix, cfg: &ToleranceConfig) -> Graph {
    let n = a.dim();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if a.get(i, j).abs() >= cfg.entry_floor {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("matrix dimension within graph limits")
}
