//! Combinatorial invariants and the bounds on `q(G)` they imply.
//!
//! * `q(G) >= d(G) + 1` where `d` is the longest unique shortest path.
//! * `q(G) <= |G| - floor(c(G) / 2)` for the circumference `c`.
//! * `q(G) <= 2 chi(G^c)`.
//! * `q(G) <= 2 theta*(G, 2)`.

mod invariants;

pub use invariants::{
    biclique_union_spanning_test, chromatic_number, circumference, theta_star_2, unique_shortest_path_length,
    BicliqueWitness, Coloring, THETA_STAR_MAX_ORDER,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("colouring has length {found}, graph has {expected} vertices")]
    ColoringLength { expected: usize, found: usize },
    #[error("colouring is not proper: edge ({0},{1}) is monochromatic")]
    ImproperColoring(usize, usize),
    #[error("order {n} exceeds the limit {max} for this computation")]
    TooLarge { n: usize, max: usize },
}

/// Which rule produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    /// `q >= 1`, or `q >= 2` when there is an edge.
    Edges,
    /// `q >= d + 1`.
    UniqueShortestPath,
    /// `q <= |G|`.
    Order,
    /// `q = 1` for an edgeless graph (a scalar matrix).
    Edgeless,
    /// `q <= |G| - floor(c / 2)`.
    CycleBound,
    /// `q <= 2 chi(G^c)`.
    ChromaticComplement,
    /// `q <= 2 theta*(G, 2)`.
    ThetaStar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: usize,
    pub source: BoundSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub graph6: String,
    pub d: usize,
    pub c: usize,
    pub chi: usize,
    pub theta_star_2: Option<usize>,
    pub q_lower: Bound,
    pub q_upper: Bound,
}

impl BoundReport {
    pub fn contains(&self, q: usize) -> bool {
        self.q_lower.value <= q && q <= self.q_upper.value
    }
}

/// Aggregates every bound. `theta*` is skipped above
/// [`THETA_STAR_MAX_ORDER`] vertices.
pub fn bound_report(g: &Graph) -> BoundReport {
    let n = g.order();
    let d = unique_shortest_path_length(g);
    let c = circumference(g);
    let chi = chromatic_number(g).count;
    let chi_complement = chromatic_number(&g.complement()).count;
    let theta = theta_star_2(g).ok().flatten();

    let has_edge = g.edge_count() > 0;
    let q_lower = if d >= 1 {
        Bound { value: d + 1, source: BoundSource::UniqueShortestPath }
    } else {
        Bound { value: if has_edge { 2 } else { 1 }, source: BoundSource::Edges }
    };

    let mut candidates = vec![Bound { value: n, source: BoundSource::Order }];
    if !has_edge {
        candidates.push(Bound { value: 1, source: BoundSource::Edgeless });
    }
    if c > 0 {
        candidates.push(Bound { value: n - c / 2, source: BoundSource::CycleBound });
    }
    candidates.push(Bound { value: 2 * chi_complement, source: BoundSource::ChromaticComplement });
    if let Some(t) = theta {
        candidates.push(Bound { value: 2 * t, source: BoundSource::ThetaStar });
    }
    // first minimum wins, so ties keep the order above
    let q_upper = candidates.iter().copied().fold(candidates[0], |best, b| if b.value < best.value { b } else { best });

    BoundReport { graph6: g.to_graph6(), d, c, chi, theta_star_2: theta, q_lower, q_upper }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_are_pinned() {
        for n in 2..=9 {
            let r = bound_report(&Graph::path(n).unwrap());
            assert_eq!(r.d, n - 1);
            assert_eq!((r.q_lower.value, r.q_upper.value), (n, n), "P_{n}");
        }
    }

    #[test]
    fn paw_is_pinned_at_three() {
        // R_4: triangle 0,2,3 with pendant 1 on 3
        let g = Graph::from_edges(4, &[(0, 2), (0, 3), (2, 3), (1, 3)]).unwrap();
        let r = bound_report(&g);
        assert_eq!(r.q_lower, Bound { value: 3, source: BoundSource::UniqueShortestPath });
        assert_eq!(r.q_upper.value, 3);
    }

    #[test]
    fn edgeless_and_complete() {
        let r = bound_report(&Graph::empty(4).unwrap());
        assert_eq!((r.q_lower.value, r.q_upper.value), (1, 1));
        let r = bound_report(&Graph::complete(5).unwrap());
        assert_eq!(r.theta_star_2, Some(1));
        assert_eq!((r.q_lower.value, r.q_upper.value), (2, 2));

    }

    #[test]
    fn json_shape() {
        let r = bound_report(&Graph::cycle(5).unwrap());
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["graph6", "d", "c", "chi", "theta_star_2", "q_lower", "q_upper"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["q_upper"]["source"], "cycle_bound");
    }
}
