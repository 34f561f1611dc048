//! Verdicts for `q(G) + q(G^c) <= |G| + 2` and the exhaustive searches on
//! seven and eight vertices.
//!
//! A verdict only combines bounds produced here: the combinatorial bounds,
//! the family closed forms, the characterization of graphs with
//! `q(G) >= |G| - 1`, and joined-duplicate reductions.

mod survey;

pub use survey::{
    filter_order8, survey_order7, survey_order7_with, filter_order8_with, GraphVerdictRow, JdupWitness, PairRecord,
    StageCount, SurveyOptions, SurveyReport, ORDER7_EXPECTED_PAIRS, ORDER7_EXPECTED_TOTAL, ORDER8_EXPECTED_PAIRS,
};

use serde::{Deserialize, Serialize};

use crate::bounds::{bound_report, BoundSource};
use crate::families::{q_high_q_complement, q_tree, q_tree_complement, recognize_high_q, tadpole, FamilyTag};
use crate::graph::{bits, Graph};

/// Largest order accepted by [`verdict`].
pub const VERDICT_MAX_ORDER: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Holds,
    KnownException,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictRule {
    /// `P_4`, `P_5`, `P_5^c` or `T_{2,2}`.
    ExceptionTable,
    /// `G` or `G^c` has `q >= |G| - 1`.
    HighQFamily,
    /// `G` or `G^c` is a tree.
    TreeTheorem,
    /// One side has a certified `q <= 4`; the other is not a high-`q` graph.
    QAtMostFour,
    /// `G` or `G^c` is unicyclic.
    Unicyclic,
    /// The circumference conditions on `c(G)` and `c(G^c)`.
    CycleConditions,
    /// The two certified upper bounds already sum to at most `|G| + 2`.
    CertifiedSum,
    NoRule,
}

/// Where a certified upper bound on `q` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "rule")]
pub enum UpperSource {
    Bounds(BoundSource),
    /// Not a high-`q` graph, so `q <= |G| - 2`.
    NotHighQ,
    /// A high-`q` graph other than a path, so `q <= |G| - 1`.
    NotPath,
    TreeClosedForm,
    TreeComplementClosedForm,
    HighQComplementClosedForm,
    /// `G = jdup(G - w, v)`, so `q(G) <= q(G - w)`.
    JoinedDuplicate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedUpper {
    pub value: usize,
    pub source: UpperSource,
    /// For [`UpperSource::JoinedDuplicate`]: the reduced graph.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideBounds {
    pub graph6: String,
    pub lower: usize,
    pub upper: CertifiedUpper,
    pub circumference: usize,
    pub family: FamilyTag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub rule: VerdictRule,
    /// Best certified upper bound on `q(G) + q(G^c)`.
    pub sum_bound: usize,
    /// `|G| + 2`.
    pub target: usize,
    /// Certified lower bound on `q(G) + q(G^c)`.
    pub sum_lower: usize,
    pub graph: SideBounds,
    pub complement: SideBounds,
}

/// The four graphs with `q(G) + q(G^c) = 8 > |G| + 2`.
pub fn exception_graphs() -> Vec<(&'static str, Graph)> {
    let p4 = Graph::path(4).expect("small order");
    let p5 = Graph::path(5).expect("small order");
    let p5c = p5.complement();
    vec![("P_4", p4), ("P_5", p5), ("P_5^c", p5c), ("T_(2,2)", tadpole(2, 2).expect("small order"))]
}

pub fn is_exception(g: &Graph) -> bool {
    g.order() <= 5 && exception_graphs().iter().any(|(_, e)| e.is_isomorphic(g))
}

/// A pair `v < w` of adjacent vertices with `N(v) \ {w} = N(w) \ {v}`.
pub fn joined_duplicate_pair(g: &Graph) -> Option<(usize, usize)> {
    joined_duplicate_pairs(g).next()
}

fn joined_duplicate_pairs(g: &Graph) -> impl Iterator<Item = (usize, usize)> + '_ {
    let n = g.order();
    (0..n).flat_map(move |v| {
        bits(g.neighbors(v)).filter(move |&w| w > v).filter(move |&w| {
            g.neighbors(v) & !(1 << w) == g.neighbors(w) & !(1 << v)
        }).map(move |w| (v, w))
    })
}

fn better(best: &mut CertifiedUpper, candidate: CertifiedUpper) {
    if candidate.value < best.value {
        *best = candidate;
    }
}

fn plain(value: usize, source: UpperSource) -> CertifiedUpper {
    CertifiedUpper { value, source, reduced: None }
}

/// Smallest upper bound on `q(g)` this crate can certify.
pub fn certified_upper(g: &Graph) -> CertifiedUpper {
    let n = g.order();
    let report = bound_report(g);
    let mut best = plain(report.q_upper.value, UpperSource::Bounds(report.q_upper.source));

    let tag = recognize_high_q(g);
    match tag {
        FamilyTag::None if n >= 2 => better(&mut best, plain(n - 2, UpperSource::NotHighQ)),
        FamilyTag::None | FamilyTag::Path { .. } => {}
        _ => better(&mut best, plain(n - 1, UpperSource::NotPath)),
    }
    if g.is_tree() && n >= 2 {
        if let Ok(Some(q)) = q_tree(g) {
            better(&mut best, plain(q, UpperSource::TreeClosedForm));
        }
    }
    let complement = g.complement();
    if complement.is_tree() && n >= 2 {
        if let Ok(v) = q_tree_complement(&complement) {
            better(&mut best, plain(v.value, UpperSource::TreeComplementClosedForm));
        }
    }
    let complement_tag = recognize_high_q(&complement);
    if let Ok(q) = q_high_q_complement(&complement_tag) {
        better(&mut best, plain(q, UpperSource::HighQComplementClosedForm));
    }

    if best.value > 2 {
        for (_, w) in joined_duplicate_pairs(g) {
            let h = g.remove_vertex(w).expect("vertex in range");
            if h.edge_count() == 0 {
                continue;
            }
            let reduced = certified_upper(&h);
            if reduced.value < best.value {
                best = CertifiedUpper { value: reduced.value, source: UpperSource::JoinedDuplicate, reduced: Some(h.to_graph6()) };
            }
        }
    }
    best
}

fn side(g: &Graph) -> SideBounds {
    let report = bound_report(g);
    SideBounds {
        graph6: g.to_graph6(),
        lower: report.q_lower.value,
        upper: certified_upper(g),
        circumference: report.c,
        family: recognize_high_q(g),
    }
}

/// Whether the circumference conditions settle the inequality.
pub fn cycle_conditions(n: usize, c: usize, c_complement: usize) -> bool {
    let one_way = |a: usize, b: usize| {
        if n % 2 == 1 {
            a + 3 >= n && b + 1 >= n
        } else {
            a.min(b) + 2 >= n || (a + 3 >= n && b == n)
        }
    };
    one_way(c, c_complement) || one_way(c_complement, c)
}

/// Applies the rule cascade to `g` (at most [`VERDICT_MAX_ORDER`] vertices).
pub fn verdict(g: &Graph) -> Verdict {
    assert!(g.order() <= VERDICT_MAX_ORDER, "verdict supports at most {VERDICT_MAX_ORDER} vertices");
    let n = g.order();
    let gc = g.complement();
    let (a, b) = (side(g), side(&gc));
    let target = n + 2;
    let sum_bound = a.upper.value + b.upper.value;
    let sum_lower = a.lower + b.lower;
    let finish = |status, rule, sum_bound| Verdict { status, rule, sum_bound, target, sum_lower, graph: a.clone(), complement: b.clone() };

    if is_exception(g) {
        return finish(VerdictStatus::KnownException, VerdictRule::ExceptionTable, sum_bound);
    }
    let holds = sum_bound <= target;
    let high_q = a.family != FamilyTag::None || b.family != FamilyTag::None;
    let rule = if high_q {
        VerdictRule::HighQFamily
    } else if g.is_tree() || gc.is_tree() {
        VerdictRule::TreeTheorem
    } else if a.upper.value.min(b.upper.value) <= 4 {
        VerdictRule::QAtMostFour
    } else if g.is_unicyclic() || gc.is_unicyclic() {
        // the unicyclic side's complement has q <= 4 and the other side is not high-q
        return finish(VerdictStatus::Holds, VerdictRule::Unicyclic, sum_bound.min(4 + n - 2));
    } else if cycle_conditions(n, a.circumference, b.circumference) {
        VerdictRule::CycleConditions
    } else if holds {
        VerdictRule::CertifiedSum
    } else {
        VerdictRule::NoRule
    };
    let status = if holds { VerdictStatus::Holds } else { VerdictStatus::Undecided };
    let rule = if holds { rule } else { VerdictRule::NoRule };
    finish(status, rule, sum_bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::realize;
    use crate::graph::{enumerate_nonisomorphic, enumerate_trees};

    #[test]
    fn exceptions_sum_to_eight() {
        for (name, g) in exception_graphs() {
            let v = verdict(&g);
            assert_eq!(v.status, VerdictStatus::KnownException, "{name}");
            assert_eq!((v.sum_lower, v.sum_bound), (8, 8), "{name}");
        }
    }

    #[test]
    fn trees_on_nine_vertices_hold() {
        for t in enumerate_trees(9).unwrap() {
            let v = verdict(&t);
            assert_eq!(v.status, VerdictStatus::Holds);
            assert!(matches!(v.rule, VerdictRule::TreeTheorem | VerdictRule::HighQFamily));
        }
    }

    #[test]
    fn seven_cycle_with_pendant() {
        let g = Graph::cycle(7).unwrap().duplicate_vertex(0, false).unwrap().without_edge(1, 7).unwrap();
        assert!(g.is_unicyclic() && g.order() == 8);
        let v = verdict(&g);
        assert_eq!(v.status, VerdictStatus::Holds);
        assert!(v.sum_bound <= 10);
    }

    #[test]
    fn small_orders_resolve_and_are_symmetric() {
        let mut exceptions = 0;
        for n in 1..=6 {
            for g in enumerate_nonisomorphic(n).unwrap() {
                let v = verdict(&g);
                let w = verdict(&g.complement());
                assert_eq!(v.status, w.status, "{}", g.to_graph6());
                assert_eq!(v.rule, w.rule, "{}", g.to_graph6());
                assert_ne!(v.status, VerdictStatus::Undecided, "{}", g.to_graph6());
                assert!(v.sum_lower <= v.sum_bound);
                exceptions += usize::from(v.status == VerdictStatus::KnownException);
            }
        }
        assert_eq!(exceptions, 4);
    }

    #[test]
    fn joined_duplicates_detected() {
        assert_eq!(joined_duplicate_pair(&Graph::complete(3).unwrap()), Some((0, 1)));
        assert_eq!(joined_duplicate_pair(&Graph::path(4).unwrap()), None);
        assert_eq!(joined_duplicate_pair(&Graph::path(2).unwrap()), Some((0, 1)));
        let paw = tadpole(2, 1).unwrap();
        assert!(joined_duplicate_pair(&paw).is_some());
    }

    #[test]
    fn certified_upper_never_below_lower() {
        for n in 2..=6 {
            for g in enumerate_nonisomorphic(n).unwrap() {
                let r = bound_report(&g);
                let u = certified_upper(&g);
                assert!(r.q_lower.value <= u.value, "{} {:?}", g.to_graph6(), u);
            }
        }
        let w = realize(&FamilyTag::DepthTwo { k: 3, l: 1, delta: vec![2, 1, 1] }).unwrap().unwrap();
        assert_eq!(certified_upper(&w).value, 5);
    }

    #[test]
    fn cycle_condition_clauses() {
        assert!(cycle_conditions(9, 6, 8));
        assert!(!cycle_conditions(9, 5, 8));
        assert!(cycle_conditions(8, 6, 6));
        assert!(cycle_conditions(8, 5, 8));
        assert!(!cycle_conditions(8, 5, 7));
    }
}
