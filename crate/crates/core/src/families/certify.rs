//! Explicit matrices for complements of trees and of triangle tadpoles.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{classify_tree, q_tree_complement, realize, tadpole, FamilyError, FamilyTag, TreeComplementValue};
use crate::bounds::{bound_report, BoundReport};
use crate::constructions::bank::{h_complement_ssp, h_graph, p4_matrix, p6_complement, s2_22_complement, s3_22_complement, w2_1_22_complement};
use crate::constructions::{
    bipartite_complement_matrix, build_mhat, inverse, joined_duplicate_matrix, select_alpha, BipartiteBlock,
    Certificate, ConstructionParams, PropertyLevel,
};
use crate::graph::{find_isomorphism, Graph};
use crate::spectra::{symmetric_eigen, SymmetricMatrix, ToleranceConfig};
use crate::strong::{lift_to_supergraph, strong_property_check, LiftOptions, StrongMode};

/// Largest `m + n` accepted by [`build_tmn_complement_certificate`].
pub const TMN_MAX_SUM: usize = 12;
const TMN_MIN_SUM: usize = 6;
/// `sigma(join)` must equal `sigma(A) ∪ {1}` to this accuracy.
const JOIN_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeComplementResult {
    pub tree_graph6: String,
    pub tag: FamilyTag,
    pub closed_form: TreeComplementValue,
    /// Present whenever the closed form is realized by an explicit matrix.
    pub certificate: Option<Certificate>,
    pub bounds: BoundReport,
}

/// Moves a certificate built on `built` onto the labels of `target`.
fn transport(matrix: &SymmetricMatrix, built: &Graph, target: &Graph) -> Result<SymmetricMatrix, FamilyError> {
    let map = find_isomorphism(built, target)
        .ok_or_else(|| FamilyError::Invariant(format!("built graph {} is not isomorphic to the target", built.to_graph6())))?;
    Ok(matrix.permuted(&inverse(&map)))
}

/// Duplicates tree leaves: each `(leaf, count)` adds `count` twins of `leaf`.
/// In the complement every twin is a joined duplicate, so the distinct
/// eigenvalues of `matrix` are kept.
fn grow_leaves(
    mut tree: Graph,
    mut matrix: SymmetricMatrix,
    twins: &[(usize, usize)],
    cfg: &ToleranceConfig,
) -> Result<(Graph, SymmetricMatrix), FamilyError> {
    for &(leaf, count) in twins {
        for _ in 0..count {
            tree = tree.duplicate_vertex(leaf, false)?;
            matrix = joined_duplicate_matrix(&matrix, leaf, None, cfg)?;
        }
    }
    Ok((tree, matrix))
}

fn star_complement(n: usize) -> SymmetricMatrix {
    // centre 0 is isolated in the complement
    let c = 2.0 / (n - 1) as f64;
    SymmetricMatrix::from_fn(n, |i, j| match (i, j) {
        (0, 0) => 1.0,
        (0, _) | (_, 0) => 0.0,
        _ if i == j => c - 1.0,
        _ => c,
    })
}

/// `M^` for `W(k, l0, (1,...,1))^c`, `k >= 3`, `l0 <= 1`. Labels: root 0,
/// grandchildren `1..=k`, children `k+1..=2k`, then the leaf child.
fn depth_two_seed(k: usize, l0: usize, cfg: &ToleranceConfig) -> Result<(Graph, SymmetricMatrix), FamilyError> {
    let cols = k + l0;
    let mut b = DMatrix::from_fn(k, cols, |i, j| if i == j { 0.0 } else { 1.0 });
    b[(k - 1, 0)] = 2.0 - k as f64;
    if l0 == 1 {
        b[(k - 2, k)] = 2.0 / 3.0;
        b[(k - 1, k)] = 1.0 / 3.0;
    }
    let mut v = DVector::from_element(k, 1.0);
    v[0] = 2.0 - k as f64;
    let block = BipartiteBlock::rescaled(b, Some(v))?;
    let alpha = select_alpha(&block, true, cfg)?;
    let m = build_mhat(&block, &ConstructionParams { alpha, entry_floor: cfg.entry_floor, ..Default::default() })?;
    let mut edges: Vec<(usize, usize)> = (1..=k).map(|i| (i, k + i)).collect();
    edges.extend((k + 1..=2 * k + l0).map(|c| (0, c)));
    Ok((Graph::from_edges(2 * k + 1 + l0, &edges)?, m))
}

fn seed(c: Certificate) -> (Graph, SymmetricMatrix) {
    (c.graph.complement(), c.matrix)
}

/// Builds the matrix behind the closed form for `q(T^c)` when one exists.
fn tree_complement_matrix(
    tag: &FamilyTag,
    t: &Graph,
    cfg: &ToleranceConfig,
) -> Result<Option<(Graph, SymmetricMatrix)>, FamilyError> {
    let built = match *tag {
        FamilyTag::Star { n: 2 } => (t.clone(), SymmetricMatrix::identity(2)),
        FamilyTag::Star { n } => (realize(tag)?.expect("star"), star_complement(n)),
        FamilyTag::DoubleStarPath { k: 2, m: 1, n: 1 } => seed(p4_matrix()),
        FamilyTag::DoubleStarPath { k: 4, m, n } => {
            let (tree, x) = seed(p6_complement());
            grow_leaves(tree, x, &[(0, m - 1), (3, n - 1)], cfg)?
        }
        FamilyTag::DoubleStarPath { k: 3, m, n } if n >= 2 => {
            let (tree, x) = seed(s3_22_complement());
            grow_leaves(tree, x, &[(2, m - 2), (0, n - 2)], cfg)?
        }
        FamilyTag::DoubleStarPath { k: 2, m, n } if n >= 2 => {
            let (tree, x) = seed(s2_22_complement());
            grow_leaves(tree, x, &[(1, m - 2), (4, n - 2)], cfg)?
        }
        FamilyTag::DoubleStarPath { k: 2 | 3, .. } => return Ok(None),
        FamilyTag::DepthTwo { k: 2, l, ref delta } => {
            if delta[1] < 2 || l == 0 {
                return Ok(None);
            }
            let (tree, x) = seed(w2_1_22_complement());
            grow_leaves(tree, x, &[(3, delta[0] - 2), (1, delta[1] - 2), (7, l - 1)], cfg)?
        }
        FamilyTag::DepthTwo { k, l, ref delta } => {
            let l0 = l.min(1);
            let (tree, x) = depth_two_seed(k, l0, cfg)?;
            let mut twins: Vec<(usize, usize)> = delta.iter().enumerate().map(|(i, &d)| (i + 1, d - 1)).collect();
            if l0 == 1 {
                twins.push((2 * k + 1, l - 1));
            }
            grow_leaves(tree, x, &twins, cfg)?
        }
        FamilyTag::DoubleStarPath { .. } | FamilyTag::GenericTree => {
            (t.clone(), bipartite_complement_matrix(t, cfg)?)
        }
        _ => return Err(FamilyError::WrongTag(tag.name())),
    };
    Ok(Some(built))
}

/// Closed form for `q(T^c)` together with a verified matrix in `S(T^c)`
/// attaining it, labelled as `t`.
pub fn certify_tree_complement(t: &Graph, cfg: &ToleranceConfig) -> Result<TreeComplementResult, FamilyError> {
    let tag = classify_tree(t)?;
    let closed_form = q_tree_complement(t)?;
    let complement = t.complement();
    let certificate = match tree_complement_matrix(&tag, t, cfg)? {
        Some((tree, matrix)) => {
            let matrix = transport(&matrix, &tree, t)?;
            let cert = Certificate::new(
                format!("tree_c_{}", t.to_graph6()),
                complement.clone(),
                matrix,
                closed_form.value,
                PropertyLevel::None,
                closed_form.value == 2,
            );
            Some(cert.verified(cfg)?)
        }
        None => None,
    };
    Ok(TreeComplementResult { tree_graph6: t.to_graph6(), tag, closed_form, certificate, bounds: bound_report(&complement) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InductionStep {
    pub from: (usize, usize),
    pub to: (usize, usize),
    pub side: Side,
    /// `max |sorted sigma(join) - sorted (sigma(A) ∪ {1})|`.
    pub join_deviation: f64,
    /// SSP nullity of the joined matrix.
    pub join_nullity: usize,
    pub lift_iterations: usize,
    pub lift_restarts: usize,
    pub spectrum_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TmnCertificate {
    pub m: usize,
    pub n: usize,
    pub base: (usize, usize),
    /// Edge of `H` removed for the base case, in the labels of `H`.
    pub base_edge: (usize, usize),
    pub base_lift_iterations: usize,
    pub steps: Vec<InductionStep>,
    pub certificate: Certificate,
}

fn sign_normalized(a: &SymmetricMatrix) -> Result<SymmetricMatrix, FamilyError> {
    Ok(symmetric_eigen(a)?.apply(f64::signum))
}

fn reversed(a: &SymmetricMatrix) -> SymmetricMatrix {
    let n = a.dim();
    a.permuted(&(0..n).rev().collect::<Vec<_>>())
}

fn base_case(a: usize, b: usize, cfg: &ToleranceConfig, opts: &LiftOptions) -> Result<(SymmetricMatrix, (usize, usize), usize), FamilyError> {
    let h = h_graph();
    let x = h_complement_ssp().verified(cfg)?.matrix;
    let target = tadpole(a, b)?;
    for (u, v) in h.edges() {
        let sub = h.without_edge(u, v)?;
        let Some(map) = find_isomorphism(&sub, &target) else { continue };
        let lifted = lift_to_supergraph(&x, &sub.complement(), StrongMode::Ssp, cfg, opts)?;
        return Ok((lifted.matrix.permuted(&inverse(&map)), (u, v), lifted.iterations));
    }
    Err(FamilyError::Invariant(format!("no edge of H leaves T_({a},{b})")))
}

/// `T_{p,q}^c` to `T_{p+1,q}^c` for `p >= 3`, in standard labels.
fn extend_first(
    x: &SymmetricMatrix,
    p: usize,
    q: usize,
    step: usize,
    cfg: &ToleranceConfig,
    opts: &LiftOptions,
) -> Result<(SymmetricMatrix, InductionStep), FamilyError> {
    let t = tadpole(p, q)?;
    let x = sign_normalized(x)?;
    let joined = joined_duplicate_matrix(&x, 1, Some(1.0), cfg)?;

    let mut expected = symmetric_eigen(&x)?.values;
    expected.push(1.0);
    expected.sort_by(f64::total_cmp);
    let got = symmetric_eigen(&joined)?.values;
    let join_deviation = got.iter().zip(&expected).map(|(g, e)| (g - e).abs()).fold(0.0, f64::max);
    if join_deviation > JOIN_TOL {
        return Err(FamilyError::Hs04 { step, deviation: join_deviation });
    }
    let join_nullity = strong_property_check(&joined, StrongMode::Ssp, cfg)?.nullity;

    // the twin N of vertex 1 sees 0 and 2; dropping N-2 leaves the path N-0-1-...
    let dup = t.duplicate_vertex(1, false)?;
    let big = dup.order() - 1;
    let h = dup.without_edge(big, 2)?;
    let opts = LiftOptions { seed: opts.seed.wrapping_add(step as u64), ..*opts };
    let lifted = lift_to_supergraph(&joined, &h.complement(), StrongMode::Ssp, cfg, &opts)?;
    let order: Vec<usize> = std::iter::once(big).chain(0..big).collect();
    let record = InductionStep {
        from: (p, q),
        to: (p + 1, q),
        side: Side::First,
        join_deviation,
        join_nullity,
        lift_iterations: lifted.iterations,
        lift_restarts: lifted.restarts,
        spectrum_deviation: lifted.spectrum_deviation,
    };
    Ok((lifted.matrix.permuted(&order), record))
}

/// An orthogonal matrix in `S(T_{m,n}^c)` with the SSP, for `m >= n >= 1`
/// and `6 <= m + n <= TMN_MAX_SUM`, built from the bank matrix for `H^c`
/// by edge deletion, lifting, and repeated joined duplication.
pub fn build_tmn_complement_certificate(
    m: usize,
    n: usize,
    cfg: &ToleranceConfig,
    opts: &LiftOptions,
) -> Result<TmnCertificate, FamilyError> {
    if n == 0 || m < n || !(TMN_MIN_SUM..=TMN_MAX_SUM).contains(&(m + n)) {
        return Err(FamilyError::TmnRange { m, n, min: TMN_MIN_SUM, max: TMN_MAX_SUM });
    }
    let base = if n <= 3 { (6 - n, n) } else { (3, 3) };
    let (mut x, base_edge, base_lift_iterations) = base_case(base.0, base.1, cfg, opts)?;
    let (mut p, mut q) = base;
    let mut steps = Vec::new();
    while q < n {
        let (y, mut record) = extend_first(&reversed(&x), q, p, steps.len() + 1, cfg, opts)?;
        x = reversed(&y);
        q += 1;
        record.from = (p, q - 1);
        record.to = (p, q);
        record.side = Side::Second;
        steps.push(record);
    }
    while p < m {
        let (y, record) = extend_first(&x, p, q, steps.len() + 1, cfg, opts)?;
        x = y;
        p += 1;
        steps.push(record);
    }
    let cert = Certificate::new(
        format!("tmn_c_{m}_{n}"),
        tadpole(m, n)?.complement(),
        x,
        2,
        PropertyLevel::Ssp,
        true,
    )
    .verified(cfg)?;
    Ok(TmnCertificate { m, n, base, base_edge, base_lift_iterations, steps, certificate: cert })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::Verification;
    use crate::graph::enumerate_trees;
    use crate::spectra::{pattern_matches, spectrum};

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn independent_check(g: &Graph, x: &SymmetricMatrix, q: usize) {
        assert!(pattern_matches(x, g, &cfg()).unwrap().matches);
        assert_eq!(spectrum(x, &cfg()).unwrap().q, q);
    }

    #[test]
    fn every_tree_up_to_ten_vertices() {
        for n in 2..=10 {
            for t in enumerate_trees(n).unwrap() {
                let r = certify_tree_complement(&t, &cfg()).unwrap();
                let q = r.closed_form.value;
                assert!(r.bounds.q_lower.value <= q, "{}: lower bound exceeds {q}", r.tree_graph6);
                match &r.certificate {
                    Some(c) => {
                        assert_eq!(c.verified, Verification::Verified);
                        independent_check(&t.complement(), &c.matrix, q);
                    }
                    None => assert_eq!(q, 3, "{} {}", r.tree_graph6, r.tag),
                }
            }
        }
    }

    #[test]
    fn large_depth_two_trees() {
        let cases = [
            FamilyTag::DepthTwo { k: 3, l: 2, delta: vec![3, 2, 1] },
            FamilyTag::DepthTwo { k: 4, l: 0, delta: vec![2, 1, 1, 1] },
            FamilyTag::DepthTwo { k: 5, l: 1, delta: vec![1, 1, 1, 1, 1] },
            FamilyTag::DepthTwo { k: 2, l: 3, delta: vec![3, 2] },
            FamilyTag::DoubleStarPath { k: 4, m: 5, n: 4 },
        ];
        for tag in cases {
            let t = realize(&tag).unwrap().unwrap();
            let r = certify_tree_complement(&t, &cfg()).unwrap();
            assert_eq!(r.tag, tag);
            let c = r.certificate.unwrap();
            assert!(c.matrix.involution_defect() < 1e-10);
            independent_check(&t.complement(), &c.matrix, 2);
        }
    }

    #[test]
    fn tadpole_base_cases() {
        for (m, n) in [(5, 1), (4, 2), (3, 3)] {
            let r = build_tmn_complement_certificate(m, n, &cfg(), &LiftOptions::default()).unwrap();
            assert!(r.steps.is_empty());
            independent_check(&tadpole(m, n).unwrap().complement(), &r.certificate.matrix, 2);
        }
    }

    #[test]
    fn tadpole_induction() {
        for (m, n) in [(6, 1), (4, 4), (5, 4)] {
            let r = build_tmn_complement_certificate(m, n, &cfg(), &LiftOptions::default()).unwrap();
            assert_eq!(r.steps.len(), m + n - 6);
            for s in &r.steps {
                assert!(s.join_deviation <= 1e-8);
            }
            let x = &r.certificate.matrix;
            independent_check(&tadpole(m, n).unwrap().complement(), x, 2);
            assert!(x.involution_defect() < 1e-10);
        }
        assert!(matches!(
            build_tmn_complement_certificate(2, 3, &cfg(), &LiftOptions::default()),
            Err(FamilyError::TmnRange { .. })
        ));
    }

    fn prufer_tree(seq: &[usize], n: usize) -> Graph {
        let mut degree = vec![1; n];
        for &x in seq {
            degree[x] += 1;
        }
        let mut edges = Vec::new();
        for &x in seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf, x));
            degree[leaf] -= 1;
            degree[x] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        Graph::from_edges(n, &edges).unwrap()
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn random_trees_are_certified(n in 3usize..=14, raw in proptest::collection::vec(0usize..1000, 12)) {
            let seq: Vec<usize> = raw.iter().take(n - 2).map(|x| x % n).collect();
            let t = prufer_tree(&seq, n);
            let r = certify_tree_complement(&t, &cfg()).unwrap();
            let q = r.closed_form.value;
            proptest::prop_assert!(r.bounds.contains(q), "{:?}", r.bounds);
            match r.certificate {
                Some(c) => independent_check(&t.complement(), &c.matrix, q),
                None => proptest::prop_assert_eq!(q, 3),
            }
        }
    }
}
