//! Exact canonical labelling by pruned search over vertex orderings.
//!
//! The canonical form is the lexicographically smallest upper-triangle
//! bitstring (graph6 column order) over every vertex ordering that respects
//! the stable colour-refinement partition. The partition and its cell order
//! are isomorphism invariant, so restricting the search to it keeps the form
//! exact. Twin vertices (same neighbourhood up to each other) are explored
//! once per branching point since swapping them is an automorphism.

use serde::{Deserialize, Serialize};

use super::{bits, Graph, VertexSet};

/// Lexicographically minimal adjacency bitstring of a graph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct CanonicalForm {
    order: u8,
    /// Upper triangle in column order, first bit most significant.
    bits: u128,
}

impl CanonicalForm {
    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    /// The canonically labelled graph this form describes.
    pub fn to_graph(&self) -> Graph {
        let n = self.order();
        let len = n * (n - 1) / 2;
        let mut edges = Vec::new();
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if self.bits >> (len - 1 - k) & 1 == 1 {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        Graph::from_edges(n, &edges).expect("canonical form has valid order")
    }
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    canonical_labeling(g).0
}

/// Canonical form together with an ordering `order` such that
/// `g.relabel(&order)` is the canonical graph.
pub fn canonical_labeling(g: &Graph) -> (CanonicalForm, Vec<usize>) {
    let n = g.order();
    let colors = refine(g, (0..n).map(|v| g.degree(v) as u32).collect());
    let mut cell_of_position: Vec<u32> = colors.clone();
    cell_of_position.sort_unstable();

    let mut search = Search {
        g,
        colors: &colors,
        cell_of_position: &cell_of_position,
        total_len: n * (n - 1) / 2,
        best: None,
        order: Vec::with_capacity(n),
    };
    search.dfs(0, 0);
    let (bits, order) = search.best.expect("search visits at least one ordering");
    (CanonicalForm { order: n as u8, bits }, order)
}

/// An isomorphism `map` with `map[u]` the image in `h` of vertex `u` of `g`.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        return None;
    }
    let (fg, og) = canonical_labeling(g);
    let (fh, oh) = canonical_labeling(h);
    if fg != fh {
        return None;
    }
    let mut map = vec![0; g.order()];
    for (i, &u) in og.iter().enumerate() {
        map[u] = oh[i];
    }
    Some(map)
}

/// Stable colour refinement from an initial colouring. Colour ids are ranks of
/// sorted signatures, so they are labelling independent.
fn refine(g: &Graph, mut colors: Vec<u32>) -> Vec<u32> {
    let n = g.order();
    let mut classes = count_classes(&colors);
    loop {
        let mut sigs: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = bits(g.neighbors(v)).map(|w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<u32> = sigs
            .drain(..)
            .map(|s| distinct.binary_search(&s).expect("signature present") as u32)
            .collect();
        let next_classes = distinct.len();
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

struct Search<'a> {
    g: &'a Graph,
    colors: &'a [u32],
    cell_of_position: &'a [u32],
    total_len: usize,
    best: Option<(u128, Vec<usize>)>,
    order: Vec<usize>,
}

impl Search<'_> {
    fn dfs(&mut self, used: VertexSet, prefix: u128) {
        let p = self.order.len();
        let n = self.g.order();
        if p == n {
            let better = match &self.best {
                None => true,
                Some((b, _)) => prefix < *b,
            };
            if better {
                self.best = Some((prefix, self.order.clone()));
            }
            return;
        }
        let cell = self.cell_of_position[p];
        let mut tried: VertexSet = 0;
        for v in 0..n {
            if used >> v & 1 == 1 || self.colors[v] != cell {
                continue;
            }
            if bits(tried).any(|u| self.twins(u, v)) {
                continue;
            }
            tried |= 1 << v;

            let mut next = prefix;
            for &u in &self.order {
                next = next << 1 | self.g.has_edge(u, v) as u128;
            }
            let len = (p + 1) * p / 2;
            if let Some((b, _)) = &self.best {
                let best_prefix = if len == 0 { 0 } else { b >> (self.total_len - len) };
                if next > best_prefix {
                    continue;
                }
            }
            self.order.push(v);
            self.dfs(used | 1 << v, next);
            self.order.pop();
        }
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        let mask = !((1 << u) | (1 << v)) as VertexSet;
        (self.g.neighbors(u) ^ self.g.neighbors(v)) & mask == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive oracle: minimum bitstring over all n! orderings.
    fn brute_form(g: &Graph) -> u128 {
        let n = g.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = u128::MAX;
        permute(&mut perm, 0, &mut |p| {
            let mut b = 0u128;
            for j in 1..n {
                for i in 0..j {
                    b = b << 1 | g.has_edge(p[i], p[j]) as u128;
                }
            }
            best = best.min(b);
        });
        best
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    fn all_labeled(n: usize) -> impl Iterator<Item = Graph> {
        let pairs: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        (0u32..(1 << pairs.len())).map(move |mask| {
            let edges: Vec<_> =
                pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    }

    #[test]
    fn classes_agree_with_brute_force_minimum() {
        use std::collections::HashMap;
        for n in 1..=5 {
            let mut by_brute: HashMap<u128, CanonicalForm> = HashMap::new();
            let mut by_form: HashMap<CanonicalForm, u128> = HashMap::new();
            for g in all_labeled(n) {
                let form = canonical_form(&g);
                let brute = brute_form(&g);
                assert_eq!(*by_brute.entry(brute).or_insert(form), form, "{g:?}");
                assert_eq!(*by_form.entry(form).or_insert(brute), brute, "{g:?}");
                assert_eq!(form.to_graph().order(), n);
                assert!(form.to_graph().is_isomorphic(&g));
            }
        }
    }

    #[test]
    fn eleven_classes_on_four_vertices() {
        let mut forms: Vec<_> = all_labeled(4).map(|g| canonical_form(&g)).collect();
        forms.sort();
        forms.dedup();
        assert_eq!(forms.len(), 11);
        let mut brute: Vec<_> = all_labeled(4).map(|g| brute_form(&g)).collect();
        brute.sort();
        brute.dedup();
        assert_eq!(brute.len(), 11);
    }

    #[test]
    fn c4_relabelings_share_one_form() {
        let c4 = Graph::cycle(4).unwrap();
        let f = canonical_form(&c4);
        let mut perm: Vec<usize> = (0..4).collect();
        permute(&mut perm, 0, &mut |p| {
            assert_eq!(canonical_form(&c4.relabel(p).unwrap()), f);
        });
    }

    #[test]
    fn p4_and_its_complement() {
        let p4 = Graph::path(4).unwrap();
        assert_eq!(canonical_form(&p4), canonical_form(&p4.complement()));
    }

    #[test]
    fn labeling_reproduces_form() {
        let g = Graph::from_edges(7, &[(0, 3), (3, 5), (5, 1), (1, 6), (6, 2), (2, 4), (4, 0), (0, 5)]).unwrap();
        let (form, order) = canonical_labeling(&g);
        assert_eq!(g.relabel(&order).unwrap(), form.to_graph());
    }

    #[test]
    fn isomorphism_maps_edges() {
        let g = Graph::path(6).unwrap();
        let h = g.relabel(&[3, 5, 0, 2, 4, 1]).unwrap();
        let map = find_isomorphism(&g, &h).unwrap();
        for (u, v) in g.edges() {
            assert!(h.has_edge(map[u], map[v]));
        }
        assert!(find_isomorphism(&g, &Graph::star(6).unwrap()).is_none());
    }

    #[test]
    fn large_twin_classes_are_fast() {
        let star = Graph::star(16).unwrap();
        let (form, _) = canonical_labeling(&star);
        assert_eq!(form.to_graph().edge_count(), 15);
        let k16 = Graph::complete(16).unwrap();
        assert_eq!(canonical_form(&k16).to_graph(), k16);
    }
}
