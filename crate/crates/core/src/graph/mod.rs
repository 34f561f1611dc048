//! Small undirected simple graphs stored as per-vertex neighbour bitmasks.
//!
//! Vertices are `0..n` with `1 <= n <= 16`, so every neighbourhood fits in a
//! `u16`. All operations return new values; a [`Graph`] is never mutated
//! behind a shared reference.

mod canon;
mod enumerate;
mod graph6;

pub use canon::{canonical_form, canonical_labeling, find_isomorphism, CanonicalForm};
pub use enumerate::{enumerate_nonisomorphic, enumerate_trees, MAX_ENUMERATION_ORDER};
pub use graph6::Graph6Error;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported order.
pub const MAX_ORDER: usize = 16;

/// A vertex set as a bitmask.
pub type VertexSet = u16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph order {0} outside the supported range 1..=16")]
    OrderOutOfRange(usize),
    #[error("vertex {vertex} out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("enumeration supports 1 <= n <= {max}, got {n}")]
    EnumerationRange { n: usize, max: usize },
    #[error("relabeling is not a permutation of 0..{0}")]
    BadPermutation(usize),
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
}

/// An undirected simple graph on `n <= 16` vertices.
///
/// `adj[i]` has bit `j` set iff `{i, j}` is an edge. The adjacency is kept
/// symmetric and loop-free by every constructor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    adj: Vec<VertexSet>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_ORDER {
            return Err(GraphError::OrderOutOfRange(n));
        }
        Ok(Graph { adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    /// Builds a graph from raw adjacency masks, symmetrising and dropping loops.
    pub fn from_adjacency(adj: &[VertexSet]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(adj.len())?;
        let n = adj.len();
        for (u, &mask) in adj.iter().enumerate() {
            for v in 0..n {
                if v != u && mask >> v & 1 == 1 {
                    g.set_edge(u, v, true);
                }
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Ok(Graph::empty(n)?.complement())
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            edges.push((n - 1, 0));
        }
        Graph::from_edges(n, &edges)
    }

    /// `K_{1,n-1}` with centre 0.
    pub fn star(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Graph::from_edges(n, &edges)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn all_vertices(&self) -> VertexSet {
        ((1u32 << self.order()) - 1) as VertexSet
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn adjacency(&self) -> &[VertexSet] {
        &self.adj
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.order();
        (0..n).flat_map(move |u| ((u + 1)..n).filter(move |&v| self.has_edge(u, v)).map(move |v| (u, v)))
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let mut g = self.clone();
        g.set_edge(u, v, true);
        Ok(g)
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut g = self.clone();
        if u != v {
            g.set_edge(u, v, false);
        }
        Ok(g)
    }

    pub fn complement(&self) -> Self {
        let all = self.all_vertices();
        let adj = self.adj.iter().enumerate().map(|(i, &m)| !m & all & !(1 << i)).collect();
        Graph { adj }
    }

    /// `dup(G, v)` when `joined` is false and `jdup(G, v)` when it is true.
    ///
    /// The new vertex gets index `n` and the neighbourhood of `v`; the
    /// adjacency among the original vertices is untouched.
    pub fn duplicate_vertex(&self, v: usize, joined: bool) -> Result<Self, GraphError> {
        self.check_vertex(v)?;
        let n = self.order();
        if n + 1 > MAX_ORDER {
            return Err(GraphError::OrderOutOfRange(n + 1));
        }
        let mut adj = self.adj.clone();
        adj.push(0);
        let mut g = Graph { adj };
        for u in 0..n {
            if self.has_edge(u, v) {
                g.set_edge(u, n, true);
            }
        }
        if joined {
            g.set_edge(v, n, true);
        }
        Ok(g)
    }

    /// The induced subgraph on `V \ {v}`; higher vertices shift down by one.
    pub fn remove_vertex(&self, v: usize) -> Result<Self, GraphError> {
        self.check_vertex(v)?;
        let keep: Vec<usize> = (0..self.order()).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// The induced subgraph on `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(vertices.len())?;
        for (a, &u) in vertices.iter().enumerate() {
            self.check_vertex(u)?;
            for (b, &w) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, w) {
                    g.set_edge(a, b, true);
                }
            }
        }
        Ok(g)
    }

    /// Relabels so that new vertex `i` is old vertex `order[i]`.
    pub fn relabel(&self, order: &[usize]) -> Result<Self, GraphError> {
        let n = self.order();
        if !is_permutation(order, n) {
            return Err(GraphError::BadPermutation(n));
        }
        self.induced(order)
    }

    pub fn disjoint_union(&self, other: &Graph) -> Result<Self, GraphError> {
        let n = self.order();
        let mut g = Graph::empty(n + other.order())?;
        for (u, v) in self.edges() {
            g.set_edge(u, v, true);
        }
        for (u, v) in other.edges() {
            g.set_edge(n + u, n + v, true);
        }
        Ok(g)
    }

    /// Connected components as vertex masks, ordered by smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen: VertexSet = 0;
        let mut out = Vec::new();
        for s in 0..self.order() {
            if seen >> s & 1 == 1 {
                continue;
            }
            let comp = self.reach(1 << s, self.all_vertices());
            seen |= comp;
            out.push(comp);
        }
        out
    }

    /// Vertices reachable from `start` using only vertices in `within`.
    pub fn reach(&self, start: VertexSet, within: VertexSet) -> VertexSet {
        let mut comp = start & within;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            next &= within & !comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.reach(1, self.all_vertices()) == self.all_vertices()
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.order() && self.is_connected()
    }

    /// Connected with exactly one cycle.
    pub fn is_unicyclic(&self) -> bool {
        self.edge_count() == self.order() && self.is_connected()
    }

    /// A proper 2-colouring (`true` = black), with the smallest vertex of each
    /// component black, or `None` if the graph has an odd cycle.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let n = self.order();
        let mut color: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(true);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let cu = color[u].unwrap();
                for w in bits(self.adj[u]) {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            stack.push(w);
                        }
                        Some(cw) if cw == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.order();
        self.edge_count() == n * (n - 1) / 2
    }

    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        canonical_form(self) == canonical_form(other)
    }

    /// BFS distances from `s`; `None` for unreachable vertices.
    pub fn distances_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.order()];
        dist[s] = Some(0);
        let mut frontier: VertexSet = 1 << s;
        let mut seen = frontier;
        let mut d = 0;
        while frontier != 0 {
            d += 1;
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            next &= !seen;
            for v in bits(next) {
                dist[v] = Some(d);
            }
            seen |= next;
            frontier = next;
        }
        dist
    }

    /// Largest finite distance over all pairs (0 for a single vertex).
    pub fn diameter_within_components(&self) -> usize {
        (0..self.order())
            .flat_map(|s| self.distances_from(s).into_iter().flatten())
            .max()
            .unwrap_or(0)
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.order() {
            Err(GraphError::VertexOutOfRange { vertex: v, order: self.order() })
        } else {
            Ok(())
        }
    }

    fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        if present {
            self.adj[u] |= 1 << v;
            self.adj[v] |= 1 << u;
        } else {
            self.adj[u] &= !(1 << v);
            self.adj[v] &= !(1 << u);
        }
    }

    /// graph6 encoding of this graph.
    pub fn to_graph6(&self) -> String {
        graph6::encode(self)
    }

    pub fn from_graph6(text: &str) -> Result<Self, GraphError> {
        Ok(graph6::decode(text)?)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({} ", self.order())?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_graph6())
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_graph6())
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Graph::from_graph6(&text).map_err(serde::de::Error::custom)
    }
}

/// Iterates the set bits of a mask, lowest first.
pub fn bits(mut mask: VertexSet) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

pub(crate) fn is_permutation(order: &[usize], n: usize) -> bool {
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_of_complete_is_edgeless() {
        for n in 1..=8 {
            let k = Graph::complete(n).unwrap();
            assert_eq!(k.complement(), Graph::empty(n).unwrap());
        }
    }

    #[test]
    fn p4_is_self_complementary_via_3142() {
        let p4 = Graph::path(4).unwrap();
        // path 3-1-4-2 in 1-based labels
        let relabeled = Graph::from_edges(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(p4.complement(), relabeled);
        assert!(p4.is_isomorphic(&p4.complement()));
    }

    #[test]
    fn duplicating_k1() {
        let k1 = Graph::empty(1).unwrap();
        assert_eq!(k1.duplicate_vertex(0, false).unwrap(), Graph::empty(2).unwrap());
        assert_eq!(k1.duplicate_vertex(0, true).unwrap(), Graph::complete(2).unwrap());
    }

    #[test]
    fn jdup_of_p3_terminal_is_r4() {
        let p3 = Graph::path(3).unwrap();
        let r4 = Graph::path(3).unwrap().disjoint_union(&Graph::empty(1).unwrap()).unwrap().complement();
        let g = p3.duplicate_vertex(0, true).unwrap();
        assert!(g.is_isomorphic(&r4));
        // twice: still a joined-duplicate graph, now K_3 plus pendant structure
        let g2 = g.duplicate_vertex(0, true).unwrap();
        assert_eq!(g2.order(), 5);
        assert!(g2.has_edge(0, 3) && g2.has_edge(0, 4) && g2.has_edge(3, 4));
    }

    #[test]
    fn duplicate_out_of_range() {
        let g = Graph::path(3).unwrap();
        assert_eq!(
            g.duplicate_vertex(3, false),
            Err(GraphError::VertexOutOfRange { vertex: 3, order: 3 })
        );
    }

    #[test]
    fn order_limits() {
        assert!(Graph::empty(0).is_err());
        assert!(Graph::empty(17).is_err());
        assert!(Graph::empty(16).unwrap().duplicate_vertex(0, true).is_err());
    }

    #[test]
    fn two_coloring_detects_odd_cycles() {
        assert!(Graph::cycle(5).unwrap().two_coloring().is_none());
        let c = Graph::cycle(6).unwrap().two_coloring().unwrap();
        assert_eq!(c, vec![true, false, true, false, true, false]);
    }

    #[test]
    fn distances_and_components() {
        let g = Graph::path(3).unwrap().disjoint_union(&Graph::empty(2).unwrap()).unwrap();
        assert_eq!(g.components(), vec![0b111, 0b1000, 0b10000]);
        assert_eq!(g.distances_from(0), vec![Some(0), Some(1), Some(2), None, None]);
        assert_eq!(g.diameter_within_components(), 2);
    }
}
