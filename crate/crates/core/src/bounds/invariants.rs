use serde::{Deserialize, Serialize};

use super::BoundsError;
use crate::graph::{bits, Graph, VertexSet};

/// Largest order accepted by [`theta_star_2`].
pub const THETA_STAR_MAX_ORDER: usize = 12;

/// Edge count of the longest shortest path that is the only shortest path
/// between its ends. 0 for edgeless graphs.
pub fn unique_shortest_path_length(g: &Graph) -> usize {
    let n = g.order();
    let mut best = 0;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        // path counts saturate at 2
        let mut count = vec![0u8; n];
        dist[s] = 0;
        count[s] = 1;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for w in bits(g.neighbors(u)) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    count[w] = count[u];
                    queue.push_back(w);
                } else if dist[w] == dist[u] + 1 {
                    count[w] = (count[w] + count[u]).min(2);
                }
            }
        }
        for t in 0..n {
            if count[t] == 1 && dist[t] != usize::MAX {
                best = best.max(dist[t]);
            }
        }
    }
    best
}

/// Number of vertices of a longest cycle, 0 for forests.
pub fn circumference(g: &Graph) -> usize {
    let n = g.order();
    let mut best = 0;
    for s in 0..n {
        if n - s < 3 || n - s <= best {
            break;
        }
        // cycles whose smallest vertex is s; reach[mask] holds the possible
        // ends of paths from s covering exactly mask
        let above: VertexSet = !((1u32 << (s + 1)) - 1) as VertexSet;
        let allowed = above & g.all_vertices();
        let width = n - s;
        let mut reach = vec![0 as VertexSet; 1 << width];
        let local = |mask: u32| -> VertexSet { ((mask as VertexSet) << s) | (1 << s) };
        reach[1] = 1 << s;
        for m in 1u32..(1 << width) {
            if m & 1 == 0 {
                continue;
            }
            let ends = reach[m as usize];
            if ends == 0 {
                continue;
            }
            let mask = local(m);
            let size = m.count_ones() as usize;
            for v in bits(ends) {
                if size >= 3 && g.has_edge(v, s) {
                    best = best.max(size);
                }
                for w in bits(g.neighbors(v) & allowed & !mask) {
                    let next = m | (1 << (w - s));
                    reach[next as usize] |= 1 << w;
                }
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub count: usize,
    /// Colour of each vertex, in `0..count`.
    pub colors: Vec<usize>,
}

/// Exact chromatic number with an optimal colouring.
pub fn chromatic_number(g: &Graph) -> Coloring {
    let n = g.order();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let lower = greedy_clique(g);
    let greedy = greedy_coloring(g, &order);
    let mut best = greedy.clone();
    if best.count > lower {
        let mut colors = vec![usize::MAX; n];
        color_search(g, &order, 0, 0, &mut colors, &mut best, lower);
    }
    best
}

fn greedy_clique(g: &Graph) -> usize {
    (0..g.order())
        .map(|start| {
            let mut clique: VertexSet = 1 << start;
            let mut cand = g.neighbors(start);
            while cand != 0 {
                let v = bits(cand).max_by_key(|&v| (g.neighbors(v) & cand).count_ones()).expect("nonempty");
                clique |= 1 << v;
                cand &= g.neighbors(v);
            }
            clique.count_ones() as usize
        })
        .max()
        .unwrap_or(1)
}

fn greedy_coloring(g: &Graph, order: &[usize]) -> Coloring {
    let mut colors = vec![usize::MAX; g.order()];
    let mut count = 0;
    for &v in order {
        let used: Vec<usize> = bits(g.neighbors(v)).map(|w| colors[w]).collect();
        let c = (0..).find(|c| !used.contains(c)).expect("some colour is free");
        colors[v] = c;
        count = count.max(c + 1);
    }
    Coloring { count, colors }
}

fn color_search(
    g: &Graph,
    order: &[usize],
    depth: usize,
    used: usize,
    colors: &mut Vec<usize>,
    best: &mut Coloring,
    lower: usize,
) -> bool {
    if used >= best.count {
        return false;
    }
    if depth == order.len() {
        *best = Coloring { count: used, colors: colors.clone() };
        return used <= lower;
    }
    let v = order[depth];
    for c in 0..=used {
        if c >= best.count {
            break;
        }
        if bits(g.neighbors(v)).any(|w| colors[w] == c) {
            continue;
        }
        colors[v] = c;
        let next_used = used.max(c + 1);
        if color_search(g, order, depth + 1, next_used, colors, best, lower) {
            return true;
        }
        colors[v] = usize::MAX;
    }
    false
}

/// A split of the colour classes with `K_{m1,n1} ∪ K_{m2,n2}` spanning.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicliqueWitness {
    pub m1: usize,
    pub n1: usize,
    pub m2: usize,
    pub n2: usize,
    pub black1: Vec<usize>,
    pub white1: Vec<usize>,
    pub black2: Vec<usize>,
    pub white2: Vec<usize>,
}

/// Searches for black/white splits `B = B1 ∪ B2`, `W = W1 ∪ W2` with every
/// `B1 x W1` and `B2 x W2` pair an edge and `|B1||B2| != 0` or
/// `|W1||W2| != 0`. `black[v]` is the colour of `v`.
pub fn biclique_union_spanning_test(g: &Graph, black: &[bool]) -> Result<Option<BicliqueWitness>, BoundsError> {
    let n = g.order();
    if black.len() != n {
        return Err(BoundsError::ColoringLength { expected: n, found: black.len() });
    }
    if let Some((u, v)) = g.edges().find(|&(u, v)| black[u] == black[v]) {
        return Err(BoundsError::ImproperColoring(u, v));
    }
    let bl: Vec<usize> = (0..n).filter(|&v| black[v]).collect();
    let white: VertexSet = (0..n).filter(|&v| !black[v]).fold(0, |acc, v| acc | 1 << v);
    let m = bl.len();
    let common = |sel: u32| -> VertexSet {
        (0..m).filter(|&i| sel >> i & 1 == 1).fold(white, |acc, i| acc & g.neighbors(bl[i]))
    };
    let full = (1u32 << m) - 1;
    for s in 0..=full {
        let hi = common(s);
        let lo = white & !common(full & !s);
        if lo & !hi != 0 {
            continue;
        }
        let black_split = s != 0 && s != full;
        let free = hi & !lo;
        let mut sub = free;
        loop {
            let t = lo | sub;
            if black_split || (t != 0 && t != white) {
                let pick = |mask: VertexSet| bits(mask).collect::<Vec<_>>();
                let b1: VertexSet = (0..m).filter(|&i| s >> i & 1 == 1).fold(0, |acc, i| acc | 1 << bl[i]);
                let b2: VertexSet = (0..m).filter(|&i| s >> i & 1 == 0).fold(0, |acc, i| acc | 1 << bl[i]);
                let (black1, white1, black2, white2) = (pick(b1), pick(t), pick(b2), pick(white & !t));
                return Ok(Some(BicliqueWitness {
                    m1: black1.len(),
                    n1: white1.len(),
                    m2: black2.len(),
                    n2: white2.len(),
                    black1,
                    white1,
                    black2,
                    white2,
                }));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    Ok(None)
}

/// `K_r` for `r >= 1`, or `K_r` minus one edge for `r >= 4`, as a spanning
/// subgraph of the subgraph induced by `set`.
fn spans_s2_member(g: &Graph, set: VertexSet) -> bool {
    let r = set.count_ones() as usize;
    let missing = r * (r - 1) / 2 - bits(set).map(|v| (g.neighbors(v) & set).count_ones() as usize).sum::<usize>() / 2;
    missing == 0 || (r >= 4 && missing == 1)
}

/// `theta*(G, 2)` restricted to the members `K_r` and `K_r \ e` (`r >= 4`):
/// 1 if `G` spans one, 2 if some bipartition does, otherwise `None`.
pub fn theta_star_2(g: &Graph) -> Result<Option<usize>, BoundsError> {
    let n = g.order();
    if n > THETA_STAR_MAX_ORDER {
        return Err(BoundsError::TooLarge { n, max: THETA_STAR_MAX_ORDER });
    }
    let all = g.all_vertices();
    if spans_s2_member(g, all) {
        return Ok(Some(1));
    }
    // vertex 0 stays in the first part
    for rest in 0u32..(1 << (n - 1)) {
        let part = (((rest as VertexSet) << 1) | 1) & all;
        if part == all {
            continue;
        }
        if spans_s2_member(g, part) && spans_s2_member(g, all & !part) {
            return Ok(Some(2));
        }
    }
    Ok(None)
}
