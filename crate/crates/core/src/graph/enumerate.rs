//! Isomorphism-free enumeration by vertex augmentation.
//!
//! Every graph of order `n` is a graph of order `n - 1` plus one vertex, so
//! augmenting one representative per class with every possible neighbourhood
//! and deduplicating by canonical form yields one representative per class.
//! Representatives are the canonically labelled graphs, sorted by form.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{canonical_form, CanonicalForm, Graph, GraphError, MAX_ORDER};

pub const MAX_ENUMERATION_ORDER: usize = 8;

pub fn enumerate_nonisomorphic(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(GraphError::EnumerationRange { n, max: MAX_ENUMERATION_ORDER });
    }
    let mut level = vec![Graph::empty(1)?];
    for k in 2..=n {
        level = augment(&level, k, |_| true);
    }
    Ok(level)
}

/// All trees of order `n`, one per isomorphism class.
pub fn enumerate_trees(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n == 0 || n > MAX_ORDER {
        return Err(GraphError::EnumerationRange { n, max: MAX_ORDER });
    }
    let mut level = vec![Graph::empty(1)?];
    for k in 2..=n {
        level = augment(&level, k, |mask| mask.count_ones() == 1);
    }
    Ok(level)
}

fn augment(level: &[Graph], k: usize, keep_mask: impl Fn(u16) -> bool) -> Vec<Graph> {
    let masks: Vec<u16> = (0u32..(1 << (k - 1))).map(|m| m as u16).filter(|&m| keep_mask(m)).collect();
    let forms: BTreeSet<CanonicalForm> = level
        .par_iter()
        .flat_map_iter(|g| masks.iter().map(move |&m| canonical_form(&add_vertex(g, m))))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    forms.into_iter().map(|f| f.to_graph()).collect()
}

fn add_vertex(g: &Graph, mask: u16) -> Graph {
    let n = g.order();
    let mut adj = g.adjacency().to_vec();
    adj.push(mask);
    for (v, row) in adj.iter_mut().enumerate().take(n) {
        if mask >> v & 1 == 1 {
            *row |= 1 << n;
        }
    }
    Graph::from_adjacency(&adj).expect("order checked by caller")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Burnside count of unlabeled graphs: average over permutations of
    /// 2^(number of cycles the permutation induces on vertex pairs).
    fn burnside_count(n: usize) -> u64 {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total: u64 = 0;
        let mut count: u64 = 0;
        loop {
            // cycle type
            let mut seen = vec![false; n];
            let mut cycles = Vec::new();
            for s in 0..n {
                if !seen[s] {
                    let mut len = 0;
                    let mut x = s;
                    while !seen[x] {
                        seen[x] = true;
                        x = perm[x];
                        len += 1;
                    }
                    cycles.push(len);
                }
            }
            let mut pair_cycles = 0;
            for (i, &a) in cycles.iter().enumerate() {
                pair_cycles += a / 2;
                for &b in &cycles[i + 1..] {
                    pair_cycles += gcd(a, b);
                }
            }
            total += 1u64 << pair_cycles;
            count += 1;
            if !next_permutation(&mut perm) {
                break;
            }
        }
        total / count
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        let n = p.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && p[i - 1] >= p[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while p[j] <= p[i - 1] {
            j -= 1;
        }
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    #[test]
    fn counts_match_burnside_oracle() {
        let expected: Vec<u64> = (1..=7).map(burnside_count).collect();
        assert_eq!(expected, vec![1, 2, 4, 11, 34, 156, 1044]);
        for n in 1..=7 {
            assert_eq!(enumerate_nonisomorphic(n).unwrap().len() as u64, expected[n - 1], "n={n}");
        }
    }

    #[test]
    fn representatives_are_pairwise_non_isomorphic_and_deterministic() {
        let a = enumerate_nonisomorphic(5).unwrap();
        let b = enumerate_nonisomorphic(5).unwrap();
        assert_eq!(a, b);
        let mut forms: Vec<_> = a.iter().map(canonical_form).collect();
        forms.dedup();
        assert_eq!(forms.len(), 34);
    }

    #[test]
    fn range_errors() {
        assert!(enumerate_nonisomorphic(0).is_err());
        assert!(enumerate_nonisomorphic(9).is_err());
    }

    #[test]
    fn tree_counts() {
        // OEIS A000055
        let counts: Vec<usize> = (1..=10).map(|n| enumerate_trees(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
        assert!(enumerate_trees(8).unwrap().iter().all(Graph::is_tree));
    }
}
