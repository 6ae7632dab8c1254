//! Stallings folding for finitely generated subgroups of free groups.

use std::collections::BTreeMap;

use crate::group::free::{decode, inverse_letter, reduce, Letter};

/// Folded core graph: deterministic labelled graph with base vertex 0.
/// Each edge is stored in both directions, the reverse one with the inverse letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldedGraph {
    out: Vec<BTreeMap<Letter, usize>>,
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

impl FoldedGraph {
    pub fn new(rank: u32, generators: &[u64]) -> Self {
        let mut edges: Vec<(usize, Letter, usize)> = Vec::new();
        let mut vertices = 1usize;
        for &code in generators {
            let word = decode(rank, code);
            if word.is_empty() {
                continue;
            }
            let mut at = 0;
            for (i, &l) in word.iter().enumerate() {
                let to = if i + 1 == word.len() {
                    0
                } else {
                    vertices += 1;
                    vertices - 1
                };
                edges.push((at, l, to));
                at = to;
            }
        }
        let mut parent: Vec<usize> = (0..vertices).collect();
        loop {
            let mut out: Vec<BTreeMap<Letter, usize>> = vec![BTreeMap::new(); vertices];
            let mut merged = false;
            for &(u, l, v) in &edges {
                let (u, v) = (find(&mut parent, u), find(&mut parent, v));
                for (a, letter, b) in [(u, l, v), (v, inverse_letter(l), u)] {
                    match out[a].get(&letter).copied() {
                        Some(c) if find(&mut parent, c) != find(&mut parent, b) => {
                            let (rc, rb) = (find(&mut parent, c), find(&mut parent, b));
                            // keep the base vertex as its own representative
                            let (keep, drop) = if rb == 0 || (rc != 0 && rb < rc) { (rb, rc) } else { (rc, rb) };
                            parent[drop] = keep;
                            merged = true;
                        }
                        Some(_) => {}
                        None => {
                            out[a].insert(letter, b);
                        }
                    }
                }
            }
            if !merged {
                let mut index = BTreeMap::new();
                for v in 0..vertices {
                    let r = find(&mut parent, v);
                    let next = index.len();
                    index.entry(r).or_insert(next);
                }
                let mut folded = vec![BTreeMap::new(); index.len()];
                for &(u, l, v) in &edges {
                    let (u, v) = (index[&find(&mut parent, u)], index[&find(&mut parent, v)]);
                    folded[u].insert(l, v);
                    folded[v].insert(inverse_letter(l), u);
                }
                return Self { out: folded };
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    /// Whether the reduced form of `word` reads a closed path at the base.
    pub fn accepts(&self, word: &[Letter]) -> bool {
        let mut w = word.to_vec();
        reduce(&mut w);
        let mut at = 0;
        for l in w {
            match self.out[at].get(&l) {
                Some(&next) => at = next,
                None => return false,
            }
        }
        at == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::free::encode;

    #[test]
    fn single_loop() {
        let a = encode(2, &[0]);
        let g = FoldedGraph::new(2, &[a]);
        assert_eq!(g.vertex_count(), 1);
        assert!(g.accepts(&[0, 0, 0]));
        assert!(g.accepts(&[1]));
        assert!(!g.accepts(&[2]));
    }

    #[test]
    fn folding_merges_common_prefixes() {
        // ⟨ab, ab⁻¹⟩ folds to a two-vertex graph and contains b²
        let g = FoldedGraph::new(2, &[encode(2, &[0, 2]), encode(2, &[0, 3])]);
        assert_eq!(g.vertex_count(), 2);
        assert!(g.accepts(&[2, 2]));
        assert!(g.accepts(&[0, 2, 2, 1]));
        assert!(!g.accepts(&[0, 2, 1]));
        assert!(!g.accepts(&[0]));
        assert!(!g.accepts(&[2]));
    }

    #[test]
    fn conjugate_generator() {
        // ⟨b a b⁻¹⟩ has a hair
        let g = FoldedGraph::new(2, &[encode(2, &[2, 0, 3])]);
        assert_eq!(g.vertex_count(), 2);
        assert!(g.accepts(&[2, 0, 0, 3]));
        assert!(!g.accepts(&[0]));
    }
}
