//! Bipartite graph oracles.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupCode, GroupOracle};

/// A locally finite bipartite graph on codes, given by oracles.
///
/// Adjacency must be symmetric and cross sides; `neighbors` returns a sorted,
/// duplicate-free list.
pub trait BipartiteOracle {
    fn is_left(&self, v: GroupCode) -> bool;

    fn neighbors(&self, v: GroupCode) -> Vec<GroupCode>;

    fn degree(&self, v: GroupCode) -> usize {
        self.neighbors(v).len()
    }

    /// Least vertex code `≥ from` on the requested side, if any.
    fn next_on_side(&self, left: bool, from: u64) -> Option<GroupCode>;
}

impl<T: BipartiteOracle + ?Sized> BipartiteOracle for &T {
    fn is_left(&self, v: GroupCode) -> bool {
        (**self).is_left(v)
    }

    fn neighbors(&self, v: GroupCode) -> Vec<GroupCode> {
        (**self).neighbors(v)
    }

    fn degree(&self, v: GroupCode) -> usize {
        (**self).degree(v)
    }

    fn next_on_side(&self, left: bool, from: u64) -> Option<GroupCode> {
        (**self).next_on_side(left, from)
    }
}

/// `Γ_K(G)`: left copy on even codes `2g`, right copy on odd codes `2g+1`,
/// with `g ~ h` whenever `h ∈ Kg`.
#[derive(Debug, Clone)]
pub struct CayleyBipartite {
    group: GroupOracle,
    key: Vec<GroupCode>,
    key_inv: Vec<GroupCode>,
}

pub fn left_tag(g: GroupCode) -> GroupCode {
    GroupCode(2 * g.0)
}

pub fn right_tag(g: GroupCode) -> GroupCode {
    GroupCode(2 * g.0 + 1)
}

/// Removes the side tag.
pub fn untag(v: GroupCode) -> GroupCode {
    GroupCode(v.0 / 2)
}

impl CayleyBipartite {
    pub fn new(group: &GroupOracle, key: &FiniteSubset) -> Result<Self> {
        group.require_computable()?;
        if key.is_empty() {
            return Err(Error::EmptySet);
        }
        let key: Vec<GroupCode> = key
            .iter()
            .map(|k| group.least_code(k))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let key_inv = key.iter().map(|&k| group.inv(k)).collect();
        Ok(Self {
            group: *group,
            key,
            key_inv,
        })
    }

    pub fn group(&self) -> &GroupOracle {
        &self.group
    }

    pub fn key(&self) -> FiniteSubset {
        FiniteSubset::new(self.key.iter().copied())
    }
}

impl BipartiteOracle for CayleyBipartite {
    fn is_left(&self, v: GroupCode) -> bool {
        v.0.is_multiple_of(2)
    }

    fn neighbors(&self, v: GroupCode) -> Vec<GroupCode> {
        let x = untag(v);
        let mut out: Vec<GroupCode> = if self.is_left(v) {
            self.key.iter().map(|&k| right_tag(self.group.mult(k, x))).collect()
        } else {
            self.key_inv.iter().map(|&k| left_tag(self.group.mult(k, x))).collect()
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    fn next_on_side(&self, left: bool, from: u64) -> Option<GroupCode> {
        let want = u64::from(!left);
        let c = if from % 2 == want { from } else { from + 1 };
        if self.group.order().is_some_and(|m| c / 2 >= m) {
            return None;
        }
        Some(GroupCode(c))
    }
}

/// The path `… − (−1) − 0 − 1 − 2 − …` over ℤ, vertex `i` coded `zigzag(i)`;
/// even integers are left. Every finite set has neighbourhood surplus at most 2.
#[derive(Debug, Clone, Copy, Default)]
pub struct PathGraph;

impl PathGraph {
    pub fn vertex(i: i64) -> GroupCode {
        GroupCode(crate::group::zd::encode(&[i]))
    }

    pub fn position(v: GroupCode) -> i64 {
        crate::group::zd::decode(1, v.0)[0]
    }
}

impl BipartiteOracle for PathGraph {
    fn is_left(&self, v: GroupCode) -> bool {
        Self::position(v) % 2 == 0
    }

    fn neighbors(&self, v: GroupCode) -> Vec<GroupCode> {
        let i = Self::position(v);
        let mut out = vec![Self::vertex(i - 1), Self::vertex(i + 1)];
        out.sort_unstable();
        out
    }

    fn next_on_side(&self, left: bool, from: u64) -> Option<GroupCode> {
        (from..).map(GroupCode).find(|&v| self.is_left(v) == left)
    }
}

/// A finite bipartite graph with explicit adjacency.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExplicitGraph {
    left: BTreeSet<GroupCode>,
    right: BTreeSet<GroupCode>,
    adj: BTreeMap<GroupCode, BTreeSet<GroupCode>>,
}

impl ExplicitGraph {
    pub fn new(
        left: impl IntoIterator<Item = GroupCode>,
        right: impl IntoIterator<Item = GroupCode>,
        edges: impl IntoIterator<Item = (GroupCode, GroupCode)>,
    ) -> Result<Self> {
        let left: BTreeSet<GroupCode> = left.into_iter().collect();
        let right: BTreeSet<GroupCode> = right.into_iter().collect();
        if left.intersection(&right).next().is_some() {
            return Err(Error::InvalidArgument("sides overlap".into()));
        }
        let mut adj: BTreeMap<GroupCode, BTreeSet<GroupCode>> = BTreeMap::new();
        for v in left.iter().chain(&right) {
            adj.insert(*v, BTreeSet::new());
        }
        for (a, b) in edges {
            if !left.contains(&a) || !right.contains(&b) {
                return Err(Error::InvalidArgument(format!("edge ({a},{b}) is not left-right")));
            }
            adj.get_mut(&a).expect("vertex").insert(b);
            adj.get_mut(&b).expect("vertex").insert(a);
        }
        Ok(Self { left, right, adj })
    }
}

impl BipartiteOracle for ExplicitGraph {
    fn is_left(&self, v: GroupCode) -> bool {
        self.left.contains(&v)
    }

    fn neighbors(&self, v: GroupCode) -> Vec<GroupCode> {
        self.adj.get(&v).map(|s| s.iter().copied().collect()).unwrap_or_default()
    }

    fn next_on_side(&self, left: bool, from: u64) -> Option<GroupCode> {
        let side = if left { &self.left } else { &self.right };
        side.range(GroupCode(from)..).next().copied()
    }
}
