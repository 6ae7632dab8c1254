//! Finite `(1,k)` harem matchings and induced balls.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::budget::{Exhausted, Meter};
use crate::group::{FiniteSubset, GroupCode};

use super::flow::FlowNetwork;
use super::graphs::BipartiteOracle;

/// A finite bipartite graph with a distinguished set of right boundary vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FiniteBipartite {
    pub a: FiniteSubset,
    pub b: FiniteSubset,
    /// Sorted `(a, b)` pairs.
    pub edges: Vec<(GroupCode, GroupCode)>,
    pub boundary_b: FiniteSubset,
}

impl FiniteBipartite {
    pub fn new(
        a: FiniteSubset,
        b: FiniteSubset,
        edges: impl IntoIterator<Item = (GroupCode, GroupCode)>,
        boundary_b: FiniteSubset,
    ) -> Self {
        let mut edges: Vec<_> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        Self { a, b, edges, boundary_b }
    }
}

/// Left vertex ↦ its `k` partners.
pub type Matching = BTreeMap<GroupCode, Vec<GroupCode>>;

/// Every `a` gets exactly `k` partners, every interior `b` exactly one and
/// every boundary `b` at most one. `None` if no such matching exists.
///
/// Solved as a feasible flow with lower bounds; edges enter the network in
/// code order, which fixes the answer.
pub fn finite_harem_match(fg: &FiniteBipartite, k: u64) -> Option<Matching> {
    let na = fg.a.len();
    let nb = fg.b.len();
    // nodes: a's, b's, s, t, S', T'
    let (s, t, ss, tt) = (na + nb, na + nb + 1, na + nb + 2, na + nb + 3);
    let mut net = FlowNetwork::new(na + nb + 4);
    let ai: HashMap<GroupCode, usize> = fg.a.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let bi: HashMap<GroupCode, usize> = fg.b.iter().enumerate().map(|(i, c)| (c, na + i)).collect();
    let k = k as i64;
    let mut required = 0i64;
    // s → a with lower = upper = k
    for i in 0..na {
        net.add_edge(ss, i, k);
        required += k;
    }
    if na > 0 {
        net.add_edge(s, tt, k * na as i64);
    }
    let mut edge_ids = Vec::with_capacity(fg.edges.len());
    for &(a, b) in &fg.edges {
        let (Some(&u), Some(&v)) = (ai.get(&a), bi.get(&b)) else { continue };
        edge_ids.push((a, b, net.add_edge(u, v, 1)));
    }
    // interior b → t with lower = upper = 1, boundary b → t with capacity 1
    let mut interior = 0i64;
    for (i, c) in fg.b.iter().enumerate() {
        if fg.boundary_b.contains(c) {
            net.add_edge(na + i, t, 1);
        } else {
            net.add_edge(na + i, tt, 1);
            interior += 1;
        }
    }
    if interior > 0 {
        net.add_edge(ss, t, interior);
        required += interior;
    }
    net.add_edge(t, s, i64::MAX / 4);
    if net.max_flow(ss, tt, required) < required {
        return None;
    }
    let mut m = Matching::new();
    for a in &fg.a {
        m.insert(a, Vec::new());
    }
    for (a, b, id) in edge_ids {
        if net.flow(id) > 0 {
            m.get_mut(&a).expect("left vertex").push(b);
        }
    }
    Some(m)
}

/// Breadth-first ball of radius `r` around `v`, skipping `removed` vertices.
/// Boundary right vertices are those at distance exactly `r`. One budget step
/// per neighbour returned by the oracle.
pub fn induced_ball(
    g: &dyn BipartiteOracle,
    v: GroupCode,
    r: u32,
    removed: &HashSet<GroupCode>,
    meter: &mut Meter,
) -> Result<FiniteBipartite, Exhausted> {
    let mut dist: HashMap<GroupCode, u32> = HashMap::from([(v, 0)]);
    let mut adjacency: HashMap<GroupCode, Vec<GroupCode>> = HashMap::new();
    let mut frontier = vec![v];
    for d in 0..r {
        let mut next = Vec::new();
        for &u in &frontier {
            let nb: Vec<GroupCode> = g.neighbors(u).into_iter().filter(|w| !removed.contains(w)).collect();
            meter.charge(nb.len().max(1) as u64)?;
            for &w in &nb {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    next.push(w);
                }
            }
            adjacency.insert(u, nb);
        }
        frontier = next;
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut boundary = Vec::new();
    for (&u, &d) in &dist {
        if g.is_left(u) {
            a.push(u);
        } else {
            b.push(u);
            if d == r {
                boundary.push(u);
            }
        }
    }
    // every edge inside the ball has an endpoint at distance < r, whose list we hold
    let mut edges = Vec::new();
    for (&u, nb) in &adjacency {
        for &w in nb {
            if dist.contains_key(&w) {
                if g.is_left(u) {
                    edges.push((u, w));
                } else {
                    edges.push((w, u));
                }
            }
        }
    }
    Ok(FiniteBipartite::new(
        FiniteSubset::new(a),
        FiniteSubset::new(b),
        edges,
        FiniteSubset::new(boundary),
    ))
}
