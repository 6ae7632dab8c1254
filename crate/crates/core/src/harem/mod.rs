//! Effective Hall's harem: finite `(1,k)` matchings, the witness function
//! and the back-and-forth perfect matching on infinite bipartite oracles.

mod finite;
mod flow;
pub mod graphs;
mod state;
mod witness;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupCode};
use crate::rational::{self, Q};

pub use finite::{finite_harem_match, induced_ball, FiniteBipartite, Matching};
pub use flow::FlowNetwork;
pub use graphs::{BipartiteOracle, CayleyBipartite, ExplicitGraph, PathGraph};
pub use state::{HaremMatchingState, RadiusPolicy, Side, StepRecord};
pub use witness::HallWitness;

/// A failed instance of the witness inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpotViolation {
    pub sample: FiniteSubset,
    pub n: u64,
    pub h_n: u64,
    #[serde(serialize_with = "q_text")]
    pub surplus: Q,
}

fn q_text<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::to_text(q))
}

/// Checks `h(n) ≤ |X| ⇒ n ≤ |N(X)| − k|X|` for left samples and
/// `h(n) ≤ |Y| ⇒ n ≤ |N(Y)| − |Y|/k` for right samples, for every `n` with
/// `h(n) ≤ |X|` (stopping at the first failure per sample).
pub fn cehhc_spot_check(
    g: &dyn BipartiteOracle,
    h: &HallWitness,
    k: u64,
    samples: &[FiniteSubset],
) -> Result<Vec<SpotViolation>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut out = Vec::new();
    for x in samples {
        let Some(first) = x.iter().next() else { continue };
        let left = g.is_left(first);
        if x.iter().any(|v| g.is_left(v) != left) {
            return Err(Error::InvalidArgument("sample spans both sides".into()));
        }
        let nx: FiniteSubset = x.iter().flat_map(|v| g.neighbors(v)).collect();
        let size = x.len() as i128;
        let surplus = if left {
            rational::q_int(nx.len() as i128 - k as i128 * size)
        } else {
            rational::q_int(nx.len() as i128) - rational::q(size, k as i128)
        };
        for n in 0u64.. {
            let h_n = h.eval(n);
            if h_n > x.len() as u64 {
                break;
            }
            if rational::q_int(n as i128) > surplus {
                out.push(SpotViolation {
                    sample: x.clone(),
                    n,
                    h_n,
                    surplus,
                });
                break;
            }
        }
    }
    Ok(out)
}

/// The two endpoints of an edge `(left, right)`, if `u ~ v` is an edge.
pub fn oriented_edge(g: &dyn BipartiteOracle, u: GroupCode, v: GroupCode) -> Option<(GroupCode, GroupCode)> {
    if !g.neighbors(u).contains(&v) {
        return None;
    }
    Some(if g.is_left(u) { (u, v) } else { (v, u) })
}
