use std::collections::BTreeMap;

use serde::Serialize;

use crate::group::{FiniteSubset, GroupCode, GroupOracle};

use super::Resolved;

/// A finite piece of a decomposition: `ψ` on some left codes, `φ` on some
/// right codes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResolvedPrefix {
    pub left: BTreeMap<GroupCode, Resolved>,
    pub right: BTreeMap<GroupCode, GroupCode>,
}

impl ResolvedPrefix {
    pub fn insert_left(&mut self, g: &GroupOracle, m: GroupCode, psi1: GroupCode, psi2: GroupCode) {
        let mi = g.inv(m);
        self.left.insert(
            m,
            Resolved {
                m,
                theta1: g.mult(psi1, mi),
                theta2: g.mult(psi2, mi),
                psi1,
                psi2,
            },
        );
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    ThetaOutsideKey,
    ThetaMismatch,
    PsiOrder,
    PsiCollision,
    PhiMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub code: GroupCode,
    pub detail: String,
}

fn violation(kind: ViolationKind, code: GroupCode, detail: String) -> Violation {
    Violation { kind, code, detail }
}

/// Checks of a resolved prefix, in order: `θᵢ(m) ∈ K`, `θᵢ(m)·m = ψᵢ(m)`,
/// `ψ₁(m) < ψ₂(m)`, all `ψ` values pairwise distinct as elements, and
/// `φ` consistent with `ψ` wherever both sides are known.
pub fn check_prefix(g: &GroupOracle, key: &FiniteSubset, prefix: &ResolvedPrefix) -> Vec<Violation> {
    use ViolationKind::*;
    let mut out = Vec::new();
    let mut hit: BTreeMap<GroupCode, (GroupCode, u8)> = BTreeMap::new();
    for (&m, r) in &prefix.left {
        for (i, theta, psi) in [(1u8, r.theta1, r.psi1), (2, r.theta2, r.psi2)] {
            if !key.contains(g.least_code(theta)) {
                out.push(violation(ThetaOutsideKey, m, format!("theta{i}={theta}")));
            }
            if !g.same_element(g.mult(theta, m), psi) {
                out.push(violation(ThetaMismatch, m, format!("theta{i}*m != psi{i}={psi}")));
            }
            if let Some((other, j)) = hit.insert(g.least_code(psi), (m, i)) {
                out.push(violation(PsiCollision, m, format!("psi{i}={psi} also psi{j}({other})")));
            }
            if let Some(&back) = prefix.right.get(&psi) {
                if back != m {
                    out.push(violation(PhiMismatch, m, format!("phi(psi{i}={psi})={back}")));
                }
            }
        }
        if r.psi1 >= r.psi2 {
            out.push(violation(PsiOrder, m, format!("psi1={} psi2={}", r.psi1, r.psi2)));
        }
    }
    for (&b, &a) in &prefix.right {
        if let Some(r) = prefix.left.get(&a) {
            if r.psi1 != b && r.psi2 != b {
                out.push(violation(PhiMismatch, b, format!("phi={a} but psi({a})=({},{})", r.psi1, r.psi2)));
            }
        }
    }
    out
}
