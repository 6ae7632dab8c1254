//! Effective paradoxical decompositions of non-amenable computable groups.
//!
//! The key `K = (K₀ ∪ {1})^{n₁}` expands every finite set threefold, so the
//! graph `Γ_K(G)` carries a computable perfect `(1,2)`-matching. Its two
//! partners `ψ₁(m) < ψ₂(m)` of each left `m` give the translations
//! `θ_i(m) = ψ_i(m)·m⁻¹ ∈ K` and the pieces `A_k = {m : θ₁(m) = k}`,
//! `B_k = {m : θ₂(m) = k}`.

mod fixture;
mod verify;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::budget::{Budget, Outcome};
use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupCode, GroupOracle};
use crate::harem::graphs::{left_tag, right_tag, untag};
use crate::harem::{CayleyBipartite, HallWitness, HaremMatchingState, RadiusPolicy};

pub use fixture::first_letter_prefix;
pub use verify::{check_prefix, ResolvedPrefix, Violation, ViolationKind};

/// `K = K₁^{n₁}` with `K₁ = K₀ ∪ {1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpandedKey {
    pub n1: u32,
    #[serde(rename = "K")]
    pub k: FiniteSubset,
    #[serde(rename = "K1")]
    pub k1: FiniteSubset,
    /// The guaranteed expansion `|KF| ≥ factor·|F|`.
    pub expansion_factor: u32,
}

/// Least `n₁` with `(1 + 1/n)^{n₁} ≥ 3`, i.e. `(n+1)^{n₁} ≥ 3·n^{n₁}`.
pub fn minimal_exponent(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let (num, den) = (BigUint::from(n + 1), BigUint::from(n));
    let three = BigUint::from(3u32);
    let (mut p, mut q) = (BigUint::from(1u32), BigUint::from(1u32));
    for e in 0u32.. {
        if p >= &three * &q {
            return Ok(e);
        }
        p *= &num;
        q *= &den;
    }
    unreachable!()
}

/// The set of products of exactly `n₁` factors from `K₁`, by canonical form.
pub fn expand_key(g: &GroupOracle, k0: &FiniteSubset, n: u64) -> Result<ExpandedKey> {
    g.require_computable()?;
    if k0.is_empty() {
        return Err(Error::EmptySet);
    }
    let n1 = minimal_exponent(n)?;
    let k1: BTreeSet<GroupCode> = k0.iter().map(|c| g.least_code(c)).chain([g.identity()]).collect();
    let mut k: BTreeSet<GroupCode> = BTreeSet::from([g.identity()]);
    for _ in 0..n1 {
        k = k
            .iter()
            .flat_map(|&x| k1.iter().map(move |&y| (x, y)))
            .map(|(x, y)| g.least_code(g.mult(x, y)))
            .collect();
    }
    Ok(ExpandedKey {
        n1,
        k: FiniteSubset::new(k),
        k1: FiniteSubset::new(k1),
        expansion_factor: 3,
    })
}

/// `K·F` as a set of canonical codes.
pub fn product_set(g: &GroupOracle, k: &FiniteSubset, f: &FiniteSubset) -> FiniteSubset {
    FiniteSubset::new(k.iter().flat_map(|x| f.iter().map(move |y| g.least_code(g.mult(x, y)))))
}

pub fn cayley_bipartite(g: &GroupOracle, k: &FiniteSubset) -> Result<CayleyBipartite> {
    CayleyBipartite::new(g, k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PieceSide {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Membership {
    In,
    Out,
    Unknown,
}

/// The four values attached to a resolved left code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Resolved {
    pub m: GroupCode,
    pub theta1: GroupCode,
    pub theta2: GroupCode,
    pub psi1: GroupCode,
    pub psi2: GroupCode,
}

/// The key, `Γ_K(G)` and its `(1,2)`-matching, resolved lazily.
pub struct ParadoxicalDecomposition {
    group: GroupOracle,
    key: ExpandedKey,
    state: HaremMatchingState<CayleyBipartite>,
}

/// `expand_key → cayley_bipartite → harem (k = 2, h(n) = 2n)`. The caller
/// asserts that `K₀` witnesses non-amenability with parameter `n`.
pub fn build_decomposition(g: &GroupOracle, k0: &FiniteSubset, n: u64) -> Result<ParadoxicalDecomposition> {
    build_decomposition_with_policy(g, k0, n, RadiusPolicy::Witness)
}

/// As [`build_decomposition`] with a different radius rule for the matching.
/// Anything but [`RadiusPolicy::Witness`] loses the correctness guarantee;
/// [`ParadoxicalDecomposition::verify_prefix`] still checks what it produces.
pub fn build_decomposition_with_policy(
    g: &GroupOracle,
    k0: &FiniteSubset,
    n: u64,
    policy: RadiusPolicy,
) -> Result<ParadoxicalDecomposition> {
    let key = expand_key(g, k0, n)?;
    let gamma = cayley_bipartite(g, &key.k)?;
    let state = HaremMatchingState::with_policy(gamma, HallWitness::affine(2, 0), 2, policy)?;
    Ok(ParadoxicalDecomposition {
        group: *g,
        key,
        state,
    })
}

impl ParadoxicalDecomposition {
    pub fn key(&self) -> &ExpandedKey {
        &self.key
    }

    pub fn group(&self) -> &GroupOracle {
        &self.group
    }

    pub fn state(&self) -> &HaremMatchingState<CayleyBipartite> {
        &self.state
    }

    /// The left partner of right `m`.
    pub fn phi(&mut self, m: GroupCode, budget: Budget) -> Result<Outcome<GroupCode>> {
        Ok(self.state.query(right_tag(m), budget)?.map(|p| untag(p[0])))
    }

    /// The two right partners of left `m`, smaller code first.
    pub fn psi(&mut self, m: GroupCode, budget: Budget) -> Result<Outcome<(GroupCode, GroupCode)>> {
        Ok(self.state.query(left_tag(m), budget)?.map(|p| {
            let (x, y) = (untag(p[0]), untag(p[1]));
            (x.min(y), x.max(y))
        }))
    }

    pub fn resolve(&mut self, m: GroupCode, budget: Budget) -> Result<Outcome<Resolved>> {
        let g = self.group;
        Ok(self.psi(m, budget)?.map(|(psi1, psi2)| {
            let mi = g.inv(m);
            Resolved {
                m,
                theta1: g.mult(psi1, mi),
                theta2: g.mult(psi2, mi),
                psi1,
                psi2,
            }
        }))
    }

    pub fn theta(&mut self, m: GroupCode, budget: Budget) -> Result<Outcome<(GroupCode, GroupCode)>> {
        Ok(self.resolve(m, budget)?.map(|r| (r.theta1, r.theta2)))
    }

    /// Whether `m ∈ A_k` (side A) or `m ∈ B_k` (side B).
    pub fn membership(&mut self, k: GroupCode, m: GroupCode, side: PieceSide, budget: Budget) -> Result<Membership> {
        if !self.key.k.contains(self.group.least_code(k)) {
            return Err(Error::KeyNotInK(k));
        }
        Ok(match self.theta(m, budget)? {
            Outcome::Unknown(_) => Membership::Unknown,
            Outcome::Done((t1, t2)) => {
                let t = if side == PieceSide::A { t1 } else { t2 };
                if self.group.same_element(t, k) {
                    Membership::In
                } else {
                    Membership::Out
                }
            }
        })
    }

    /// Resolves left and right codes `0..count` (sharing one budget) and
    /// checks the finite shadow of the decomposition.
    pub fn verify_prefix(&mut self, count: u64, budget: Budget) -> Result<PrefixReport> {
        let mut meter = budget.meter();
        let mut prefix = ResolvedPrefix::default();
        let mut unresolved = Vec::new();
        for m in (0..count).map(GroupCode) {
            for left in [true, false] {
                let v = if left { left_tag(m) } else { right_tag(m) };
                if meter.remaining() == 0 && self.state.answer(v).is_none() {
                    unresolved.push(Unresolved { code: m, left });
                    continue;
                }
                if let Outcome::Unknown(_) = self.state.query_metered(v, &mut meter)? {
                    unresolved.push(Unresolved { code: m, left });
                }
            }
        }
        let g = self.group;
        for (&a, bs) in self.state.left_matches() {
            let (x, y) = (untag(bs[0]), untag(bs[1]));
            prefix.insert_left(&g, untag(a), x.min(y), x.max(y));
        }
        for (&b, &a) in self.state.right_matches() {
            prefix.right.insert(untag(b), untag(a));
        }
        let violations = check_prefix(&g, &self.key.k, &prefix);
        let resolved = prefix.left.values().filter(|r| r.m.0 < count).copied().collect();
        Ok(PrefixReport {
            n1: self.key.n1,
            k: self.key.k.clone(),
            resolved,
            unresolved,
            violations,
            consumed: meter.used(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Unresolved {
    pub code: GroupCode,
    pub left: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixReport {
    pub n1: u32,
    #[serde(rename = "K")]
    pub k: FiniteSubset,
    pub resolved: Vec<Resolved>,
    pub unresolved: Vec<Unresolved>,
    pub violations: Vec<Violation>,
    /// Budget steps spent by this call.
    pub consumed: u64,
}

impl PrefixReport {
    /// Every requested code resolved and no violation.
    pub fn complete_and_clean(&self) -> bool {
        self.unresolved.is_empty() && self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free2() -> GroupOracle {
        GroupOracle::from_spec("free:2").unwrap()
    }

    #[test]
    fn exponents() {
        assert_eq!(minimal_exponent(1).unwrap(), 2);
        assert_eq!(minimal_exponent(2).unwrap(), 3);
        assert_eq!(minimal_exponent(3).unwrap(), 4);
        // (1 + 1/n)^{n₁} ≥ 3 first happens near n·ln 3
        assert_eq!(minimal_exponent(100).unwrap(), 111);
        assert!(minimal_exponent(0).is_err());
    }

    #[test]
    fn key_of_free_generators() {
        let g = free2();
        let k0 = FiniteSubset::new(g.parse_elements("a,a^-1,b,b^-1").unwrap());
        let key = expand_key(&g, &k0, 1).unwrap();
        assert_eq!(key.n1, 2);
        assert_eq!(key.k.len(), 17);
        assert_eq!(key.k, FiniteSubset::from_raw(0..17));
        assert_eq!(key.k1.len(), 5);
    }

    #[test]
    fn first_letter_fixture_is_clean() {
        let g = free2();
        let key = FiniteSubset::new(g.parse_elements("1,a^-1,b^-1").unwrap());
        let p = first_letter_prefix(&g, 400).unwrap();
        assert_eq!(check_prefix(&g, &key, &p), vec![]);
        // a⁻¹ has code 2, so ψ(ε) = {ε, a⁻¹}
        let r0 = p.left[&GroupCode(0)];
        assert_eq!((r0.psi1, r0.psi2), (GroupCode(0), GroupCode(2)));
    }

    #[test]
    fn corrupted_fixture_is_caught() {
        let g = free2();
        let key = FiniteSubset::new(g.parse_elements("1,a^-1,b^-1").unwrap());
        let mut p = first_letter_prefix(&g, 50).unwrap();
        let (x, y) = (p.left[&GroupCode(5)], p.left[&GroupCode(6)]);
        p.insert_left(&g, GroupCode(5), y.psi1, y.psi2);
        p.insert_left(&g, GroupCode(6), x.psi1, x.psi2);
        let v = check_prefix(&g, &key, &p);
        assert!(v.iter().any(|v| v.kind == verify::ViolationKind::PhiMismatch));
        assert!(v.iter().any(|v| v.kind == verify::ViolationKind::ThetaOutsideKey));

        let mut p = first_letter_prefix(&g, 50).unwrap();
        let x = p.left[&GroupCode(7)];
        p.insert_left(&g, GroupCode(8), x.psi1, x.psi2);
        assert!(check_prefix(&g, &key, &p)
            .iter()
            .any(|v| v.kind == verify::ViolationKind::PsiCollision));
    }

    #[test]
    fn fixture_rejects_other_groups() {
        let g = GroupOracle::from_spec("zd:2").unwrap();
        assert!(matches!(first_letter_prefix(&g, 3), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn product_set_expands_threefold() {
        let g = free2();
        let k0 = FiniteSubset::new(g.parse_elements("a,a^-1,b,b^-1").unwrap());
        let key = expand_key(&g, &k0, 1).unwrap();
        let f = FiniteSubset::from_raw([0, 1, 2, 3, 4]);
        assert_eq!(product_set(&g, &key.k, &f).len(), g.ball(&k0, 3).unwrap().len());
        assert!(product_set(&g, &key.k, &f).len() >= 3 * f.len());
    }

    #[test]
    fn membership_needs_key_element() {
        let g = free2();
        let k0 = FiniteSubset::new(g.parse_elements("a,a^-1,b,b^-1").unwrap());
        let mut d = build_decomposition(&g, &k0, 1).unwrap();
        assert_eq!(
            d.membership(GroupCode(500), GroupCode(0), PieceSide::A, Budget::default()),
            Err(Error::KeyNotInK(GroupCode(500)))
        );
        // the first step already needs a radius-9 ball: far beyond a small budget
        assert_eq!(
            d.membership(GroupCode(0), GroupCode(0), PieceSide::A, Budget::new(1000).unwrap()).unwrap(),
            Membership::Unknown
        );
    }
}
