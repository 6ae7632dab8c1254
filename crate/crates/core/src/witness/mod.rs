//! Witnesses of paradoxicality: the commutation decider for free and free
//! abelian groups, bounded refutation by Følner sets, and restriction of
//! Følner sets to finitely generated subgroups.

mod lattice;
mod stallings;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::budget::{Budget, Exhausted, Meter};
use crate::error::{Error, Result};
use crate::folner::{is_n_folner, FolnerCertificate};
use crate::group::{free, zd, Family, FiniteSubset, GroupCode, GroupOracle};

pub use lattice::Lattice;
pub use stallings::FoldedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Witness,
    NotWitness,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    Pair([GroupCode; 2]),
    Certificate(FolnerCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessVerdict {
    pub verdict: Verdict,
    pub evidence: Option<Evidence>,
    pub rationale: String,
}

/// In a free group two elements either commute or generate a free subgroup
/// of rank two, so `K` witnesses paradoxicality exactly when some pair of
/// its elements fails to commute. Abelian and amenable built-in families
/// answer `NOT_WITNESS` outright.
pub fn decide_witness_commutation(g: &GroupOracle, k: &FiniteSubset) -> Result<WitnessVerdict> {
    if g.require_computable().is_err() {
        return Err(Error::UnsupportedFamily(format!("{} (c.e. presentation)", g.spec())));
    }
    let not = |rationale: &str| WitnessVerdict {
        verdict: Verdict::NotWitness,
        evidence: None,
        rationale: rationale.into(),
    };
    match g.spec().family() {
        Family::Free { .. } => {
            let elems: Vec<GroupCode> = k.iter().collect();
            for (i, &x) in elems.iter().enumerate() {
                for &y in &elems[i + 1..] {
                    if g.mult(x, y) != g.mult(y, x) {
                        return Ok(WitnessVerdict {
                            verdict: Verdict::Witness,
                            evidence: Some(Evidence::Pair([x, y])),
                            rationale: "non-commuting pair generates a free subgroup of rank 2".into(),
                        });
                    }
                }
            }
            Ok(not("all pairs commute, so the generated subgroup is cyclic"))
        }
        Family::Zd { .. } => Ok(not("abelian: every pair commutes")),
        Family::Cyclic { .. } | Family::Lamplighter => Ok(not("amenable family")),
        Family::RedundantZ => Err(Error::UnsupportedFamily(g.spec().to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    /// An `n`-Følner set w.r.t. `K`.
    Certificate(FolnerCertificate),
    /// The whole (finite) search space holds no such set.
    NoneFound,
    Unknown(Exhausted),
}

fn refuting(g: &GroupOracle, f: FiniteSubset, k: &FiniteSubset, n: u64, meter: &mut Meter) -> std::result::Result<Option<FolnerCertificate>, Exhausted> {
    meter.charge((f.len() * k.len().max(1)) as u64)?;
    let check = is_n_folner(g, &f, k, n).expect("non-empty set in a computable group");
    Ok(check.holds.then(|| FolnerCertificate {
        spec: g.spec(),
        d: k.clone(),
        n,
        f,
        defects: check.defects,
    }))
}

fn check_refute_args(g: &GroupOracle, n: u64, size_bound: usize) -> Result<()> {
    g.require_computable()?;
    if n == 0 || size_bound == 0 {
        return Err(Error::InvalidArgument("n and size_bound must be at least 1".into()));
    }
    Ok(())
}

/// Looks for `F` with `|F| ≤ size_bound` and `|F∖kF|/|F| ≤ 1/n` for every
/// `k ∈ K`, in the candidate order of the Følner search (balls over `K`,
/// then sets by largest code). Ends with `NoneFound` only in finite groups.
pub fn refute_witness_bounded(g: &GroupOracle, k: &FiniteSubset, n: u64, size_bound: usize, budget: Budget) -> Result<Refutation> {
    check_refute_args(g, n, size_bound)?;
    let mut meter = budget.meter();
    let mut last_ball: Option<FiniteSubset> = None;
    let order = g.order();
    for s in 0u64.. {
        if order.is_some_and(|m| s >= m) {
            return Ok(Refutation::NoneFound);
        }
        let ball = g.ball_unchecked(k, s.min(u64::from(u32::MAX)) as u32);
        if let Err(e) = meter.charge(ball.len() as u64) {
            return Ok(Refutation::Unknown(e));
        }
        if ball.len() <= size_bound && last_ball.as_ref() != Some(&ball) {
            match refuting(g, ball.clone(), k, n, &mut meter) {
                Err(e) => return Ok(Refutation::Unknown(e)),
                Ok(Some(c)) => return Ok(Refutation::Certificate(c)),
                Ok(None) => {}
            }
        }
        last_ball = Some(ball);
        // sets whose largest code is s, in mask order of the smaller codes
        let mut found = None;
        let walk = for_each_subset_below(s, size_bound - 1, &mut meter, &mut |rest, meter| {
            let f = FiniteSubset::new(rest.iter().copied().chain([GroupCode(s)]));
            found = refuting(g, f, k, n, meter)?;
            Ok(found.is_some())
        });
        if let Some(c) = found {
            return Ok(Refutation::Certificate(c));
        }
        if let Err(e) = walk {
            return Ok(Refutation::Unknown(e));
        }
    }
    unreachable!()
}

type Visit<'a> = dyn FnMut(&[GroupCode], &mut Meter) -> std::result::Result<bool, Exhausted> + 'a;

/// Visits the subsets of `{0..s-1}` with at most `max_size` elements in
/// increasing bitmask order, charging one step per subset. Stops once
/// `visit` returns true.
fn for_each_subset_below(s: u64, max_size: usize, meter: &mut Meter, visit: &mut Visit) -> std::result::Result<(), Exhausted> {
    // ordering by mask means: subsets avoiding the top bit first, then those with it
    fn rec(top: u64, max_size: usize, chosen: &mut Vec<GroupCode>, meter: &mut Meter, visit: &mut Visit) -> std::result::Result<bool, Exhausted> {
        if top == 0 {
            meter.tick()?;
            let mut f = chosen.clone();
            f.reverse();
            return visit(&f, meter);
        }
        if rec(top - 1, max_size, chosen, meter, visit)? {
            return Ok(true);
        }
        if max_size == 0 {
            return Ok(false);
        }
        chosen.push(GroupCode(top - 1));
        let stop = rec(top - 1, max_size - 1, chosen, meter, visit);
        chosen.pop();
        stop
    }
    rec(s, max_size, &mut Vec::new(), meter, visit).map(|_| ())
}

/// Exhaustive variant over a finite `domain`: every subset of size
/// `1..=size_bound`, by size and then lexicographically.
pub fn refute_witness_in_domain(
    g: &GroupOracle,
    k: &FiniteSubset,
    n: u64,
    size_bound: usize,
    domain: &FiniteSubset,
    budget: Budget,
) -> Result<Refutation> {
    check_refute_args(g, n, size_bound)?;
    let mut meter = budget.meter();
    let items = domain.as_slice();
    for size in 1..=size_bound.min(items.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let f = FiniteSubset::new(idx.iter().map(|&i| items[i]));
            match refuting(g, f, k, n, &mut meter) {
                Err(e) => return Ok(Refutation::Unknown(e)),
                Ok(Some(c)) => return Ok(Refutation::Certificate(c)),
                Ok(None) => {}
            }
            let Some(i) = (0..size).rev().find(|&i| idx[i] < items.len() - size + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(Refutation::NoneFound)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MembershipMethod {
    Stallings,
    Hnf,
}

#[derive(Debug, Clone)]
enum Decider {
    Stallings { rank: u32, graph: FoldedGraph },
    Lattice { dim: u32, lattice: Lattice },
}

/// Membership in `⟨K⟩` for free and free abelian groups.
#[derive(Debug, Clone)]
pub struct SubgroupOracle {
    generators: FiniteSubset,
    decider: Decider,
}

pub fn subgroup_membership(g: &GroupOracle, k: &FiniteSubset) -> Result<SubgroupOracle> {
    g.require_computable()?;
    let codes: Vec<u64> = k.iter().map(|c| c.0).collect();
    let decider = match g.spec().family() {
        Family::Free { rank } => Decider::Stallings {
            rank,
            graph: FoldedGraph::new(rank, &codes),
        },
        Family::Zd { dim } => {
            let vectors: Vec<Vec<i64>> = codes.iter().map(|&c| zd::decode(dim, c)).collect();
            Decider::Lattice {
                dim,
                lattice: Lattice::new(dim as usize, &vectors)?,
            }
        }
        _ => return Err(Error::UnsupportedFamily(g.spec().to_string())),
    };
    Ok(SubgroupOracle {
        generators: k.clone(),
        decider,
    })
}

impl SubgroupOracle {
    pub fn generators(&self) -> &FiniteSubset {
        &self.generators
    }

    pub fn method(&self) -> MembershipMethod {
        match self.decider {
            Decider::Stallings { .. } => MembershipMethod::Stallings,
            Decider::Lattice { .. } => MembershipMethod::Hnf,
        }
    }

    pub fn contains(&self, x: GroupCode) -> Result<bool> {
        match &self.decider {
            Decider::Stallings { rank, graph } => Ok(graph.accepts(&free::decode(*rank, x.0))),
            Decider::Lattice { dim, lattice } => lattice.contains(&zd::decode(*dim, x.0)),
        }
    }

    /// Splits `f` into right cosets `⟨K⟩t`, each keyed by its least-code
    /// element `t`, in increasing order of `t`.
    pub fn coset_probe(&self, g: &GroupOracle, f: &FiniteSubset) -> Result<BTreeMap<GroupCode, Vec<GroupCode>>> {
        let mut cosets: BTreeMap<GroupCode, Vec<GroupCode>> = BTreeMap::new();
        'next: for x in f.iter() {
            for (&t, members) in cosets.iter_mut() {
                if self.contains(g.mult(x, g.inv(t)))? {
                    members.push(x);
                    continue 'next;
                }
            }
            cosets.insert(x, vec![x]);
        }
        Ok(cosets)
    }
}

/// From an `n|K|`-Følner set `F_m`, the first coset slice `F_m t⁻¹ ∩ ⟨K⟩`
/// (by representative code) that is `n`-Følner w.r.t. `K`.
pub fn restrict_folner_to_subgroup(g: &GroupOracle, k: &FiniteSubset, n: u64, f_m: &FiniteSubset) -> Result<FiniteSubset> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if f_m.is_empty() {
        return Err(Error::EmptySet);
    }
    let sub = subgroup_membership(g, k)?;
    for (t, members) in sub.coset_probe(g, f_m)? {
        let ti = g.inv(t);
        let slice = FiniteSubset::new(members.into_iter().map(|x| g.mult(x, ti)));
        if is_n_folner(g, &slice, k, n)?.holds {
            return Ok(slice);
        }
    }
    Err(Error::PreconditionFailed(format!(
        "no coset slice is {n}-Folner; the input is not {}-Folner",
        n.saturating_mul(k.len() as u64)
    )))
}
