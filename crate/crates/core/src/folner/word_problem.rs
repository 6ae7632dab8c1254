//! Deciding `ν(n₁)ν(n₂) = ν(n₃)` in a c.e. group from a Følner oracle.
//!
//! For a 4-Følner set `F = {f₁,…,f_k}` (complement form) each `n_l` moves
//! more than `3k/4` points of `F` back into `F`. Those moves are read off
//! the enumeration of `MultT` as partial permutations `Σ_l` of `[k]`. Once all
//! three are that dense, some `i` has `n₂f_i = f_{j₁}`, `n₁f_{j₁} = f_{j₂}` and
//! `n₃f_i = f_{j₂}` exactly when `n₁n₂ = n₃`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::budget::{Budget, Outcome};
use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupCode, GroupOracle};

use super::{is_n_folner_complement, search_folner_with, FolnerTest};

/// The Følner parameter requested from the oracle.
pub const FOLNER_PARAMETER: u64 = 4;

/// Supplies, for a finite `D` and `n`, a set of pairwise distinct elements
/// that is `n`-Følner w.r.t. `D` in the strict complement form.
pub trait FolnerOracle {
    fn folner_set(&mut self, d: &FiniteSubset, n: u64) -> Result<FiniteSubset>;
}

/// Runs [`search_folner_with`] on a computable presentation with the same coding.
#[derive(Debug, Clone)]
pub struct SearchOracle {
    group: GroupOracle,
    budget: Budget,
}

impl SearchOracle {
    pub fn new(group: GroupOracle, budget: Budget) -> Result<Self> {
        group.require_computable()?;
        Ok(Self { group, budget })
    }
}

impl FolnerOracle for SearchOracle {
    fn folner_set(&mut self, d: &FiniteSubset, n: u64) -> Result<FiniteSubset> {
        match search_folner_with(&self.group, d, n, self.budget, FolnerTest::Complement)? {
            Outcome::Done(c) => Ok(c.f),
            Outcome::Unknown(e) => Err(Error::PreconditionFailed(format!(
                "Følner oracle found no set within {} steps",
                e.consumed
            ))),
        }
    }
}

/// Centred boxes `[-r, r]^d` in `zd`, smallest `r` that passes.
#[derive(Debug, Clone)]
pub struct BoxOracle {
    group: GroupOracle,
}

impl BoxOracle {
    pub fn new(group: GroupOracle) -> Result<Self> {
        group.require_computable()?;
        match group.spec().family() {
            crate::group::Family::Zd { .. } => Ok(Self { group }),
            _ => Err(Error::UnsupportedFamily(group.spec().to_string())),
        }
    }
}

impl FolnerOracle for BoxOracle {
    fn folner_set(&mut self, d: &FiniteSubset, n: u64) -> Result<FiniteSubset> {
        let crate::group::Family::Zd { dim } = self.group.spec().family() else {
            unreachable!()
        };
        for r in 0i64..=1 << 12 {
            let side: Vec<i64> = (-r..=r).collect();
            let mut points: Vec<Vec<i64>> = vec![vec![]];
            for _ in 0..dim {
                points = points
                    .into_iter()
                    .flat_map(|p| side.iter().map(move |&c| [p.as_slice(), &[c]].concat()))
                    .collect();
            }
            let f = FiniteSubset::from_raw(points.iter().map(|p| crate::group::zd::encode(p)));
            if is_n_folner_complement(&self.group, &f, d, n)? {
                return Ok(f);
            }
        }
        Err(Error::PreconditionFailed("no box is Følner for this D".into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultDecision {
    pub equal: bool,
    /// `|F|`
    pub k: usize,
    pub sigma_sizes: [usize; 3],
    /// `|Σ|`, the number of indices confirming the product.
    pub confirmations: usize,
    /// `MultT` triples consumed.
    pub consumed: u64,
}

/// Indices `i` with `(i,j₁) ∈ Σ₂`, `(j₁,j₂) ∈ Σ₁`, `(i,j₂) ∈ Σ₃`.
pub fn confirming_indices(sigma: &[BTreeMap<usize, usize>; 3]) -> Vec<usize> {
    sigma[1]
        .iter()
        .filter_map(|(&i, &j1)| {
            let j2 = *sigma[0].get(&j1)?;
            (sigma[2].get(&i) == Some(&j2)).then_some(i)
        })
        .collect()
}

/// Decides `ν(n₁)ν(n₂) = ν(n₃)`; one budget step per `MultT` triple.
pub fn decide_mult_from_folner(
    g: &GroupOracle,
    oracle: &mut dyn FolnerOracle,
    n1: GroupCode,
    n2: GroupCode,
    n3: GroupCode,
    budget: Budget,
) -> Result<Outcome<MultDecision>> {
    g.require_ce()?;
    let ns = [n1, n2, n3];
    let d = FiniteSubset::new(ns);
    let f = oracle.folner_set(&d, FOLNER_PARAMETER)?;
    if f.is_empty() {
        return Err(Error::EmptySet);
    }
    let k = f.len();
    let index: HashMap<GroupCode, usize> = f.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut sigma: [BTreeMap<usize, usize>; 3] = Default::default();
    let dense = |sigma: &[BTreeMap<usize, usize>; 3]| sigma.iter().all(|s| 4 * s.len() > 3 * k);
    let mut meter = budget.meter();
    let mut stream = g.multt_enum();
    while !dense(&sigma) {
        if let Err(e) = meter.tick() {
            return Ok(Outcome::Unknown(e));
        }
        let (a, b, c) = stream.next().expect("MultT enumeration is infinite");
        let (Some(&i), Some(&j)) = (index.get(&b), index.get(&c)) else {
            continue;
        };
        for (l, &nl) in ns.iter().enumerate() {
            if nl == a {
                sigma[l].insert(i, j);
            }
        }
    }
    let confirmations = confirming_indices(&sigma).len();
    Ok(Outcome::Done(MultDecision {
        equal: confirmations > 0,
        k,
        sigma_sizes: [sigma[0].len(), sigma[1].len(), sigma[2].len()],
        confirmations,
        consumed: meter.used(),
    }))
}
