//! Følner sets: verification, search, the Følner function, Reiter
//! functions and the word problem from a Følner oracle.

mod function;
pub mod reiter;
pub mod word_problem;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Meter, Outcome};
use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupCode, GroupOracle, GroupSpec};
use crate::rational::{self, Q};

pub use function::{folner_function, FolnerValue};

/// A finite set `F` with its exact defects `|F∖xF|/|F|` for `x ∈ D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerCertificate {
    pub spec: GroupSpec,
    #[serde(rename = "D")]
    pub d: FiniteSubset,
    pub n: u64,
    #[serde(rename = "F")]
    pub f: FiniteSubset,
    #[serde(with = "rational::text_map")]
    pub defects: BTreeMap<GroupCode, Q>,
}

impl FolnerCertificate {
    pub fn max_defect(&self) -> Q {
        self.defects.values().copied().max().unwrap_or_else(rational::zero)
    }

    /// Recomputes every defect against `g` and checks the bound.
    pub fn verify(&self, g: &GroupOracle) -> Result<bool> {
        if g.spec() != self.spec {
            return Ok(false);
        }
        let check = is_n_folner(g, &self.f, &self.d, self.n)?;
        Ok(check.holds && check.defects == self.defects)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FolnerCheck {
    pub holds: bool,
    pub defects: BTreeMap<GroupCode, Q>,
}

/// Which form of the Følner inequality a search should certify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FolnerTest {
    /// `|F∖xF|/|F| ≤ 1/n`.
    #[default]
    Standard,
    /// `|F∩xF|/|F| > 1 − 1/n`.
    Complement,
}

fn check_args(g: &GroupOracle, f: &FiniteSubset, n: u64) -> Result<()> {
    g.require_computable()?;
    if f.is_empty() {
        return Err(Error::EmptySet);
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

/// `#{f ∈ F : x⋆f ∈ F}`, i.e. `|F ∩ xF|`.
fn overlap(g: &GroupOracle, f: &FiniteSubset, x: GroupCode) -> usize {
    f.iter().filter(|&c| f.contains(g.mult(x, c))).count()
}

/// Exact `|F∖xF|/|F|` for each `x ∈ D`.
pub fn defects(g: &GroupOracle, f: &FiniteSubset, d: &FiniteSubset) -> Result<BTreeMap<GroupCode, Q>> {
    g.require_computable()?;
    if f.is_empty() {
        return Err(Error::EmptySet);
    }
    let size = f.len() as i128;
    Ok(d.iter()
        .map(|x| (x, rational::q(size - overlap(g, f, x) as i128, size)))
        .collect())
}

pub fn is_n_folner(g: &GroupOracle, f: &FiniteSubset, d: &FiniteSubset, n: u64) -> Result<FolnerCheck> {
    check_args(g, f, n)?;
    let defects = defects(g, f, d)?;
    let bound = rational::reciprocal(n);
    let holds = defects.values().all(|v| *v <= bound);
    Ok(FolnerCheck { holds, defects })
}

/// `|F∩xF|/|F| > 1 − 1/n` for every `x ∈ D` (strict).
pub fn is_n_folner_complement(g: &GroupOracle, f: &FiniteSubset, d: &FiniteSubset, n: u64) -> Result<bool> {
    check_args(g, f, n)?;
    let size = f.len() as i128;
    let bound = rational::one() - rational::reciprocal(n);
    Ok(d.iter().all(|x| rational::q(overlap(g, f, x) as i128, size) > bound))
}

fn passes(g: &GroupOracle, f: &FiniteSubset, d: &FiniteSubset, n: u64, test: FolnerTest, meter: &mut Meter) -> std::result::Result<bool, crate::budget::Exhausted> {
    meter.charge((f.len() * d.len().max(1)) as u64)?;
    Ok(match test {
        FolnerTest::Standard => is_n_folner(g, f, d, n).map(|c| c.holds).unwrap_or(false),
        FolnerTest::Complement => is_n_folner_complement(g, f, d, n).unwrap_or(false),
    })
}

fn certificate(g: &GroupOracle, f: FiniteSubset, d: &FiniteSubset, n: u64) -> Result<FolnerCertificate> {
    let defects = defects(g, &f, d)?;
    Ok(FolnerCertificate {
        spec: g.spec(),
        d: d.clone(),
        n,
        f,
        defects,
    })
}

/// First `n`-Følner set w.r.t. `D` in a fixed candidate order: stage `s`
/// tries the radius-`s` ball over `D`, then every finite set whose largest
/// code is `s` (Gödel order). One budget step per multiplication.
pub fn search_folner(g: &GroupOracle, d: &FiniteSubset, n: u64, budget: Budget) -> Result<Outcome<FolnerCertificate>> {
    search_folner_with(g, d, n, budget, FolnerTest::Standard)
}

pub fn search_folner_with(
    g: &GroupOracle,
    d: &FiniteSubset,
    n: u64,
    budget: Budget,
    test: FolnerTest,
) -> Result<Outcome<FolnerCertificate>> {
    g.require_computable()?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut meter = budget.meter();
    let steps = g.symmetrize(d).len().max(1) as u64;
    let mut last_ball: Option<FiniteSubset> = None;
    for s in 0u32.. {
        let ball = g.ball_unchecked(d, s);
        if meter.charge(ball.len() as u64 * steps).is_err() {
            break;
        }
        if last_ball.as_ref() != Some(&ball) {
            match passes(g, &ball, d, n, test, &mut meter) {
                Err(e) => return Ok(Outcome::Unknown(e)),
                Ok(true) => return certificate(g, ball, d, n).map(Outcome::Done),
                Ok(false) => {}
            }
            last_ball = Some(ball);
        }
        if g.order().is_some_and(|m| u64::from(s) >= m) {
            continue;
        }
        if s >= 63 {
            break;
        }
        for mask in 0..(1u64 << s) {
            let f = FiniteSubset::new(
                (0..s)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| GroupCode(b.into()))
                    .chain([GroupCode(s.into())]),
            );
            match passes(g, &f, d, n, test, &mut meter) {
                Err(e) => return Ok(Outcome::Unknown(e)),
                Ok(true) => return certificate(g, f, d, n).map(Outcome::Done),
                Ok(false) => {}
            }
        }
    }
    Ok(Outcome::Unknown(meter.exhausted()))
}

/// A `j`-Følner certificate w.r.t. the first `j` codes.
pub fn folner_sequence(g: &GroupOracle, j: u64, budget: Budget) -> Result<Outcome<FolnerCertificate>> {
    if j == 0 {
        return Err(Error::InvalidArgument("j must be at least 1".into()));
    }
    let d = FiniteSubset::from_raw((0..j).filter(|&c| g.is_valid_code(GroupCode(c))));
    search_folner(g, &d, j, budget)
}
