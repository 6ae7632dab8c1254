//! Numbered groups over integer codes.
//!
//! A [`GroupOracle`] exposes a group only through codes: `mult` realises the
//! `⋆` function, `inv` the inverse map, and in [`Mode::Computable`] `eq`
//! decides equality of codes. In [`Mode::Ce`] equality and the multiplication
//! table are only available through the enumerations [`GroupOracle::eq_enum`]
//! and [`GroupOracle::multt_enum`].
//!
//! Built-in families compute canonical forms internally even when exposed as
//! c.e., which is what makes the enumerations sound and complete.

mod coding;
mod enumerate;
pub mod free;
pub mod lamplighter;
mod literal;
pub mod redundant;
pub mod zd;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::budget::Budget;
use crate::error::{Error, Result};

pub use enumerate::{EqEnumeration, MaxBlockPairs, MaxBlockTriples, MultEnumeration};

/// The ν-number of a group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupCode(pub u64);

impl GroupCode {
    pub const IDENTITY: GroupCode = GroupCode(0);
}

impl fmt::Display for GroupCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for GroupCode {
    fn from(v: u64) -> Self {
        GroupCode(v)
    }
}

/// A finite set of codes, kept strictly increasing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteSubset(Vec<GroupCode>);

impl FiniteSubset {
    pub fn new(codes: impl IntoIterator<Item = GroupCode>) -> Self {
        let mut v: Vec<GroupCode> = codes.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn from_raw(codes: impl IntoIterator<Item = u64>) -> Self {
        Self::new(codes.into_iter().map(GroupCode))
    }

    pub fn singleton(c: GroupCode) -> Self {
        Self(vec![c])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: GroupCode) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = GroupCode> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[GroupCode] {
        &self.0
    }

    pub fn max(&self) -> Option<GroupCode> {
        self.0.last().copied()
    }

    pub fn is_subset_of(&self, other: &FiniteSubset) -> bool {
        self.iter().all(|c| other.contains(c))
    }
}

impl FromIterator<GroupCode> for FiniteSubset {
    fn from_iter<I: IntoIterator<Item = GroupCode>>(iter: I) -> Self {
        Self::new(iter)
    }
}

impl<'a> IntoIterator for &'a FiniteSubset {
    type Item = GroupCode;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, GroupCode>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    Computable,
    Ce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Free { rank: u32 },
    Zd { dim: u32 },
    Cyclic { order: u64 },
    Lamplighter,
    RedundantZ,
}

/// A group in the DSL `free:<k≥1> | zd:<d≥1> | cyclic:<m≥2> | lamplighter | redundant-z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    family: Family,
}

impl GroupSpec {
    pub fn family(&self) -> Family {
        self.family
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedSpec(s.to_string());
        let family = match s.split_once(':') {
            None => match s {
                "lamplighter" => Family::Lamplighter,
                "redundant-z" => Family::RedundantZ,
                _ => return Err(bad()),
            },
            Some((name, arg)) => {
                if arg.is_empty() || !arg.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                let n: u64 = arg.parse().map_err(|_| bad())?;
                match name {
                    "free" if (1..=1000).contains(&n) => Family::Free { rank: n as u32 },
                    "zd" if (1..=64).contains(&n) => Family::Zd { dim: n as u32 },
                    "cyclic" if n >= 2 => Family::Cyclic { order: n },
                    _ => return Err(bad()),
                }
            }
        };
        Ok(Self { family })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Free { rank } => write!(f, "free:{rank}"),
            Family::Zd { dim } => write!(f, "zd:{dim}"),
            Family::Cyclic { order } => write!(f, "cyclic:{order}"),
            Family::Lamplighter => f.write_str("lamplighter"),
            Family::RedundantZ => f.write_str("redundant-z"),
        }
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Outcome of [`GroupOracle::eq_semidecide`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EqVerdict {
    Equal,
    Unknown,
}

/// A numbered group given by oracles over codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupOracle {
    spec: GroupSpec,
    mode: Mode,
}

impl GroupOracle {
    /// `redundant-z` is c.e.; every other family is computable.
    pub fn new(spec: GroupSpec) -> Self {
        let mode = match spec.family {
            Family::RedundantZ => Mode::Ce,
            _ => Mode::Computable,
        };
        Self { spec, mode }
    }

    pub fn from_spec(text: &str) -> Result<Self> {
        Ok(Self::new(text.parse()?))
    }

    /// The same group, exposed only through its c.e. enumerations.
    pub fn as_ce(&self) -> Self {
        Self {
            spec: self.spec,
            mode: Mode::Ce,
        }
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn identity(&self) -> GroupCode {
        GroupCode::IDENTITY
    }

    pub fn require_computable(&self) -> Result<()> {
        match self.mode {
            Mode::Computable => Ok(()),
            Mode::Ce => Err(Error::WrongMode {
                required: "computable",
            }),
        }
    }

    pub fn require_ce(&self) -> Result<()> {
        match self.mode {
            Mode::Ce => Ok(()),
            Mode::Computable => Err(Error::WrongMode { required: "c.e." }),
        }
    }

    /// Number of elements for finite families. Codes of a finite group are `0..order`.
    pub fn order(&self) -> Option<u64> {
        match self.spec.family {
            Family::Cyclic { order } => Some(order),
            _ => None,
        }
    }

    pub fn is_valid_code(&self, x: GroupCode) -> bool {
        self.order().is_none_or(|m| x.0 < m)
    }

    /// The `⋆` function: `ν(x)ν(y) = ν(x ⋆ y)`.
    pub fn mult(&self, x: GroupCode, y: GroupCode) -> GroupCode {
        GroupCode(match self.spec.family {
            Family::Free { rank } => free::mult(rank, x.0, y.0),
            Family::Zd { dim } => zd::mult(dim, x.0, y.0),
            Family::Cyclic { order } => ((x.0 % order) + (y.0 % order)) % order,
            Family::Lamplighter => lamplighter::mult(x.0, y.0),
            Family::RedundantZ => redundant::mult(x.0, y.0),
        })
    }

    /// Like [`mult`](Self::mult), but `None` where the product's code would
    /// not fit in 64 bits (only possible for `lamplighter`).
    pub fn try_mult(&self, x: GroupCode, y: GroupCode) -> Option<GroupCode> {
        match self.spec.family {
            Family::Lamplighter => lamplighter::try_mult(x.0, y.0).map(GroupCode),
            _ => Some(self.mult(x, y)),
        }
    }

    /// The `*` function: `ν(x)ν(inv(x)) = 1`.
    pub fn inv(&self, x: GroupCode) -> GroupCode {
        GroupCode(match self.spec.family {
            Family::Free { rank } => free::inv(rank, x.0),
            Family::Zd { dim } => zd::inv(dim, x.0),
            Family::Cyclic { order } => (order - x.0 % order) % order,
            Family::Lamplighter => lamplighter::inv(x.0),
            Family::RedundantZ => redundant::inv(x.0),
        })
    }

    /// Decides `ν(x) = ν(y)`; only available for computable presentations.
    pub fn eq(&self, x: GroupCode, y: GroupCode) -> Result<bool> {
        self.require_computable()?;
        Ok(self.same_element(x, y))
    }

    /// Least code denoting the same element as `x`.
    ///
    /// This is the family's internal canonical form; it is ground truth for
    /// tests and for generating the c.e. enumerations, not an oracle that
    /// c.e. algorithms consult.
    pub fn least_code(&self, x: GroupCode) -> GroupCode {
        match self.spec.family {
            Family::RedundantZ => GroupCode(redundant::least_code(redundant::value(x.0))),
            Family::Cyclic { order } => GroupCode(x.0 % order),
            _ => x,
        }
    }

    /// Ground-truth equality via canonical forms (see [`least_code`](Self::least_code)).
    pub fn same_element(&self, x: GroupCode, y: GroupCode) -> bool {
        self.least_code(x) == self.least_code(y)
    }

    /// Enumeration of the equal-pairs relation `{(n₁,n₂) : ν(n₁)=ν(n₂)}`.
    pub fn eq_enum(&self) -> EqEnumeration<'_> {
        EqEnumeration::new(self)
    }

    /// Enumeration of `MultT = {(i,j,k) : ν(i)ν(j)=ν(k)}`.
    pub fn multt_enum(&self) -> MultEnumeration<'_> {
        MultEnumeration::new(self)
    }

    /// Scans the equality enumeration for `(x,y)` or `(y,x)`.
    ///
    /// Reflexive pairs count as enumerated up front and cost nothing.
    pub fn eq_semidecide(&self, x: GroupCode, y: GroupCode, budget: Budget) -> Result<EqVerdict> {
        self.require_ce()?;
        if x == y {
            return Ok(EqVerdict::Equal);
        }
        let mut meter = budget.meter();
        for (a, b) in self.eq_enum() {
            if meter.tick().is_err() {
                return Ok(EqVerdict::Unknown);
            }
            if (a, b) == (x, y) || (a, b) == (y, x) {
                return Ok(EqVerdict::Equal);
            }
        }
        Ok(EqVerdict::Unknown)
    }

    /// All products of at most `radius` factors from `gens ∪ gens⁻¹ ∪ {1}`.
    pub fn ball(&self, gens: &FiniteSubset, radius: u32) -> Result<FiniteSubset> {
        self.require_computable()?;
        Ok(self.ball_unchecked(gens, radius))
    }

    pub(crate) fn ball_unchecked(&self, gens: &FiniteSubset, radius: u32) -> FiniteSubset {
        let steps = self.symmetrize(gens);
        let mut seen: BTreeSet<GroupCode> = BTreeSet::from([self.identity()]);
        let mut frontier = vec![self.identity()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for &x in &frontier {
                for &s in &steps {
                    let y = self.mult(s, x);
                    if seen.insert(y) {
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        FiniteSubset::new(seen)
    }

    /// `gens ∪ gens⁻¹` without the identity, sorted.
    pub fn symmetrize(&self, gens: &FiniteSubset) -> Vec<GroupCode> {
        let mut steps: BTreeSet<GroupCode> = BTreeSet::new();
        for g in gens {
            steps.insert(self.least_code(g));
            steps.insert(self.inv(g));
        }
        steps.remove(&self.identity());
        steps.into_iter().collect()
    }

    /// Parses one element literal (a generator word, an integer tuple for
    /// `zd`, or a raw code `#n`).
    pub fn parse_element(&self, text: &str) -> Result<GroupCode> {
        literal::parse_element(self, text)
    }

    /// Parses a comma-separated list of element literals.
    pub fn parse_elements(&self, text: &str) -> Result<Vec<GroupCode>> {
        literal::split_list(text)
            .into_iter()
            .map(|t| self.parse_element(&t))
            .collect()
    }

    pub fn format_element(&self, x: GroupCode) -> String {
        literal::format_element(self, x)
    }
}
