//! Reiter functions, the partition defect `M_Π^x` and the merging verifier κ.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupCode, GroupOracle};
use crate::rational::{self, Q};

/// A finitely supported function from codes to positive rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ReiterJson", into = "ReiterJson")]
pub struct ReiterFunction {
    values: BTreeMap<GroupCode, Q>,
}

#[derive(Serialize, Deserialize)]
struct ReiterJson {
    support: FiniteSubset,
    #[serde(with = "rational::text_map")]
    values: BTreeMap<GroupCode, Q>,
}

impl TryFrom<ReiterJson> for ReiterFunction {
    type Error = Error;

    fn try_from(j: ReiterJson) -> Result<Self> {
        let keys = FiniteSubset::new(j.values.keys().copied());
        if keys != j.support {
            return Err(Error::InvalidArgument("support does not match the keys of values".into()));
        }
        Self::new(j.values)
    }
}

impl From<ReiterFunction> for ReiterJson {
    fn from(f: ReiterFunction) -> Self {
        ReiterJson {
            support: f.support(),
            values: f.values,
        }
    }
}

impl ReiterFunction {
    pub fn new(values: BTreeMap<GroupCode, Q>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySupport);
        }
        if let Some((&code, v)) = values.iter().find(|(_, v)| **v <= rational::zero()) {
            return Err(Error::NonPositiveValue {
                code,
                value: rational::to_text(v),
            });
        }
        Ok(Self { values })
    }

    /// The characteristic function of a non-empty set.
    pub fn indicator(f: &FiniteSubset) -> Result<Self> {
        Self::new(f.iter().map(|c| (c, rational::one())).collect())
    }

    pub fn support(&self) -> FiniteSubset {
        FiniteSubset::new(self.values.keys().copied())
    }

    pub fn get(&self, c: GroupCode) -> Q {
        self.values.get(&c).copied().unwrap_or_else(rational::zero)
    }

    pub fn values(&self) -> &BTreeMap<GroupCode, Q> {
        &self.values
    }

    pub fn total(&self) -> Q {
        self.values.values().sum()
    }
}

/// Sums `f` over each element, keyed by least code (the pushforward).
fn pushforward(g: &GroupOracle, f: &ReiterFunction) -> BTreeMap<GroupCode, Q> {
    let mut out: BTreeMap<GroupCode, Q> = BTreeMap::new();
    for (&c, &v) in f.values() {
        *out.entry(g.least_code(c)).or_insert_with(rational::zero) += v;
    }
    out
}

/// `‖h − ₓh‖₁ / ‖h‖₁` where `h` is the pushforward of `f` and `ₓh(y) = h(x⁻¹y)`.
fn shift_defect(g: &GroupOracle, h: &BTreeMap<GroupCode, Q>, x: GroupCode) -> Q {
    let mut diff: BTreeMap<GroupCode, Q> = h.clone();
    for (&u, &v) in h {
        *diff.entry(g.least_code(g.mult(x, u))).or_insert_with(rational::zero) -= v;
    }
    let num: Q = diff.values().map(|v| v.abs()).sum();
    num / h.values().sum::<Q>()
}

/// Exact normalised ℓ¹ shift defect per `x ∈ D`.
pub fn reiter_defect(g: &GroupOracle, f: &ReiterFunction, d: &FiniteSubset) -> Result<BTreeMap<GroupCode, Q>> {
    g.require_computable()?;
    Ok(canonical_defect(g, f, d))
}

/// The same quantity computed through the family's canonical forms; valid in
/// either mode and used as ground truth for κ.
pub fn canonical_defect(g: &GroupOracle, f: &ReiterFunction, d: &FiniteSubset) -> BTreeMap<GroupCode, Q> {
    let h = pushforward(g, f);
    d.iter().map(|x| (x, shift_defect(g, &h, x))).collect()
}

/// Disjoint non-empty blocks of codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPartition {
    blocks: Vec<FiniteSubset>,
}

impl SupportPartition {
    pub fn new(blocks: Vec<FiniteSubset>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for c in b {
                if !seen.insert(c) {
                    return Err(Error::InvalidPartition(format!("code {c} in two blocks")));
                }
            }
        }
        let mut blocks = blocks;
        blocks.sort();
        Ok(Self { blocks })
    }

    pub fn singletons(s: &FiniteSubset) -> Self {
        Self {
            blocks: s.iter().map(FiniteSubset::singleton).collect(),
        }
    }

    pub fn blocks(&self) -> &[FiniteSubset] {
        &self.blocks
    }

    fn block_of(&self) -> HashMap<GroupCode, usize> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(i, b)| b.iter().map(move |c| (c, i)))
            .collect()
    }

    pub fn covers(&self, s: &FiniteSubset) -> bool {
        let idx = self.block_of();
        s.iter().all(|c| idx.contains_key(&c))
    }

    /// `self ≤ other`: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SupportPartition) -> bool {
        let idx = other.block_of();
        self.blocks.iter().all(|b| {
            let mut owners = b.iter().map(|c| idx.get(&c));
            let first = owners.next().flatten();
            first.is_some() && owners.all(|o| o == first)
        })
    }
}

/// `Σ_V |a(V) − b_x(V)| / Σf` with `a(V) = Σ_{v∈V} f(v)` and
/// `b_x(V) = Σ{f(u) : x⋆u ∈ V}`.
///
/// Codes outside every block (in particular translates `x⋆u` the partition
/// does not mention) count as singleton blocks.
pub fn partition_defect(g: &GroupOracle, f: &ReiterFunction, p: &SupportPartition, x: GroupCode) -> Result<Q> {
    if !p.covers(&f.support()) {
        return Err(Error::InvalidPartition("partition does not cover the support".into()));
    }
    let idx = p.block_of();
    Ok(block_defect(g, f, x, |c| match idx.get(&c) {
        Some(&i) => BlockKey::Block(i),
        None => BlockKey::Free(c),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum BlockKey {
    Block(usize),
    Free(GroupCode),
}

fn block_defect(g: &GroupOracle, f: &ReiterFunction, x: GroupCode, mut key: impl FnMut(GroupCode) -> BlockKey) -> Q {
    let mut bal: BTreeMap<BlockKey, Q> = BTreeMap::new();
    for (&u, &v) in f.values() {
        *bal.entry(key(u)).or_insert_with(rational::zero) += v;
        *bal.entry(key(g.mult(x, u))).or_insert_with(rational::zero) -= v;
    }
    bal.values().map(|v| v.abs()).sum::<Q>() / f.total()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum KappaVerdict {
    Invariant,
    NotInvariant,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KappaReport {
    pub verdict: KappaVerdict,
    /// Merges of blocks meeting the support or its translates.
    pub merges: u64,
    /// Equality pairs consumed.
    pub consumed: u64,
    #[serde(with = "rational::text_map")]
    pub defects: BTreeMap<GroupCode, Q>,
}

struct UnionFind {
    parent: HashMap<GroupCode, GroupCode>,
}

impl UnionFind {
    fn find(&mut self, c: GroupCode) -> GroupCode {
        let p = *self.parent.entry(c).or_insert(c);
        if p == c {
            return c;
        }
        let r = self.find(p);
        self.parent.insert(c, r);
        r
    }

    fn union(&mut self, a: GroupCode, b: GroupCode) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent.insert(hi, lo);
        true
    }
}

/// Decides whether the pushforward of `f` is `n`-invariant w.r.t. `D` by
/// merging blocks along the equality enumeration, starting from singletons.
///
/// `INVARIANT` as soon as every `M_Π^x(f) ≤ 1/n`; `NOT_INVARIANT` once the
/// partition has become the fibre partition and some test still fails. One
/// budget step per enumerated pair.
pub fn kappa_verify(g: &GroupOracle, n: u64, d: &FiniteSubset, f: &ReiterFunction, budget: Budget) -> Result<KappaReport> {
    g.require_ce()?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut s: BTreeSet<GroupCode> = f.values().keys().copied().collect();
    for x in d {
        for &u in f.values().keys() {
            s.insert(g.mult(x, u));
        }
    }
    let top = s.last().expect("support is non-empty").0;
    let bound = rational::reciprocal(n);
    let mut uf = UnionFind { parent: HashMap::new() };
    let test = |uf: &mut UnionFind| -> (bool, BTreeMap<GroupCode, Q>) {
        let defects: BTreeMap<GroupCode, Q> = d
            .iter()
            .map(|x| (x, block_defect(g, f, x, |c| BlockKey::Free(uf.find(c)))))
            .collect();
        (defects.values().all(|v| *v <= bound), defects)
    };
    let mut meter = budget.meter();
    let mut merges = 0;
    let (ok, mut defects) = test(&mut uf);
    if ok {
        return Ok(KappaReport {
            verdict: KappaVerdict::Invariant,
            merges,
            consumed: 0,
            defects,
        });
    }
    let mut stream = g.eq_enum();
    loop {
        if stream.settled_through() > top {
            return Ok(KappaReport {
                verdict: KappaVerdict::NotInvariant,
                merges,
                consumed: meter.used(),
                defects,
            });
        }
        if meter.tick().is_err() {
            return Ok(KappaReport {
                verdict: KappaVerdict::Unknown,
                merges,
                consumed: meter.used(),
                defects,
            });
        }
        let (a, b) = stream.next().expect("equality enumeration is infinite");
        let (ra, rb) = (uf.find(a), uf.find(b));
        let touches_s = |uf: &mut UnionFind, r: GroupCode| s.iter().any(|&c| uf.find(c) == r);
        let both = touches_s(&mut uf, ra) && touches_s(&mut uf, rb);
        if uf.union(a, b) && both {
            merges += 1;
            let (ok, now) = test(&mut uf);
            defects = now;
            if ok {
                return Ok(KappaReport {
                    verdict: KappaVerdict::Invariant,
                    merges,
                    consumed: meter.used(),
                    defects,
                });
            }
        }
    }
}

/// A level set `{v : h(v) > ε}` of the pushforward with every defect below
/// `|D|/(2n)`, trying `ε` in increasing order.
pub fn extract_folner_from_reiter(g: &GroupOracle, h: &ReiterFunction, d: &FiniteSubset, n: u64) -> Result<FiniteSubset> {
    g.require_computable()?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let bound = rational::reciprocal(n);
    if reiter_defect(g, h, d)?.values().any(|v| *v >= bound) {
        return Err(Error::PreconditionFailed(format!("Reiter defects must all be below 1/{n}")));
    }
    let push = pushforward(g, h);
    let mut levels: Vec<Q> = push.values().copied().collect::<BTreeSet<_>>().into_iter().collect();
    levels.pop();
    levels.insert(0, rational::zero());
    let target = rational::q(d.len() as i128, 2 * n as i128);
    for eps in levels {
        let f = FiniteSubset::new(push.iter().filter(|(_, v)| **v > eps).map(|(&c, _)| c));
        if super::defects(g, &f, d)?.values().all(|v| *v < target) {
            return Ok(f);
        }
    }
    Err(Error::NoLevelSet)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupOracle {
        GroupOracle::from_spec(s).unwrap()
    }

    fn codes(g: &GroupOracle, words: &str) -> Vec<GroupCode> {
        g.parse_elements(words).unwrap()
    }

    fn func(pairs: &[(GroupCode, i128)]) -> ReiterFunction {
        ReiterFunction::new(pairs.iter().map(|&(c, v)| (c, rational::q_int(v))).collect()).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(ReiterFunction::new(BTreeMap::new()), Err(Error::EmptySupport));
        let bad = BTreeMap::from([(GroupCode(3), rational::zero())]);
        assert!(matches!(ReiterFunction::new(bad), Err(Error::NonPositiveValue { .. })));
        let json = r#"{"support":[1,2],"values":{"1":"1/2","2":"3/1"}}"#;
        let f: ReiterFunction = serde_json::from_str(json).unwrap();
        assert_eq!(f.get(GroupCode(1)), rational::q(1, 2));
        assert_eq!(serde_json::to_string(&f).unwrap(), json);
        let mismatch = r#"{"support":[1],"values":{"1":"1/2","2":"3/1"}}"#;
        assert!(serde_json::from_str::<ReiterFunction>(mismatch).is_err());
    }

    #[test]
    fn reiter_examples() {
        let z = g("zd:1");
        let f = ReiterFunction::indicator(&FiniteSubset::new(codes(&z, "0,+1,+2,+3,+4"))).unwrap();
        let one = FiniteSubset::new(codes(&z, "+1"));
        assert_eq!(reiter_defect(&z, &f, &one).unwrap()[&one.as_slice()[0]], rational::q(2, 5));
        let e = FiniteSubset::from_raw([0]);
        assert_eq!(reiter_defect(&z, &f, &e).unwrap()[&GroupCode(0)], rational::zero());
        // (1,2,1) on {-1,0,1} shifted by one: |1|+|1|+|1|+|1| over 4
        let c = codes(&z, "-1,0,+1");
        let tent = func(&[(c[0], 1), (c[1], 2), (c[2], 1)]);
        assert_eq!(reiter_defect(&z, &tent, &one).unwrap()[&one.as_slice()[0]], rational::one());
    }

    #[test]
    fn partition_examples() {
        let r = g("redundant-z");
        let c = codes(&r, "1,y");
        let x = r.parse_element("x").unwrap();
        let f = func(&[(c[0], 1), (c[1], 1)]);
        let single = SupportPartition::singletons(&f.support());
        assert_eq!(partition_defect(&r, &f, &single, GroupCode(0)).unwrap(), rational::zero());
        let fine = partition_defect(&r, &f, &single, x).unwrap();
        let merged = SupportPartition::new(vec![FiniteSubset::singleton(c[0]), FiniteSubset::new([c[1], x])]).unwrap();
        let coarse = partition_defect(&r, &f, &merged, x).unwrap();
        assert_eq!(fine, rational::q_int(2));
        assert_eq!(fine, coarse * rational::q_int(2));
        assert!(single.refines(&merged));
        assert!(!merged.refines(&single));
    }

    #[test]
    fn partition_rejects_overlap_and_gaps() {
        let r = g("redundant-z");
        assert!(SupportPartition::new(vec![FiniteSubset::from_raw([1, 2]), FiniteSubset::from_raw([2])]).is_err());
        let f = func(&[(GroupCode(1), 1), (GroupCode(4), 1)]);
        let p = SupportPartition::new(vec![FiniteSubset::from_raw([1])]).unwrap();
        assert!(partition_defect(&r, &f, &p, GroupCode(1)).is_err());
    }

    fn mixed_powers(r: &GroupOracle) -> ReiterFunction {
        let words = "1,x,y^2,xy^2,y^4,x^5,yxy^4,x^7,y^8,x^4yxyx^2";
        let cs = codes(r, words);
        for (i, &c) in cs.iter().enumerate() {
            assert_eq!(r.least_code(c), r.least_code(r.parse_element(&format!("x^{i}")).unwrap()));
        }
        ReiterFunction::indicator(&FiniteSubset::new(cs)).unwrap()
    }

    #[test]
    fn kappa_examples() {
        let r = g("redundant-z");
        let f = mixed_powers(&r);
        let d = FiniteSubset::new(codes(&r, "x"));
        let big = Budget::new(5_000_000).unwrap();
        let rep = kappa_verify(&r, 4, &d, &f, big).unwrap();
        assert_eq!(rep.verdict, KappaVerdict::Invariant);
        assert!(rep.defects.values().all(|v| *v <= rational::q(1, 4)));
        let rep = kappa_verify(&r, 10, &d, &f, big).unwrap();
        assert_eq!(rep.verdict, KappaVerdict::NotInvariant);
        assert_eq!(rep.defects.values().next().copied(), Some(rational::q(2, 10)));
        let rep = kappa_verify(&r, 4, &d, &f, Budget::new(1).unwrap()).unwrap();
        assert_eq!(rep.verdict, KappaVerdict::Unknown);
        assert!(kappa_verify(&g("zd:1"), 4, &d, &f, big).is_err());
    }

    #[test]
    fn extraction() {
        let z = g("zd:1");
        let one = FiniteSubset::new(codes(&z, "+1"));
        let f = FiniteSubset::new(codes(&z, "0,+1,+2,+3,+4"));
        let h = ReiterFunction::indicator(&f).unwrap();
        assert_eq!(extract_folner_from_reiter(&z, &h, &one, 2).unwrap(), f);
        let m = 9i64;
        let tent: Vec<(GroupCode, i128)> = (-m..=m)
            .map(|v| (z.parse_element(&v.to_string()).unwrap(), (m + 1 - v.abs()) as i128))
            .collect();
        let h = func(&tent);
        let got = extract_folner_from_reiter(&z, &h, &one, 4).unwrap();
        assert_eq!(got, h.support());
        assert!(extract_folner_from_reiter(&z, &h, &one, 5).is_err());
    }
}
