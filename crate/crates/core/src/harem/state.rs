//! The back-and-forth construction of a perfect `(1,k)`-matching.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::budget::{Budget, Meter, Outcome};
use crate::error::{Error, Result};
use crate::group::GroupCode;

use super::finite::{finite_harem_match, induced_ball};
use super::graphs::BipartiteOracle;
use super::witness::HallWitness;

/// Ball radii per step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RadiusPolicy {
    /// `max{2h(k)+1, 3}` for left steps and `max{2h(k)+2, 4}` for right steps,
    /// `h` the current shifted witness.
    #[default]
    Witness,
    /// Constant radii; not covered by the correctness argument and may end in
    /// `InternalInfeasible`.
    Fixed { left: u32, right: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// What one step did.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: u64,
    pub side: Side,
    /// The vertex selected for this step.
    pub vertex: GroupCode,
    /// The left vertex whose star was committed.
    pub center: GroupCode,
    pub partners: Vec<GroupCode>,
    pub radius: u32,
    pub ball_size: usize,
}

pub struct HaremMatchingState<G> {
    graph: G,
    k: u64,
    h: HallWitness,
    policy: RadiusPolicy,
    step: u64,
    removed: HashSet<GroupCode>,
    left: BTreeMap<GroupCode, Vec<GroupCode>>,
    right: BTreeMap<GroupCode, GroupCode>,
    cursor: [u64; 2],
    log: Vec<StepRecord>,
}

impl<G: BipartiteOracle> HaremMatchingState<G> {
    /// The caller asserts that `graph` satisfies c.e.H.h.c.(k) with witness `h`.
    pub fn new(graph: G, h: HallWitness, k: u64) -> Result<Self> {
        Self::with_policy(graph, h, k, RadiusPolicy::Witness)
    }

    pub fn with_policy(graph: G, h: HallWitness, k: u64, policy: RadiusPolicy) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        Ok(Self {
            graph,
            k,
            h,
            policy,
            step: 0,
            removed: HashSet::new(),
            left: BTreeMap::new(),
            right: BTreeMap::new(),
            cursor: [0, 0],
            log: Vec::new(),
        })
    }

    pub fn graph(&self) -> &G {
        &self.graph
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn witness(&self) -> &HallWitness {
        &self.h
    }

    pub fn is_removed(&self, v: GroupCode) -> bool {
        self.removed.contains(&v)
    }

    pub fn left_matches(&self) -> &BTreeMap<GroupCode, Vec<GroupCode>> {
        &self.left
    }

    pub fn right_matches(&self) -> &BTreeMap<GroupCode, GroupCode> {
        &self.right
    }

    pub fn log(&self) -> &[StepRecord] {
        &self.log
    }

    /// Radius the next step on `side` would use.
    pub fn radius(&self, side: Side) -> u32 {
        let hk = self.h.eval(self.k);
        let grow = |extra: u64, floor: u32| -> u32 {
            let r = 2u64.saturating_mul(hk).saturating_add(extra);
            u32::try_from(r).unwrap_or(u32::MAX).max(floor)
        };
        match (self.policy, side) {
            (RadiusPolicy::Witness, Side::Left) => grow(1, 3),
            (RadiusPolicy::Witness, Side::Right) => grow(2, 4),
            (RadiusPolicy::Fixed { left, .. }, Side::Left) => left,
            (RadiusPolicy::Fixed { right, .. }, Side::Right) => right,
        }
    }

    fn lowest_unremoved(&mut self, side: Side) -> Option<GroupCode> {
        let (idx, left) = match side {
            Side::Left => (0, true),
            Side::Right => (1, false),
        };
        loop {
            let v = self.graph.next_on_side(left, self.cursor[idx])?;
            if !self.removed.contains(&v) {
                self.cursor[idx] = v.0;
                return Some(v);
            }
            self.cursor[idx] = v.0 + 1;
        }
    }

    /// One back-and-forth step: left vertices at even steps, right at odd
    /// ones (falling back to the other side when one is exhausted). The step
    /// is atomic: if the budget runs out nothing changes.
    pub fn step(&mut self, budget: Budget) -> Result<Outcome<Option<StepRecord>>> {
        let mut meter = budget.meter();
        self.step_metered(&mut meter)
    }

    /// [`Self::step`] against a meter shared with other calls.
    pub fn step_metered(&mut self, meter: &mut Meter) -> Result<Outcome<Option<StepRecord>>> {
        let preferred = if self.step.is_multiple_of(2) { Side::Left } else { Side::Right };
        let other = if preferred == Side::Left { Side::Right } else { Side::Left };
        let Some((side, v)) = self
            .lowest_unremoved(preferred)
            .map(|v| (preferred, v))
            .or_else(|| self.lowest_unremoved(other).map(|v| (other, v)))
        else {
            return Ok(Outcome::Done(None));
        };
        let r = self.radius(side);
        let ball = match induced_ball(&self.graph, v, r, &self.removed, meter) {
            Ok(b) => b,
            Err(e) => return Ok(Outcome::Unknown(e)),
        };
        let Some(m) = finite_harem_match(&ball, self.k) else {
            return Err(Error::InternalInfeasible { step: self.step });
        };
        let center = match side {
            Side::Left => v,
            Side::Right => *m
                .iter()
                .find(|(_, bs)| bs.contains(&v))
                .map(|(a, _)| a)
                .ok_or(Error::InternalInfeasible { step: self.step })?,
        };
        let partners = m[&center].clone();
        if partners.len() as u64 != self.k {
            return Err(Error::InternalInfeasible { step: self.step });
        }
        self.removed.insert(center);
        for &b in &partners {
            self.removed.insert(b);
            self.right.insert(b, center);
        }
        self.left.insert(center, partners.clone());
        let record = StepRecord {
            step: self.step,
            side,
            vertex: v,
            center,
            partners,
            radius: r,
            ball_size: ball.a.len() + ball.b.len(),
        };
        self.log.push(record.clone());
        self.h = self.h.shift(self.k);
        self.step += 1;
        Ok(Outcome::Done(Some(record)))
    }

    /// Steps until `v` is matched; left vertices answer with their `k`
    /// partners, right vertices with their single partner.
    pub fn query(&mut self, v: GroupCode, budget: Budget) -> Result<Outcome<Vec<GroupCode>>> {
        self.query_metered(v, &mut budget.meter())
    }

    /// [`Self::query`] against a meter shared with other queries.
    pub fn query_metered(&mut self, v: GroupCode, meter: &mut Meter) -> Result<Outcome<Vec<GroupCode>>> {
        loop {
            if let Some(p) = self.answer(v) {
                return Ok(Outcome::Done(p));
            }
            match self.step_metered(meter)? {
                Outcome::Unknown(e) => return Ok(Outcome::Unknown(e)),
                Outcome::Done(None) => {
                    return Err(Error::InvalidArgument(format!("{v} is not a vertex of the graph")))
                }
                Outcome::Done(Some(_)) => {}
            }
        }
    }

    /// Already committed partners of `v`, without stepping.
    pub fn answer(&self, v: GroupCode) -> Option<Vec<GroupCode>> {
        if let Some(p) = self.left.get(&v) {
            return Some(p.clone());
        }
        self.right.get(&v).map(|&a| vec![a])
    }

    /// `L <code> -> <code>,...` and `R <code> -> <code>` lines, sorted by code.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (a, bs) in &self.left {
            let list: Vec<String> = bs.iter().map(|b| b.to_string()).collect();
            writeln!(out, "L {a} -> {}", list.join(",")).expect("string write");
        }
        for (b, a) in &self.right {
            writeln!(out, "R {b} -> {a}").expect("string write");
        }
        out
    }

    /// Internal consistency: edges, multiplicities, removed set.
    pub fn check(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for (&a, bs) in &self.left {
            if bs.len() as u64 != self.k {
                problems.push(format!("left {a} has {} partners", bs.len()));
            }
            let nb = self.graph.neighbors(a);
            for &b in bs {
                if !nb.contains(&b) {
                    problems.push(format!("({a},{b}) is not an edge"));
                }
                if self.right.get(&b) != Some(&a) {
                    problems.push(format!("right {b} does not point back to {a}"));
                }
            }
        }
        let mut count: BTreeMap<GroupCode, usize> = BTreeMap::new();
        for bs in self.left.values() {
            for &b in bs {
                *count.entry(b).or_default() += 1;
            }
        }
        for (b, n) in count {
            if n != 1 {
                problems.push(format!("right {b} matched {n} times"));
            }
        }
        let endpoints = self.left.len() + self.right.len();
        if endpoints != self.removed.len() || self.right.len() as u64 != self.k * self.left.len() as u64 {
            problems.push("removed set out of sync with the matching".into());
        }
        problems
    }
}
