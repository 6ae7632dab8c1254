//! Exact Følner function.
//!
//! Split `F` into components of the graph `f ~ x·f` (`x ∈ D±`). Since `x·f`
//! stays in the component of `f`, every defect count `|F∖xF|` is the sum of
//! the components' counts. In an infinite group components can be right
//! translated far apart, so the minimal size is the least `s` for which some
//! multiset of connected shapes of total size `s` has
//! `Σ_C (n·|C∖xC| − |C|) ≤ 0` for every `x`. Shapes are enumerated up to right
//! translation by fixing the identity inside them; a knapsack over Pareto
//! fronts of those vectors finds `s`. Finite groups are scanned exhaustively.

use std::collections::{HashMap, HashSet};

use crate::budget::{Budget, Exhausted, Meter, Outcome};
use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupCode, GroupOracle};

use super::{certificate, is_n_folner, FolnerCertificate};

/// Minimal size together with a set realising it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FolnerValue {
    pub size: usize,
    pub witness: FolnerCertificate,
}

/// `min{|F| : F is n-Følner w.r.t. D}`; one budget step per multiplication
/// and per enumerated shape.
pub fn folner_function(g: &GroupOracle, d: &FiniteSubset, n: u64, budget: Budget) -> Result<Outcome<FolnerValue>> {
    g.require_computable()?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let dirs: Vec<GroupCode> = d.iter().filter(|&x| !g.same_element(x, g.identity())).collect();
    let mut meter = budget.meter();
    let found = if dirs.is_empty() {
        Ok(Some(FiniteSubset::singleton(g.identity())))
    } else if let Some(order) = g.order() {
        finite_scan(g, d, n, order, &mut meter)
    } else {
        ShapeSearch::new(g, &dirs, n).run(&mut meter)
    };
    match found {
        Err(e) => Ok(Outcome::Unknown(e)),
        Ok(None) => Err(Error::InternalInfeasible { step: meter.used() }),
        Ok(Some(f)) => {
            let witness = certificate(g, f, d, n)?;
            if !is_n_folner(g, &witness.f, d, n)?.holds {
                return Err(Error::InternalInfeasible { step: meter.used() });
            }
            Ok(Outcome::Done(FolnerValue {
                size: witness.f.len(),
                witness,
            }))
        }
    }
}

/// Subsets containing the identity, by size (right translation preserves defects).
fn finite_scan(g: &GroupOracle, d: &FiniteSubset, n: u64, order: u64, meter: &mut Meter) -> std::result::Result<Option<FiniteSubset>, Exhausted> {
    let others: Vec<u64> = (1..order).collect();
    for size in 1..=order as usize {
        let mut idx: Vec<usize> = (0..size - 1).collect();
        loop {
            let f = FiniteSubset::from_raw(std::iter::once(0).chain(idx.iter().map(|&i| others[i])));
            meter.charge((f.len() * d.len()) as u64)?;
            if is_n_folner(g, &f, d, n).map(|c| c.holds).unwrap_or(false) {
                return Ok(Some(f));
            }
            if !next_combination(&mut idx, others.len()) {
                break;
            }
        }
    }
    Ok(None)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `u ≤ v` componentwise.
fn dominates(u: &[i64], v: &[i64]) -> bool {
    u.iter().zip(v).all(|(a, b)| a <= b)
}

/// Pareto front of vectors with a payload, minimal elements only.
struct Front<T> {
    items: Vec<(Vec<i64>, T)>,
}

impl<T> Front<T> {
    fn new() -> Self {
        Self { items: Vec::new() }
    }

    fn insert(&mut self, v: Vec<i64>, payload: T) {
        if self.items.iter().any(|(u, _)| dominates(u, &v)) {
            return;
        }
        self.items.retain(|(u, _)| !dominates(&v, u));
        self.items.push((v, payload));
    }
}

/// How a DP entry was formed: previous total size, index there, shape size and index.
type Back = Option<(usize, usize, usize, usize)>;

struct ShapeSearch<'g> {
    g: &'g GroupOracle,
    n: i64,
    /// `[x₁, x₁⁻¹, x₂, x₂⁻¹, …]`
    steps: Vec<GroupCode>,
    neighbors: HashMap<GroupCode, Vec<GroupCode>>,
    /// `shapes[c]`: Pareto front of shape vectors of size `c`.
    shapes: Vec<Front<Vec<GroupCode>>>,
    /// `dp[t]`: Pareto front of sums over multisets of total size `t`.
    dp: Vec<Front<Back>>,
}

impl<'g> ShapeSearch<'g> {
    fn new(g: &'g GroupOracle, dirs: &[GroupCode], n: u64) -> Self {
        let steps = dirs.iter().flat_map(|&x| [x, g.inv(x)]).collect();
        let mut dp = Front::new();
        dp.insert(vec![0; dirs.len()], None);
        Self {
            g,
            n: n as i64,
            steps,
            neighbors: HashMap::new(),
            shapes: vec![Front::new()],
            dp: vec![dp],
        }
    }

    fn neighbors(&mut self, v: GroupCode, meter: &mut Meter) -> std::result::Result<&[GroupCode], Exhausted> {
        if !self.neighbors.contains_key(&v) {
            meter.charge(self.steps.len() as u64)?;
            let nb = self.steps.iter().map(|&s| self.g.mult(s, v)).collect();
            self.neighbors.insert(v, nb);
        }
        Ok(&self.neighbors[&v])
    }

    fn run(mut self, meter: &mut Meter) -> std::result::Result<Option<FiniteSubset>, Exhausted> {
        for s in 1usize.. {
            self.enumerate_shapes(s, meter)?;
            let mut front = Front::new();
            for c in 1..=s {
                for (bi, (base, _)) in self.dp[s - c].items.iter().enumerate() {
                    for (si, (v, _)) in self.shapes[c].items.iter().enumerate() {
                        meter.tick()?;
                        let sum = base.iter().zip(v).map(|(a, b)| a + b).collect();
                        front.insert(sum, Some((s - c, bi, c, si)));
                    }
                }
            }
            let hit = front.items.iter().position(|(v, _)| v.iter().all(|&a| a <= 0));
            self.dp.push(front);
            if let Some(i) = hit {
                return Ok(Some(self.place(s, i, meter)?));
            }
        }
        unreachable!()
    }

    /// Redelmeier enumeration of connected sets of size `s` containing the identity.
    fn enumerate_shapes(&mut self, s: usize, meter: &mut Meter) -> std::result::Result<(), Exhausted> {
        let root = self.g.identity();
        let mut current = Vec::with_capacity(s);
        let mut seen: HashSet<GroupCode> = HashSet::from([root]);
        let mut front = Front::new();
        self.grow(s, &mut current, vec![root], &mut seen, &mut front, meter)?;
        self.shapes.push(front);
        Ok(())
    }

    fn grow(
        &mut self,
        s: usize,
        current: &mut Vec<GroupCode>,
        mut untried: Vec<GroupCode>,
        seen: &mut HashSet<GroupCode>,
        out: &mut Front<Vec<GroupCode>>,
        meter: &mut Meter,
    ) -> std::result::Result<(), Exhausted> {
        while let Some(v) = untried.pop() {
            current.push(v);
            if current.len() == s {
                meter.tick()?;
                let vec = self.vector(current, meter)?;
                out.insert(vec, current.clone());
            } else {
                let fresh: Vec<GroupCode> = self
                    .neighbors(v, meter)?
                    .iter()
                    .copied()
                    .filter(|u| !seen.contains(u))
                    .collect::<HashSet<_>>()
                    .into_iter()
                    .collect();
                let mut fresh = fresh;
                fresh.sort_unstable();
                seen.extend(fresh.iter().copied());
                let mut next = untried.clone();
                next.extend(fresh.iter().copied());
                let r = self.grow(s, current, next, seen, out, meter);
                for u in &fresh {
                    seen.remove(u);
                }
                r?;
            }
            current.pop();
        }
        Ok(())
    }

    /// `n·|C∖xC| − |C|` per direction; `|C∖xC| = #{c : x⁻¹c ∉ C}`.
    fn vector(&mut self, shape: &[GroupCode], meter: &mut Meter) -> std::result::Result<Vec<i64>, Exhausted> {
        let members: HashSet<GroupCode> = shape.iter().copied().collect();
        let dirs = self.steps.len() / 2;
        let mut out = vec![-(shape.len() as i64); dirs];
        for &c in shape {
            let nb = self.neighbors(c, meter)?.to_vec();
            for (i, o) in out.iter_mut().enumerate() {
                if !members.contains(&nb[2 * i + 1]) {
                    *o += self.n;
                }
            }
        }
        Ok(out)
    }

    fn collect(&self, t: usize, i: usize, parts: &mut Vec<Vec<GroupCode>>) {
        if let (_, Some((pt, pi, c, si))) = &self.dp[t].items[i] {
            parts.push(self.shapes[*c].items[*si].1.clone());
            self.collect(*pt, *pi, parts);
        }
    }

    /// Right-translates each component clear of the ones already placed.
    fn place(&mut self, s: usize, i: usize, meter: &mut Meter) -> std::result::Result<FiniteSubset, Exhausted> {
        let mut parts = Vec::new();
        self.collect(s, i, &mut parts);
        let mut placed: HashSet<GroupCode> = HashSet::new();
        let mut halo: HashSet<GroupCode> = HashSet::new();
        for part in parts {
            let mut shift = 0u64;
            let moved = loop {
                let t = GroupCode(shift);
                shift += 1;
                meter.charge(part.len() as u64)?;
                let moved: Vec<GroupCode> = part.iter().map(|&c| self.g.mult(c, t)).collect();
                if moved.iter().all(|c| !halo.contains(c)) {
                    break moved;
                }
            };
            for &c in &moved {
                placed.insert(c);
                halo.insert(c);
                let nb = self.neighbors(c, meter)?.to_vec();
                halo.extend(nb);
            }
        }
        Ok(FiniteSubset::new(placed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupOracle {
        GroupOracle::from_spec(s).unwrap()
    }

    fn value(g: &GroupOracle, d: &str, n: u64) -> usize {
        let d = FiniteSubset::new(g.parse_elements(d).unwrap());
        folner_function(g, &d, n, Budget::default()).unwrap().expect_done("folner function").size
    }

    #[test]
    fn integers() {
        let z = g("zd:1");
        for n in 1..=8 {
            assert_eq!(value(&z, "+1", n), n as usize);
        }
        // both directions still give |F∖xF| = 1 for an interval
        assert_eq!(value(&z, "+1,-1", 4), 4);
        assert_eq!(value(&z, "+2", 3), 3);
    }

    #[test]
    fn cyclic_needs_whole_group() {
        let c = g("cyclic:7");
        assert_eq!(value(&c, "1", 8), 7);
        assert_eq!(value(&c, "1", 3), 3);
    }

    #[test]
    fn identity_only() {
        for spec in ["free:2", "zd:2", "lamplighter", "cyclic:5"] {
            assert_eq!(value(&g(spec), "#0", 5), 1);
        }
    }

    #[test]
    fn plane_square() {
        // an a×b box has defect 1/a and 1/b; 2-Følner needs a box 2×2
        let z2 = g("zd:2");
        assert_eq!(value(&z2, "a,b", 2), 4);
        assert_eq!(value(&z2, "a,b", 3), 9);
    }

    #[test]
    fn involution_in_lamplighter() {
        // {1, a} is invariant under a
        assert_eq!(value(&g("lamplighter"), "a", 100), 2);
    }

    #[test]
    fn free_group_runs_out_of_budget() {
        let f = g("free:2");
        let d = FiniteSubset::new(f.parse_elements("a,b").unwrap());
        assert!(folner_function(&f, &d, 2, Budget::new(50_000).unwrap()).unwrap().is_unknown());
    }

    #[test]
    fn combinations() {
        let mut idx = vec![0, 1];
        let mut n = 1;
        while next_combination(&mut idx, 4) {
            n += 1;
        }
        assert_eq!(n, 6);
        let mut empty: Vec<usize> = vec![];
        assert!(!next_combination(&mut empty, 3));
    }
}
