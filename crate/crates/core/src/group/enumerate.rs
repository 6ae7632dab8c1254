//! Deterministic enumerations of the equality relation and of `MultT`.
//!
//! Both streams are infinite. For finite groups the underlying blocks run
//! out and the streams repeat a trivially true filler item.

use super::{GroupCode, GroupOracle};

/// All pairs of naturals, in blocks of constant `max(i, j)`.
#[derive(Debug, Clone, Default)]
pub struct MaxBlockPairs {
    m: u64,
    idx: u64,
    limit: Option<u64>,
}

impl MaxBlockPairs {
    /// Pairs over codes `< limit` only (finite).
    pub fn bounded(limit: u64) -> Self {
        Self {
            limit: Some(limit),
            ..Self::default()
        }
    }
}

impl Iterator for MaxBlockPairs {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        if self.limit.is_some_and(|l| self.m >= l) {
            return None;
        }
        let (m, i) = (self.m, self.idx);
        let out = if i < m { (i, m) } else { (m, i - m) };
        self.idx += 1;
        if self.idx > 2 * m {
            self.m += 1;
            self.idx = 0;
        }
        Some(out)
    }
}

/// All triples of naturals, in blocks of constant maximum, lexicographic
/// inside a block.
#[derive(Debug, Clone, Default)]
pub struct MaxBlockTriples {
    m: u64,
    cur: (u64, u64, u64),
    limit: Option<u64>,
}

impl MaxBlockTriples {
    pub fn bounded(limit: u64) -> Self {
        Self {
            limit: Some(limit),
            ..Self::default()
        }
    }

    fn advance(&mut self) {
        let m = self.m;
        let (i, j, k) = self.cur;
        // k ranges over [0, m] if max(i, j) = m, else k = m only
        let full_k = i == m || j == m;
        if full_k && k < m {
            self.cur.2 += 1;
            return;
        }
        let (mut i, mut j) = (i, j);
        if j < m {
            j += 1;
        } else if i < m {
            i += 1;
            j = 0;
        } else {
            self.m += 1;
            self.cur = (0, 0, self.m);
            return;
        }
        let k = if i == m || j == m { 0 } else { m };
        self.cur = (i, j, k);
    }
}

impl Iterator for MaxBlockTriples {
    type Item = (u64, u64, u64);

    fn next(&mut self) -> Option<(u64, u64, u64)> {
        if self.limit.is_some_and(|l| self.m >= l) {
            return None;
        }
        let out = self.cur;
        self.advance();
        Some(out)
    }
}

/// Equality enumeration.
///
/// Even slots emit the spanning pair `(least(t), t)` for `t = 0, 1, …`; odd
/// slots emit every true pair in max-block order (false candidates are
/// replaced by the reflexive pair `(i, i)`).
#[derive(Debug, Clone)]
pub struct EqEnumeration<'g> {
    group: &'g GroupOracle,
    slot: u64,
    spanning: u64,
    pairs: MaxBlockPairs,
}

impl<'g> EqEnumeration<'g> {
    pub(super) fn new(group: &'g GroupOracle) -> Self {
        let pairs = match group.order() {
            Some(m) => MaxBlockPairs::bounded(m),
            None => MaxBlockPairs::default(),
        };
        Self {
            group,
            slot: 0,
            spanning: 0,
            pairs,
        }
    }

    /// Every code `c` with `c < settled_through()` has been linked to its least
    /// representative by the pairs emitted so far.
    pub fn settled_through(&self) -> u64 {
        match self.group.order() {
            Some(m) if self.spanning >= m => u64::MAX,
            _ => self.spanning,
        }
    }
}

impl Iterator for EqEnumeration<'_> {
    type Item = (GroupCode, GroupCode);

    fn next(&mut self) -> Option<Self::Item> {
        let g = self.group;
        let slot = self.slot;
        self.slot += 1;
        if slot.is_multiple_of(2) {
            if g.order().is_some_and(|m| self.spanning >= m) {
                return Some((GroupCode(0), GroupCode(0)));
            }
            let t = GroupCode(self.spanning);
            self.spanning += 1;
            return Some((g.least_code(t), t));
        }
        Some(match self.pairs.next() {
            Some((i, j)) if g.same_element(GroupCode(i), GroupCode(j)) => (GroupCode(i), GroupCode(j)),
            Some((i, _)) => (GroupCode(i), GroupCode(i)),
            None => (GroupCode(0), GroupCode(0)),
        })
    }
}

/// Enumeration of `MultT`.
///
/// Even slots emit `(i, j, i ⋆ j)` over max-block pairs; odd slots emit every
/// true triple in max-block order (false candidates become `(i, 0, i)`).
#[derive(Debug, Clone)]
pub struct MultEnumeration<'g> {
    group: &'g GroupOracle,
    slot: u64,
    pairs: MaxBlockPairs,
    triples: MaxBlockTriples,
}

impl<'g> MultEnumeration<'g> {
    pub(super) fn new(group: &'g GroupOracle) -> Self {
        let (pairs, triples) = match group.order() {
            Some(m) => (MaxBlockPairs::bounded(m), MaxBlockTriples::bounded(m)),
            None => (MaxBlockPairs::default(), MaxBlockTriples::default()),
        };
        Self {
            group,
            slot: 0,
            pairs,
            triples,
        }
    }
}

impl Iterator for MultEnumeration<'_> {
    type Item = (GroupCode, GroupCode, GroupCode);

    fn next(&mut self) -> Option<Self::Item> {
        let g = self.group;
        let slot = self.slot;
        self.slot += 1;
        let filler = (GroupCode(0), GroupCode(0), GroupCode(0));
        if slot.is_multiple_of(2) {
            return Some(match self.pairs.next() {
                Some((i, j)) => (GroupCode(i), GroupCode(j), g.mult(GroupCode(i), GroupCode(j))),
                None => filler,
            });
        }
        Some(match self.triples.next() {
            Some((i, j, k)) => {
                let (i, j, k) = (GroupCode(i), GroupCode(j), GroupCode(k));
                if g.same_element(g.mult(i, j), k) {
                    (i, j, k)
                } else {
                    (i, GroupCode(0), i)
                }
            }
            None => filler,
        })
    }
}
