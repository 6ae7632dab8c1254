//! The Hall witness function `h` of the c.e.H.h.c.(k) condition.

use std::fmt;

use serde::{Deserialize, Serialize};

/// `h(0) = 0`, a table for `1..=table.len()`, then `slope·m + offset`, all
/// evaluated at `m = n + shift`. Shifting therefore stays closed-form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallWitness {
    table: Vec<u64>,
    slope: u64,
    offset: u64,
    shift: u64,
}

impl HallWitness {
    /// `h(n) = slope·n + offset` for `n > 0`.
    pub fn affine(slope: u64, offset: u64) -> Self {
        Self {
            table: Vec::new(),
            slope,
            offset,
            shift: 0,
        }
    }

    pub fn zero() -> Self {
        Self::affine(0, 0)
    }

    /// `h(n) = n`.
    pub fn identity() -> Self {
        Self::affine(1, 0)
    }

    /// Explicit values for `1..=table.len()`, then the affine tail.
    pub fn tabulated(table: Vec<u64>, slope: u64, offset: u64) -> Self {
        Self {
            table,
            slope,
            offset,
            shift: 0,
        }
    }

    pub fn eval(&self, n: u64) -> u64 {
        if n == 0 {
            return 0;
        }
        let m = n + self.shift;
        match self.table.get(m as usize - 1) {
            Some(&v) => v,
            None => self.slope * m + self.offset,
        }
    }

    /// `h′(0) = 0`, `h′(n) = h(n + k)` for `n > 0`.
    pub fn shift(&self, k: u64) -> Self {
        Self {
            shift: self.shift + k,
            ..self.clone()
        }
    }

    pub fn total_shift(&self) -> u64 {
        self.shift
    }
}

impl fmt::Display for HallWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.table.len() as u64 <= self.shift {
            let c = self.slope * self.shift + self.offset;
            return match (self.slope, c) {
                (0, c) => write!(f, "h(n)={c} for n>0"),
                (s, 0) => write!(f, "h(n)={s}n for n>0"),
                (s, c) => write!(f, "h(n)={s}n+{c} for n>0"),
            };
        }
        write!(f, "h(n)=table{:?}[n+{}] then {}m+{}", self.table, self.shift, self.slope, self.offset)
    }
}
