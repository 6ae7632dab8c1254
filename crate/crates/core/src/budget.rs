use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on elementary oracle calls for a semi-decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    steps: u64,
}

impl Budget {
    pub const DEFAULT_STEPS: u64 = 1_000_000;

    pub fn new(steps: u64) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidArgument("budget must be at least 1 step".into()));
        }
        Ok(Self { steps })
    }

    pub fn steps(self) -> u64 {
        self.steps
    }

    pub fn meter(self) -> Meter {
        Meter {
            limit: self.steps,
            used: 0,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            steps: Self::DEFAULT_STEPS,
        }
    }
}

/// Marker returned when a [`Meter`] runs dry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exhausted {
    pub consumed: u64,
}

/// Running step counter charged against a [`Budget`].
#[derive(Debug, Clone)]
pub struct Meter {
    limit: u64,
    used: u64,
}

impl Meter {
    pub fn unlimited() -> Self {
        Self {
            limit: u64::MAX,
            used: 0,
        }
    }

    pub fn charge(&mut self, steps: u64) -> std::result::Result<(), Exhausted> {
        let next = self.used.saturating_add(steps);
        if next > self.limit {
            self.used = self.limit;
            return Err(Exhausted { consumed: self.used });
        }
        self.used = next;
        Ok(())
    }

    pub fn tick(&mut self) -> std::result::Result<(), Exhausted> {
        self.charge(1)
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.used
    }

    pub fn exhausted(&self) -> Exhausted {
        Exhausted { consumed: self.used }
    }
}

/// Result of a budgeted semi-decision. `Unknown` is an ordinary value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<T> {
    Done(T),
    Unknown(Exhausted),
}

impl<T> Outcome<T> {
    pub fn done(self) -> Option<T> {
        match self {
            Outcome::Done(v) => Some(v),
            Outcome::Unknown(_) => None,
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Outcome::Unknown(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Done(v) => Outcome::Done(f(v)),
            Outcome::Unknown(e) => Outcome::Unknown(e),
        }
    }

    #[track_caller]
    pub fn expect_done(self, msg: &str) -> T {
        match self {
            Outcome::Done(v) => v,
            Outcome::Unknown(e) => panic!("{msg}: budget exhausted after {} steps", e.consumed),
        }
    }
}

impl<T> From<std::result::Result<T, Exhausted>> for Outcome<T> {
    fn from(r: std::result::Result<T, Exhausted>) -> Self {
        match r {
            Ok(v) => Outcome::Done(v),
            Err(e) => Outcome::Unknown(e),
        }
    }
}
