//! Effective amenability toolkit for numbered groups.
//!
//! The crate is organised around a handful of subsystems:
//!
//! * [`group`]: numbered groups given by multiplication, inversion and
//!   (in computable mode) equality oracles over integer codes, together with
//!   the enumerations a computably enumerable presentation exposes.
//! * [`folner`]: Følner set verification and search, the Følner function,
//!   Reiter functions and the partition-merging verifier for c.e. groups, and
//!   the word-problem decider driven by a Følner oracle.
//! * [`harem`]: finite (1,k)-harem matchings and the back-and-forth
//!   construction of a computable perfect (1,k)-matching on an infinite,
//!   highly computable bipartite graph.
//! * [`paradox`]: effective paradoxical decompositions built from a witness
//!   key.
//! * [`witness`]: deciders for witnesses of the Banach–Tarski paradox and
//!   the subgroup Følner restriction.

pub mod budget;
pub mod error;
pub mod folner;
pub mod group;
pub mod harem;
pub mod paradox;
pub mod rational;
pub mod witness;

pub use budget::{Budget, Exhausted, Meter, Outcome};
pub use error::{Error, Result};
pub use group::{FiniteSubset, GroupCode, GroupOracle, GroupSpec, Mode};
pub use rational::Q;
