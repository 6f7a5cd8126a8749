//! Number partitioning: split a multiset of non-negative integers into two
//! subsets whose sums are as close as possible, optionally with a fixed
//! difference in subset sizes.
//!
//! The crate provides the differencing heuristics ([`heuristics`]), complete
//! anytime branch-and-bound solvers built on them ([`search`]), a brute
//! force reference ([`oracle`]), closed-form predictions for random
//! instances ([`theory`]) and a seeded experiment harness
//! ([`experiments`]). All weights are arbitrary precision; instances whose
//! total fits in 126 bits take a faster native-integer path with identical
//! results.

mod assignment;
mod differencing;
mod error;
pub mod exec;
pub mod experiments;
pub mod heuristics;
mod instance;
mod magnitude;
pub mod oracle;
mod report;
pub mod search;
pub mod theory;

pub use assignment::{evaluate, CardinalityConstraint, PartitionAssignment, WeightedElement};
pub use error::{Error, Result};
pub use exec::Exec;
pub use heuristics::{bldm, ldm, pdm, HeuristicKind};
pub use instance::{total_and_parity, Instance, InstanceMeta, Parity};
pub use magnitude::Magnitude;
pub use report::{ImprovementEvent, SearchLimits, SolveReport, SolveStatus};
pub use search::{cbldm_solve, ckk_solve, solve, SolveOptions};
