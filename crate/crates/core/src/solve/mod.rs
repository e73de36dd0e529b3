//! Solvers: the builtin branch-and-bound engine, the external-engine
//! adapter, the route-search heuristic, and benchmark statistics.

pub mod bnb;
pub mod lp_text;
pub mod milp;
pub mod simplex;
pub mod stats;

pub use stats::{normalized_deviation, wilcoxon_one_sided, StatsError, WilcoxonOutcome};
