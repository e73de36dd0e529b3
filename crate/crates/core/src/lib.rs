//! Tactical fleet deployment for tramp shipping under carbon intensity
//! regulation.
//!
//! The library models a fleet of ships serving directed trade lanes over a
//! planning year split into a deterministic first stage and a stochastic
//! second stage. It provides:
//!
//! * synthetic instance generation (ships, lanes, routes, contracts),
//! * market scenario construction with correlated fuel/demand/freight moves,
//! * a two-stage mixed-integer model with switchable carbon intensity
//!   constraints (demand-based, supply-based, or none),
//! * an exact branch-and-bound solver plus an adapter for external MILP
//!   engines, and the ballast-ratio route search heuristic,
//! * analysis of tramp indicators, the supply-based intensity paradox, and
//!   the value of information (EVPI / VSS).

pub mod ids;
pub mod instance;
pub mod scenario;
pub mod solve;

pub use ids::{CapacityTypeId, ContractId, LaneId, RouteId, ScenarioId, ShipId};
pub use instance::InstanceData;
pub use scenario::{Scenario, ScenarioSet};
