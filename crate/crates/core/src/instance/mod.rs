//! The deterministic problem world: ships, trade lanes, routes, contracts,
//! and the derived voyage/transfer profiles.
//!
//! All quantities use the native units of the domain: days, tonnes, grams of
//! CO2, nautical miles, USD, and knots. An instance is a closed value; every
//! operation on it is a pure function.

mod generate;
mod profiles;
mod routes;
mod validate;

pub use generate::{generate_instance, paradox_demo_instance, Dims, ParamRanges, Stringency};
pub use profiles::{derive_voyage_profiles, EMISSION_GRAMS_PER_TONNE_FUEL};
pub use routes::{ballast_ratio, enumerate_routes, route_count_formula, LaneEndpoints};
pub use validate::{validate_instance, Violation};

use crate::ids::{CapacityTypeId, ContractId, LaneId, RouteId, ShipId};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const INSTANCE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("lane list is empty")]
    EmptyLanes,
    #[error("cycle length cap {c_max} outside 1..={lanes}")]
    BadCycleCap { c_max: usize, lanes: usize },
    #[error("route has non-positive total length {0}")]
    NonPositiveRouteLength(f64),
    #[error("range {name} is inverted: {low} > {high}")]
    InvertedRange { name: &'static str, low: f64, high: f64 },
    #[error("dimension {name} must be at least 1")]
    ZeroDimension { name: &'static str },
    #[error("speed set for ship {0} is empty")]
    EmptySpeedSet(ShipId),
    #[error("fuel price must be positive, got {0}")]
    NonPositiveFuelPrice(f64),
    #[error("unsupported instance schema version {found}, expected {expected}")]
    SchemaVersion { found: u32, expected: u32 },
    #[error("instance file: {0}")]
    Io(#[from] std::io::Error),
    #[error("instance file: {0}")]
    Json(#[from] serde_json::Error),
}

/// A ship and all of its deterministic parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShipSpec {
    pub id: ShipId,
    /// Available service days in the first stage.
    pub available_days_p1: f64,
    /// Available service days in the second stage.
    pub available_days_p2: f64,
    /// Installed volume per capacity type, tonnes.
    pub capacity_by_type: Vec<f64>,
    /// CO2 emitted before the planning horizon, grams.
    pub prior_emissions: f64,
    /// Transport work done before the planning horizon, tonne-nmile.
    pub prior_work_intensity: f64,
    /// Carbon intensity standard the ship must meet, g/(t-nmile).
    pub cii_standard: f64,
    /// CO2 per day of ballast sailing, grams.
    pub ballast_emission_rate: f64,
    /// CO2 per day at port, grams.
    pub port_emission_rate: f64,
    /// Cost per day of ballast sailing in the first stage, USD.
    pub ballast_cost_rate_p1: f64,
    /// Cost per day at port in the first stage, USD.
    pub port_cost_rate_p1: f64,
    /// Distance covered per day of ballast sailing, nmile.
    pub ballast_distance_per_day: f64,
    /// Route the ship is on when planning starts.
    pub initial_route: RouteId,
    /// Speed alternatives in knots, strictly increasing.
    pub speed_set: Vec<f64>,
    /// Routes this ship may sail, sorted ascending.
    pub sailable_routes: Vec<RouteId>,
}

impl ShipSpec {
    /// Deadweight-style capacity measure: total installed volume, tonnes.
    pub fn total_capacity(&self) -> f64 {
        self.capacity_by_type.iter().sum()
    }

    pub fn can_sail(&self, route: RouteId) -> bool {
        self.sailable_routes.binary_search(&route).is_ok()
    }
}

/// A directed trade lane with its first-stage spot market.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeLaneSpec {
    pub id: LaneId,
    /// Laden sailing distance of the lane, nmile.
    pub laden_distance: f64,
    /// Contracts whose cargo moves on this lane.
    pub contracts_served: Vec<ContractId>,
    /// First-stage spot cargo volume per capacity type, tonnes.
    pub spot_volume_p1_by_type: Vec<f64>,
    /// First-stage spot revenue per capacity type, USD per tonne.
    pub spot_revenue_p1_by_type: Vec<f64>,
    /// Ships allowed to serve this lane.
    pub eligible_ships: Vec<ShipId>,
}

/// A cargo contract, aggregated at lane level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractSpec {
    pub id: ContractId,
    /// Required voyages in the first stage.
    pub frequency_p1: u32,
    /// Required voyages in the second stage.
    pub frequency_p2: u32,
    /// First-stage demand, tonnes.
    pub demand_p1: f64,
    /// Capacity types that may carry this contract's cargo.
    pub compatible_capacity_types: Vec<CapacityTypeId>,
}

/// A route: a directed cycle over distinct trade lanes plus the ballast legs
/// that join them. Stored in its lexicographically smallest rotation so each
/// cycle appears exactly once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteSpec {
    pub id: RouteId,
    pub lane_sequence: Vec<LaneId>,
    /// Full cycle length including ballast legs, nmile.
    pub total_length: f64,
    /// Sum of the laden lane lengths, nmile.
    pub lane_length_sum: f64,
    /// Fraction of the cycle sailed in ballast, in [0, 1].
    pub ballast_ratio: f64,
}

impl RouteSpec {
    pub fn serves(&self, lane: LaneId) -> bool {
        self.lane_sequence.contains(&lane)
    }
}

/// Cost, time and emissions of one round trip for a (ship, route, speed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoyageProfile {
    pub ship: ShipId,
    pub route: RouteId,
    /// Index into the ship's speed set.
    pub speed_index: usize,
    pub round_trip_days: f64,
    pub round_trip_cost_p1: f64,
    pub round_trip_emissions: f64,
}

/// Cost, time and emissions of switching between two routes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferProfile {
    pub ship: ShipId,
    pub from_route: RouteId,
    pub to_route: RouteId,
    pub speed_index: usize,
    pub transfer_days: f64,
    pub transfer_cost_p1: f64,
    pub transfer_emissions: f64,
    /// Distance between the starting points of the two routes, nmile.
    pub transfer_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityTypeSpec {
    pub id: CapacityTypeId,
    pub label: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ProfileSet {
    pub voyage: Vec<VoyageProfile>,
    pub transfer: Vec<TransferProfile>,
}

/// The complete deterministic problem data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceData {
    pub schema_version: u32,
    pub ships: Vec<ShipSpec>,
    pub lanes: Vec<TradeLaneSpec>,
    pub routes: Vec<RouteSpec>,
    pub contracts: Vec<ContractSpec>,
    pub capacity_types: Vec<CapacityTypeSpec>,
    pub profiles: ProfileSet,
    #[serde(rename = "seed")]
    pub rng_seed: u64,
    /// Whether installed fleet capacity can cover all contract and spot
    /// demand; instances built that way keep served cargo constant across
    /// carbon intensity regimes.
    pub fleet_capacity_exceeds_demand: bool,
}

impl InstanceData {
    pub fn ship(&self, id: ShipId) -> &ShipSpec {
        &self.ships[id.index()]
    }

    pub fn lane(&self, id: LaneId) -> &TradeLaneSpec {
        &self.lanes[id.index()]
    }

    pub fn route(&self, id: RouteId) -> &RouteSpec {
        &self.routes[id.index()]
    }

    pub fn contract(&self, id: ContractId) -> &ContractSpec {
        &self.contracts[id.index()]
    }

    pub fn capacity_type_count(&self) -> usize {
        self.capacity_types.len()
    }

    /// Builds the dense profile lookup used by model construction and
    /// analysis.
    pub fn index(&self) -> InstanceIndex {
        InstanceIndex::new(self)
    }

    /// Hash of the canonical JSON encoding; scenario files reference it.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let bytes = serde_json::to_vec(self).expect("instance serializes");
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        hex_string(&hasher.finalize())
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let data: InstanceData = serde_json::from_str(text)?;
        if data.schema_version != INSTANCE_SCHEMA_VERSION {
            return Err(InstanceError::SchemaVersion {
                found: data.schema_version,
                expected: INSTANCE_SCHEMA_VERSION,
            });
        }
        Ok(data)
    }

    pub fn write_json_file(&self, path: &std::path::Path) -> Result<(), InstanceError> {
        let text = self.to_json()?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn read_json_file(path: &std::path::Path) -> Result<Self, InstanceError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

pub(crate) fn hex_string(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        use std::fmt::Write;
        write!(out, "{b:02x}").unwrap();
    }
    out
}

/// Dense lookup tables over an instance. Profile positions are indexed by
/// (ship, route, speed index) triples.
pub struct InstanceIndex {
    ships: usize,
    routes: usize,
    speeds: usize,
    voyage: Vec<Option<usize>>,
    transfer: Vec<Option<usize>>,
    /// Routes serving each lane, sorted.
    pub routes_by_lane: Vec<Vec<RouteId>>,
}

impl InstanceIndex {
    fn new(data: &InstanceData) -> Self {
        let ships = data.ships.len();
        let routes = data.routes.len();
        let speeds = data
            .ships
            .iter()
            .map(|s| s.speed_set.len())
            .max()
            .unwrap_or(0);
        // Entries referencing unknown ids are skipped; validate_instance
        // reports them.
        let mut voyage = vec![None; ships * routes * speeds];
        for (pos, p) in data.profiles.voyage.iter().enumerate() {
            if p.ship.index() >= ships || p.route.index() >= routes || p.speed_index >= speeds {
                continue;
            }
            let slot = (p.ship.index() * routes + p.route.index()) * speeds + p.speed_index;
            voyage[slot] = Some(pos);
        }
        let mut transfer = vec![None; ships * routes * routes * speeds];
        for (pos, p) in data.profiles.transfer.iter().enumerate() {
            if p.ship.index() >= ships
                || p.from_route.index() >= routes
                || p.to_route.index() >= routes
                || p.speed_index >= speeds
            {
                continue;
            }
            let slot = ((p.ship.index() * routes + p.from_route.index()) * routes
                + p.to_route.index())
                * speeds
                + p.speed_index;
            transfer[slot] = Some(pos);
        }
        let mut routes_by_lane = vec![Vec::new(); data.lanes.len()];
        for route in &data.routes {
            for lane in &route.lane_sequence {
                if lane.index() < routes_by_lane.len() {
                    routes_by_lane[lane.index()].push(route.id);
                }
            }
        }
        Self {
            ships,
            routes,
            speeds,
            voyage,
            transfer,
            routes_by_lane,
        }
    }

    pub fn voyage_pos(&self, ship: ShipId, route: RouteId, speed: usize) -> Option<usize> {
        debug_assert!(ship.index() < self.ships && route.index() < self.routes);
        self.voyage[(ship.index() * self.routes + route.index()) * self.speeds + speed]
    }

    pub fn transfer_pos(
        &self,
        ship: ShipId,
        from: RouteId,
        to: RouteId,
        speed: usize,
    ) -> Option<usize> {
        self.transfer[((ship.index() * self.routes + from.index()) * self.routes + to.index())
            * self.speeds
            + speed]
    }

    pub fn voyage<'a>(
        &self,
        data: &'a InstanceData,
        ship: ShipId,
        route: RouteId,
        speed: usize,
    ) -> Option<&'a VoyageProfile> {
        self.voyage_pos(ship, route, speed)
            .map(|p| &data.profiles.voyage[p])
    }

    pub fn transfer<'a>(
        &self,
        data: &'a InstanceData,
        ship: ShipId,
        from: RouteId,
        to: RouteId,
        speed: usize,
    ) -> Option<&'a TransferProfile> {
        self.transfer_pos(ship, from, to, speed)
            .map(|p| &data.profiles.transfer[p])
    }
}
