//! Synthetic instance generation.
//!
//! Instances are drawn inside published parameter ranges for a crude-oil
//! style tramp market: a handful of long trade lanes, ships in the
//! 10k-50k tonne class, and round trips measured in months. Generation is
//! deterministic for a fixed seed.

use super::profiles::{derive_voyage_profiles, FuelModel};
use super::routes::{enumerate_routes, LaneEndpoints};
use super::{
    CapacityTypeSpec, ContractSpec, InstanceData, InstanceError, ProfileSet, RouteSpec, ShipSpec,
    TradeLaneSpec, INSTANCE_SCHEMA_VERSION,
};
use crate::ids::{CapacityTypeId, ContractId, LaneId, RouteId, ShipId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Carbon intensity stringency applied to every ship.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stringency {
    /// 11.8 g/(t-nmile).
    Lenient,
    /// 8.6 g/(t-nmile).
    Stricter,
}

impl Stringency {
    pub fn standard(self) -> f64 {
        match self {
            Stringency::Lenient => 11.8,
            Stringency::Stricter => 8.6,
        }
    }
}

/// Entity counts for a generated instance.
#[derive(Debug, Clone)]
pub struct Dims {
    pub ships: usize,
    pub lanes: usize,
    pub contracts: usize,
    pub capacity_types: usize,
    pub speeds: usize,
    /// Maximum number of lanes in one route cycle.
    pub c_max: usize,
    /// Restrict each ship to this many sailable routes (always including
    /// all single-lane routes and the ship's initial route). `None` leaves
    /// every route sailable by every ship.
    pub routes_per_ship: Option<usize>,
}

impl Default for Dims {
    fn default() -> Self {
        Self {
            ships: 15,
            lanes: 5,
            contracts: 3,
            capacity_types: 2,
            speeds: 3,
            c_max: 3,
            routes_per_ship: None,
        }
    }
}

/// Sampling ranges for every generated parameter. Defaults follow the
/// published case ranges.
#[derive(Debug, Clone)]
pub struct ParamRanges {
    pub available_days: f64,
    pub capacity_tonnes: (f64, f64),
    pub lane_length_nmile: (f64, f64),
    pub contract_demand_tonnes: (f64, f64),
    pub contract_frequency_choices: Vec<u32>,
    pub spot_volume_tonnes: (f64, f64),
    pub spot_revenue_per_tonne: (f64, f64),
    pub ballast_cost_per_day: (f64, f64),
    pub ballast_emission_per_day: (f64, f64),
    /// Port rates are this fraction of the ballast rates.
    pub port_fraction: f64,
    pub prior_emissions: (f64, f64),
    pub prior_work: (f64, f64),
    pub speed_knots: (f64, f64),
    pub base_fuel_tonnes_per_day: (f64, f64),
    pub port_fee_per_lane: (f64, f64),
    pub fuel_price_per_tonne: f64,
    pub layover_days_per_lane: f64,
    pub ballast_distance_per_day: f64,
    pub stringency: Stringency,
}

impl Default for ParamRanges {
    fn default() -> Self {
        Self {
            available_days: 120.0,
            capacity_tonnes: (10_331.0, 49_944.0),
            lane_length_nmile: (6_144.0, 9_904.0),
            contract_demand_tonnes: (144_870.0, 176_150.0),
            contract_frequency_choices: vec![3, 6],
            spot_volume_tonnes: (15_220.0, 24_620.0),
            spot_revenue_per_tonne: (49.0, 120.0),
            ballast_cost_per_day: (8_480.0, 27_820.0),
            ballast_emission_per_day: (36.75e6, 122.12e6),
            port_fraction: 0.1,
            prior_emissions: (8.25e9, 28.64e9),
            prior_work: (644.78e6, 2_086.43e6),
            speed_knots: (10.0, 15.0),
            base_fuel_tonnes_per_day: (25.0, 45.0),
            port_fee_per_lane: (30_000.0, 80_000.0),
            fuel_price_per_tonne: 500.0,
            layover_days_per_lane: 2.0,
            ballast_distance_per_day: 288.0,
            stringency: Stringency::Lenient,
        }
    }
}

fn check_range(name: &'static str, (low, high): (f64, f64)) -> Result<(), InstanceError> {
    if low > high {
        return Err(InstanceError::InvertedRange { name, low, high });
    }
    Ok(())
}

fn check_dim(name: &'static str, value: usize) -> Result<(), InstanceError> {
    if value == 0 {
        return Err(InstanceError::ZeroDimension { name });
    }
    Ok(())
}

fn uniform(rng: &mut ChaCha8Rng, (low, high): (f64, f64)) -> f64 {
    if low == high {
        low
    } else {
        rng.gen_range(low..high)
    }
}

/// Generates a complete instance. Deterministic for a fixed seed.
pub fn generate_instance(
    seed: u64,
    dims: &Dims,
    ranges: &ParamRanges,
) -> Result<InstanceData, InstanceError> {
    check_dim("ships", dims.ships)?;
    check_dim("lanes", dims.lanes)?;
    check_dim("contracts", dims.contracts)?;
    check_dim("capacity_types", dims.capacity_types)?;
    check_dim("speeds", dims.speeds)?;
    check_range("capacity_tonnes", ranges.capacity_tonnes)?;
    check_range("lane_length_nmile", ranges.lane_length_nmile)?;
    check_range("contract_demand_tonnes", ranges.contract_demand_tonnes)?;
    check_range("spot_volume_tonnes", ranges.spot_volume_tonnes)?;
    check_range("spot_revenue_per_tonne", ranges.spot_revenue_per_tonne)?;
    check_range("ballast_cost_per_day", ranges.ballast_cost_per_day)?;
    check_range("ballast_emission_per_day", ranges.ballast_emission_per_day)?;
    check_range("prior_emissions", ranges.prior_emissions)?;
    check_range("prior_work", ranges.prior_work)?;
    check_range("speed_knots", ranges.speed_knots)?;
    check_range("base_fuel_tonnes_per_day", ranges.base_fuel_tonnes_per_day)?;
    check_range("port_fee_per_lane", ranges.port_fee_per_lane)?;
    if ranges.fuel_price_per_tonne <= 0.0 {
        return Err(InstanceError::NonPositiveFuelPrice(
            ranges.fuel_price_per_tonne,
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Lane endpoints on a synthetic plane, resampled until the laden
    // distance falls inside the requested range.
    let mut endpoints = Vec::with_capacity(dims.lanes);
    for li in 0..dims.lanes {
        let lane = loop {
            let o = [rng.gen_range(0.0..10_000.0), rng.gen_range(0.0..10_000.0)];
            let d = [rng.gen_range(0.0..10_000.0), rng.gen_range(0.0..10_000.0)];
            let lane = LaneEndpoints::from_points(LaneId(li as u32), o, d);
            if lane.laden_distance >= ranges.lane_length_nmile.0
                && lane.laden_distance <= ranges.lane_length_nmile.1
            {
                break lane;
            }
        };
        endpoints.push(lane);
    }

    let c_max = dims.c_max.min(dims.lanes).max(1);
    let routes = enumerate_routes(&endpoints, c_max)?;
    let route_starts: Vec<[f64; 2]> = routes
        .iter()
        .map(|r| endpoints[r.lane_sequence[0].index()].origin)
        .collect();
    let single_lane_routes: Vec<RouteId> = routes
        .iter()
        .filter(|r| r.lane_sequence.len() == 1)
        .map(|r| r.id)
        .collect();

    // Contracts, assigned one lane each (wrapping when there are more
    // contracts than lanes).
    let mut contracts = Vec::with_capacity(dims.contracts);
    let mut contracts_by_lane: Vec<Vec<ContractId>> = vec![Vec::new(); dims.lanes];
    for ci in 0..dims.contracts {
        let freq = ranges.contract_frequency_choices
            [rng.gen_range(0..ranges.contract_frequency_choices.len())];
        let n_types = rng.gen_range(1..=dims.capacity_types);
        let mut types: Vec<CapacityTypeId> =
            (0..dims.capacity_types).map(|k| CapacityTypeId(k as u32)).collect();
        // Deterministic partial shuffle, keep the first n_types.
        for i in (1..types.len()).rev() {
            let j = rng.gen_range(0..=i);
            types.swap(i, j);
        }
        types.truncate(n_types);
        types.sort();
        contracts.push(ContractSpec {
            id: ContractId(ci as u32),
            frequency_p1: freq,
            frequency_p2: freq,
            demand_p1: uniform(&mut rng, ranges.contract_demand_tonnes),
            compatible_capacity_types: types,
        });
        contracts_by_lane[ci % dims.lanes].push(ContractId(ci as u32));
    }

    let all_ships: Vec<ShipId> = (0..dims.ships).map(|v| ShipId(v as u32)).collect();
    let lanes: Vec<TradeLaneSpec> = endpoints
        .iter()
        .enumerate()
        .map(|(li, lane)| TradeLaneSpec {
            id: lane.id,
            laden_distance: lane.laden_distance,
            contracts_served: contracts_by_lane[li].clone(),
            spot_volume_p1_by_type: (0..dims.capacity_types)
                .map(|_| uniform(&mut rng, ranges.spot_volume_tonnes))
                .collect(),
            spot_revenue_p1_by_type: (0..dims.capacity_types)
                .map(|_| uniform(&mut rng, ranges.spot_revenue_per_tonne))
                .collect(),
            eligible_ships: all_ships.clone(),
        })
        .collect();

    let mut ships = Vec::with_capacity(dims.ships);
    let mut fuel_models = Vec::with_capacity(dims.ships);
    for vi in 0..dims.ships {
        let mut speeds: Vec<f64>;
        loop {
            speeds = (0..dims.speeds)
                .map(|_| uniform(&mut rng, ranges.speed_knots))
                .collect();
            speeds.sort_by(f64::total_cmp);
            if speeds.windows(2).all(|w| w[1] - w[0] > 1e-6) || dims.speeds == 1 {
                break;
            }
        }
        let sailable = match dims.routes_per_ship {
            None => routes.iter().map(|r| r.id).collect::<Vec<_>>(),
            Some(cap) => {
                let mut picked: Vec<RouteId> = single_lane_routes.clone();
                let mut pool: Vec<RouteId> = routes
                    .iter()
                    .map(|r| r.id)
                    .filter(|id| !picked.contains(id))
                    .collect();
                while picked.len() < cap.max(single_lane_routes.len()) && !pool.is_empty() {
                    let j = rng.gen_range(0..pool.len());
                    picked.push(pool.swap_remove(j));
                }
                picked.sort();
                picked
            }
        };
        let initial_route = sailable[rng.gen_range(0..sailable.len())];
        let ballast_emission = uniform(&mut rng, ranges.ballast_emission_per_day);
        let ballast_cost = uniform(&mut rng, ranges.ballast_cost_per_day);
        ships.push(ShipSpec {
            id: ShipId(vi as u32),
            available_days_p1: ranges.available_days,
            available_days_p2: ranges.available_days,
            capacity_by_type: (0..dims.capacity_types)
                .map(|_| uniform(&mut rng, ranges.capacity_tonnes))
                .collect(),
            prior_emissions: uniform(&mut rng, ranges.prior_emissions),
            prior_work_intensity: uniform(&mut rng, ranges.prior_work),
            cii_standard: ranges.stringency.standard(),
            ballast_emission_rate: ballast_emission,
            port_emission_rate: ballast_emission * ranges.port_fraction,
            ballast_cost_rate_p1: ballast_cost,
            port_cost_rate_p1: ballast_cost * ranges.port_fraction,
            ballast_distance_per_day: ranges.ballast_distance_per_day,
            initial_route,
            speed_set: speeds.clone(),
            sailable_routes: sailable,
        });
        fuel_models.push(FuelModel {
            base_tonnes_per_day: uniform(&mut rng, ranges.base_fuel_tonnes_per_day),
            reference_speed: speeds[0],
            port_fee_per_lane: uniform(&mut rng, ranges.port_fee_per_lane),
        });
    }

    let profiles = derive_voyage_profiles(
        &ships,
        &routes,
        &route_starts,
        &fuel_models,
        ranges.fuel_price_per_tonne,
        ranges.layover_days_per_lane,
    )?;

    let capacity_types = (0..dims.capacity_types)
        .map(|k| CapacityTypeSpec {
            id: CapacityTypeId(k as u32),
            label: format!("type-{k}"),
        })
        .collect();

    let mut data = InstanceData {
        schema_version: INSTANCE_SCHEMA_VERSION,
        ships,
        lanes,
        routes,
        contracts,
        capacity_types,
        profiles,
        rng_seed: seed,
        fleet_capacity_exceeds_demand: false,
    };
    data.fleet_capacity_exceeds_demand = fleet_capacity_exceeds_demand(&data);
    Ok(data)
}

/// Conservative static check that installed capacity times achievable trips
/// covers all first-stage contract and spot demand.
pub fn fleet_capacity_exceeds_demand(data: &InstanceData) -> bool {
    let index = data.index();
    let mut capacity = 0.0;
    for ship in &data.ships {
        let mut min_days = f64::INFINITY;
        for &r in &ship.sailable_routes {
            for e in 0..ship.speed_set.len() {
                if let Some(p) = index.voyage(data, ship.id, r, e) {
                    min_days = min_days.min(p.round_trip_days);
                }
            }
        }
        if !min_days.is_finite() || min_days <= 0.0 {
            continue;
        }
        let trips = (ship.available_days_p1 / min_days).floor();
        capacity += ship.total_capacity() * trips;
    }
    let demand: f64 = data.contracts.iter().map(|c| c.demand_p1).sum::<f64>()
        + data
            .lanes
            .iter()
            .map(|l| l.spot_volume_p1_by_type.iter().sum::<f64>())
            .sum::<f64>();
    capacity >= demand
}

/// A deterministic two-ship instance on which tightening the supply-based
/// carbon intensity standard forces extra ballast sailing.
///
/// Each ship owns one lane and one single-lane route (ballast ratio 0.5)
/// with a fixed contract of one voyage per stage. At 11.8 g/(t-nmile)
/// idle-at-port is compliant; at 8.6 the only way to comply is to dilute
/// intensity with ballast distance, which raises both emissions and cost.
pub fn paradox_demo_instance() -> InstanceData {
    let lane_length = 8_000.0;
    let route_total = 16_000.0;
    let capacity = 25_000.0;
    let n_ships = 2usize;

    let routes: Vec<RouteSpec> = (0..n_ships)
        .map(|i| RouteSpec {
            id: RouteId(i as u32),
            lane_sequence: vec![LaneId(i as u32)],
            total_length: route_total,
            lane_length_sum: lane_length,
            ballast_ratio: 0.5,
        })
        .collect();

    let lanes: Vec<TradeLaneSpec> = (0..n_ships)
        .map(|i| TradeLaneSpec {
            id: LaneId(i as u32),
            laden_distance: lane_length,
            contracts_served: vec![ContractId(i as u32)],
            spot_volume_p1_by_type: vec![5_000.0],
            spot_revenue_p1_by_type: vec![60.0],
            eligible_ships: vec![ShipId(i as u32)],
        })
        .collect();

    let contracts: Vec<ContractSpec> = (0..n_ships)
        .map(|i| ContractSpec {
            id: ContractId(i as u32),
            frequency_p1: 1,
            frequency_p2: 1,
            demand_p1: 20_000.0,
            compatible_capacity_types: vec![CapacityTypeId(0)],
        })
        .collect();

    let mut profiles = ProfileSet::default();
    let mut ships = Vec::new();
    for i in 0..n_ships {
        let id = ShipId(i as u32);
        let rid = RouteId(i as u32);
        ships.push(ShipSpec {
            id,
            available_days_p1: 120.0,
            available_days_p2: 120.0,
            capacity_by_type: vec![capacity],
            prior_emissions: 1.0e9,
            prior_work_intensity: 1.0e8,
            cii_standard: 11.8,
            ballast_emission_rate: 4.0e7,
            port_emission_rate: 4.0e6,
            ballast_cost_rate_p1: 20_000.0,
            port_cost_rate_p1: 2_000.0,
            ballast_distance_per_day: 288.0,
            initial_route: rid,
            speed_set: vec![12.0],
            sailable_routes: vec![rid],
        });
        profiles.voyage.push(VoyageProfileLiteral {
            ship: id,
            route: rid,
            days: 58.0,
            cost: 0.9e6,
            emissions: 4.0e9,
        }
        .into());
        profiles.transfer.push(super::TransferProfile {
            ship: id,
            from_route: rid,
            to_route: rid,
            speed_index: 0,
            transfer_days: 0.0,
            transfer_cost_p1: 0.0,
            transfer_emissions: 0.0,
            transfer_distance: 0.0,
        });
    }

    let mut data = InstanceData {
        schema_version: INSTANCE_SCHEMA_VERSION,
        ships,
        lanes,
        routes,
        contracts,
        capacity_types: vec![CapacityTypeSpec {
            id: CapacityTypeId(0),
            label: "type-0".into(),
        }],
        profiles,
        rng_seed: 0,
        fleet_capacity_exceeds_demand: false,
    };
    data.fleet_capacity_exceeds_demand = fleet_capacity_exceeds_demand(&data);
    data
}

struct VoyageProfileLiteral {
    ship: ShipId,
    route: RouteId,
    days: f64,
    cost: f64,
    emissions: f64,
}

impl From<VoyageProfileLiteral> for super::VoyageProfile {
    fn from(v: VoyageProfileLiteral) -> Self {
        Self {
            ship: v.ship,
            route: v.route,
            speed_index: 0,
            round_trip_days: v.days,
            round_trip_cost_p1: v.cost,
            round_trip_emissions: v.emissions,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate_instance;

    #[test]
    fn defaults_match_published_dimensions() {
        let data = generate_instance(42, &Dims::default(), &ParamRanges::default()).unwrap();
        assert_eq!(data.ships.len(), 15);
        assert_eq!(data.lanes.len(), 5);
        assert_eq!(data.contracts.len(), 3);
        assert_eq!(data.capacity_type_count(), 2);
        for ship in &data.ships {
            assert_eq!(ship.speed_set.len(), 3);
            for &q in &ship.capacity_by_type {
                assert!((10_331.0..=49_944.0).contains(&q));
            }
            assert_eq!(ship.cii_standard, 11.8);
        }
    }

    #[test]
    fn stricter_stringency_sets_8_6() {
        let ranges = ParamRanges {
            stringency: Stringency::Stricter,
            ..ParamRanges::default()
        };
        let data = generate_instance(1, &Dims::default(), &ranges).unwrap();
        assert!(data.ships.iter().all(|s| s.cii_standard == 8.6));
    }

    #[test]
    fn same_seed_is_identical() {
        let a = generate_instance(7, &Dims::default(), &ParamRanges::default()).unwrap();
        let b = generate_instance(7, &Dims::default(), &ParamRanges::default()).unwrap();
        assert_eq!(a, b);
        let c = generate_instance(8, &Dims::default(), &ParamRanges::default()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn generated_instances_validate_clean() {
        for seed in [0, 3, 11] {
            let data = generate_instance(seed, &Dims::default(), &ParamRanges::default()).unwrap();
            let violations = validate_instance(&data);
            assert!(violations.is_empty(), "seed {seed}: {violations:?}");
        }
    }

    #[test]
    fn inverted_range_is_rejected() {
        let ranges = ParamRanges {
            capacity_tonnes: (50_000.0, 10_000.0),
            ..ParamRanges::default()
        };
        assert!(generate_instance(0, &Dims::default(), &ranges).is_err());
    }

    #[test]
    fn paradox_demo_validates() {
        let data = paradox_demo_instance();
        let violations = validate_instance(&data);
        assert!(violations.is_empty(), "{violations:?}");
    }
}
