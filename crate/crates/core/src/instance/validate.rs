//! Structural validation of instance data. Violations are data, not
//! failures: callers decide what to do with them.

use super::routes::ballast_ratio;
use super::InstanceData;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Which field or entity is at fault, e.g. `ships[2].speed_set`.
    pub location: String,
    /// The rule that failed.
    pub rule: String,
}

impl Violation {
    fn new(location: impl Into<String>, rule: impl Into<String>) -> Self {
        Self {
            location: location.into(),
            rule: rule.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.rule)
    }
}

/// Checks every structural invariant; returns an empty list iff the
/// instance is well formed.
pub fn validate_instance(data: &InstanceData) -> Vec<Violation> {
    let mut out = Vec::new();
    let n_routes = data.routes.len();
    let n_lanes = data.lanes.len();
    let n_types = data.capacity_type_count();
    let n_ships = data.ships.len();
    let n_contracts = data.contracts.len();

    for (pos, route) in data.routes.iter().enumerate() {
        let loc = format!("routes[{pos}]");
        if route.id.index() != pos {
            out.push(Violation::new(&loc, "route ids must be dense and ordered"));
        }
        if route.lane_sequence.is_empty() {
            out.push(Violation::new(
                format!("{loc}.lane_sequence"),
                "route must visit at least one lane",
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for lane in &route.lane_sequence {
            if lane.index() >= n_lanes {
                out.push(Violation::new(
                    format!("{loc}.lane_sequence"),
                    format!("unknown lane {lane}"),
                ));
            }
            if !seen.insert(*lane) {
                out.push(Violation::new(
                    format!("{loc}.lane_sequence"),
                    format!("lane {lane} repeated in cycle"),
                ));
            }
        }
        if route.lane_length_sum > route.total_length + 1e-6 {
            out.push(Violation::new(
                format!("{loc}.total_length"),
                "total length must cover the lane length sum",
            ));
        }
        match ballast_ratio(route) {
            Ok(r) => {
                if (r - route.ballast_ratio).abs() > 1e-9 {
                    out.push(Violation::new(
                        format!("{loc}.ballast_ratio"),
                        format!(
                            "stored ratio {} differs from recomputed {}",
                            route.ballast_ratio, r
                        ),
                    ));
                }
            }
            Err(_) => out.push(Violation::new(
                format!("{loc}.total_length"),
                "route length must be positive",
            )),
        }
    }

    for (pos, lane) in data.lanes.iter().enumerate() {
        let loc = format!("lanes[{pos}]");
        if lane.id.index() != pos {
            out.push(Violation::new(&loc, "lane ids must be dense and ordered"));
        }
        if lane.laden_distance <= 0.0 {
            out.push(Violation::new(
                format!("{loc}.laden_distance"),
                "laden distance must be positive",
            ));
        }
        if lane.spot_volume_p1_by_type.len() != n_types
            || lane.spot_revenue_p1_by_type.len() != n_types
        {
            out.push(Violation::new(
                format!("{loc}.spot_volume_p1_by_type"),
                "spot tables must cover every capacity type",
            ));
        }
        for (k, &v) in lane.spot_volume_p1_by_type.iter().enumerate() {
            if v < 0.0 {
                out.push(Violation::new(
                    format!("{loc}.spot_volume_p1_by_type[{k}]"),
                    "spot volume must be non-negative",
                ));
            }
        }
        for (k, &v) in lane.spot_revenue_p1_by_type.iter().enumerate() {
            if v < 0.0 {
                out.push(Violation::new(
                    format!("{loc}.spot_revenue_p1_by_type[{k}]"),
                    "spot revenue must be non-negative",
                ));
            }
        }
        for ship in &lane.eligible_ships {
            if ship.index() >= n_ships {
                out.push(Violation::new(
                    format!("{loc}.eligible_ships"),
                    format!("unknown ship {ship}"),
                ));
            }
        }
        for c in &lane.contracts_served {
            if c.index() >= n_contracts {
                out.push(Violation::new(
                    format!("{loc}.contracts_served"),
                    format!("unknown contract {c}"),
                ));
            }
        }
    }

    for (pos, contract) in data.contracts.iter().enumerate() {
        let loc = format!("contracts[{pos}]");
        if contract.id.index() != pos {
            out.push(Violation::new(&loc, "contract ids must be dense and ordered"));
        }
        if contract.demand_p1 < 0.0 {
            out.push(Violation::new(
                format!("{loc}.demand_p1"),
                "demand must be non-negative",
            ));
        }
        if contract.compatible_capacity_types.is_empty() {
            out.push(Violation::new(
                format!("{loc}.compatible_capacity_types"),
                "at least one compatible capacity type required",
            ));
        }
        for k in &contract.compatible_capacity_types {
            if k.index() >= n_types {
                out.push(Violation::new(
                    format!("{loc}.compatible_capacity_types"),
                    format!("unknown capacity type {k}"),
                ));
            }
        }
        let served = data
            .lanes
            .iter()
            .any(|l| l.contracts_served.contains(&contract.id));
        if !served {
            out.push(Violation::new(
                &loc,
                "contract must be served by at least one lane",
            ));
        }
    }

    for (pos, ship) in data.ships.iter().enumerate() {
        let loc = format!("ships[{pos}]");
        if ship.id.index() != pos {
            out.push(Violation::new(&loc, "ship ids must be dense and ordered"));
        }
        for (name, value) in [
            ("available_days_p1", ship.available_days_p1),
            ("available_days_p2", ship.available_days_p2),
            ("prior_emissions", ship.prior_emissions),
            ("prior_work_intensity", ship.prior_work_intensity),
            ("ballast_emission_rate", ship.ballast_emission_rate),
            ("port_emission_rate", ship.port_emission_rate),
            ("ballast_cost_rate_p1", ship.ballast_cost_rate_p1),
            ("port_cost_rate_p1", ship.port_cost_rate_p1),
            ("ballast_distance_per_day", ship.ballast_distance_per_day),
        ] {
            if value < 0.0 {
                out.push(Violation::new(
                    format!("{loc}.{name}"),
                    "must be non-negative",
                ));
            }
        }
        if ship.cii_standard <= 0.0 {
            out.push(Violation::new(
                format!("{loc}.cii_standard"),
                "standard must be positive",
            ));
        }
        if ship.capacity_by_type.len() != n_types {
            out.push(Violation::new(
                format!("{loc}.capacity_by_type"),
                "capacity table must cover every capacity type",
            ));
        }
        if ship.capacity_by_type.iter().any(|&q| q < 0.0) {
            out.push(Violation::new(
                format!("{loc}.capacity_by_type"),
                "capacities must be non-negative",
            ));
        }
        if ship.speed_set.is_empty() {
            out.push(Violation::new(
                format!("{loc}.speed_set"),
                "speed set must be non-empty",
            ));
        }
        if !ship.speed_set.windows(2).all(|w| w[0] < w[1]) {
            out.push(Violation::new(
                format!("{loc}.speed_set"),
                "speeds must be strictly increasing",
            ));
        }
        if ship.sailable_routes.is_empty() {
            out.push(Violation::new(
                format!("{loc}.sailable_routes"),
                "ship must be able to sail at least one route",
            ));
        }
        if !ship.sailable_routes.windows(2).all(|w| w[0] < w[1]) {
            out.push(Violation::new(
                format!("{loc}.sailable_routes"),
                "sailable routes must be sorted and unique",
            ));
        }
        for r in &ship.sailable_routes {
            if r.index() >= n_routes {
                out.push(Violation::new(
                    format!("{loc}.sailable_routes"),
                    format!("unknown route {r}"),
                ));
            }
        }
        if !ship.can_sail(ship.initial_route) {
            out.push(Violation::new(
                format!("{loc}.initial_route"),
                "initial route must be sailable",
            ));
        }
    }

    validate_profiles(data, &mut out);

    let flag = super::generate::fleet_capacity_exceeds_demand(data);
    if flag != data.fleet_capacity_exceeds_demand {
        out.push(Violation::new(
            "fleet_capacity_exceeds_demand",
            format!("stored flag {} differs from recomputed {flag}", data.fleet_capacity_exceeds_demand),
        ));
    }

    out
}

fn validate_profiles(data: &InstanceData, out: &mut Vec<Violation>) {
    let n_routes = data.routes.len();
    let index = data.index();

    for (pos, p) in data.profiles.voyage.iter().enumerate() {
        let loc = format!("profiles.voyage[{pos}]");
        if p.ship.index() >= data.ships.len() || p.route.index() >= n_routes {
            out.push(Violation::new(&loc, "profile references unknown entity"));
            continue;
        }
        if p.speed_index >= data.ship(p.ship).speed_set.len() {
            out.push(Violation::new(&loc, "speed index out of range"));
        }
        if p.round_trip_days <= 0.0 || p.round_trip_cost_p1 <= 0.0 || p.round_trip_emissions <= 0.0
        {
            out.push(Violation::new(
                &loc,
                "round trip time, cost and emissions must be positive",
            ));
        }
    }
    for (pos, p) in data.profiles.transfer.iter().enumerate() {
        let loc = format!("profiles.transfer[{pos}]");
        if p.ship.index() >= data.ships.len()
            || p.from_route.index() >= n_routes
            || p.to_route.index() >= n_routes
        {
            out.push(Violation::new(&loc, "profile references unknown entity"));
            continue;
        }
        if p.transfer_days < 0.0
            || p.transfer_cost_p1 < 0.0
            || p.transfer_emissions < 0.0
            || p.transfer_distance < 0.0
        {
            out.push(Violation::new(&loc, "transfer quantities must be non-negative"));
        }
        if p.from_route == p.to_route && p.transfer_distance != 0.0 {
            out.push(Violation::new(
                &loc,
                "transfer distance must be zero when staying on the same route",
            ));
        }
    }

    // Completeness and symmetry of the lookup tables, and monotonicity of
    // voyage profiles in speed.
    for ship in &data.ships {
        for &r in &ship.sailable_routes {
            let mut prev: Option<&super::VoyageProfile> = None;
            for e in 0..ship.speed_set.len() {
                match index.voyage(data, ship.id, r, e) {
                    None => out.push(Violation::new(
                        format!("profiles.voyage"),
                        format!("missing profile for ship {} route {r} speed {e}", ship.id),
                    )),
                    Some(p) => {
                        if let Some(q) = prev {
                            if p.round_trip_days >= q.round_trip_days {
                                out.push(Violation::new(
                                    format!("profiles.voyage"),
                                    format!(
                                        "round trip days must strictly decrease in speed (ship {} route {r})",
                                        ship.id
                                    ),
                                ));
                            }
                            if p.round_trip_emissions <= q.round_trip_emissions {
                                out.push(Violation::new(
                                    format!("profiles.voyage"),
                                    format!(
                                        "round trip emissions must strictly increase in speed (ship {} route {r})",
                                        ship.id
                                    ),
                                ));
                            }
                        }
                        prev = Some(p);
                    }
                }
            }
            for &r2 in &ship.sailable_routes {
                for e in 0..ship.speed_set.len() {
                    let fwd = index.transfer(data, ship.id, r, r2, e);
                    let rev = index.transfer(data, ship.id, r2, r, e);
                    match (fwd, rev) {
                        (Some(a), Some(b)) => {
                            if (a.transfer_distance - b.transfer_distance).abs() > 1e-6 {
                                out.push(Violation::new(
                                    format!("profiles.transfer"),
                                    format!(
                                        "transfer distance must be symmetric (ship {} routes {r} and {r2})",
                                        ship.id
                                    ),
                                ));
                            }
                        }
                        _ => out.push(Violation::new(
                            format!("profiles.transfer"),
                            format!(
                                "missing transfer profile for ship {} routes {r} and {r2} speed {e}",
                                ship.id
                            ),
                        )),
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::LaneId;
    use crate::instance::{generate_instance, Dims, ParamRanges};

    #[test]
    fn default_instance_is_clean() {
        let data = generate_instance(5, &Dims::default(), &ParamRanges::default()).unwrap();
        assert!(validate_instance(&data).is_empty());
    }

    #[test]
    fn unknown_lane_reference_is_reported() {
        let mut data = generate_instance(5, &Dims::default(), &ParamRanges::default()).unwrap();
        data.routes[0].lane_sequence[0] = LaneId(99);
        let violations = validate_instance(&data);
        assert!(violations.iter().any(|v| v.rule.contains("unknown lane 99")));
    }

    #[test]
    fn stale_ballast_ratio_is_reported() {
        let mut data = generate_instance(5, &Dims::default(), &ParamRanges::default()).unwrap();
        data.routes[1].ballast_ratio = 0.123456;
        let violations = validate_instance(&data);
        assert!(violations
            .iter()
            .any(|v| v.location.contains("ballast_ratio")));
    }
}
