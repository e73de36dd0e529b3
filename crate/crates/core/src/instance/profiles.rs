//! Voyage and transfer profile derivation.
//!
//! Sailing time is distance over speed; daily fuel burn follows the cubic
//! law in speed, so fuel per nautical mile grows with the square of speed.
//! Port calls add a fixed layover per lane visited.

use super::{InstanceError, ProfileSet, RouteSpec, ShipSpec, TransferProfile, VoyageProfile};

/// Grams of CO2 released per tonne of fuel burned (3114 g per kg).
pub const EMISSION_GRAMS_PER_TONNE_FUEL: f64 = 3.114e6;

/// Per-ship fuel curve: `base_tonnes_per_day` at `reference_speed`, scaled
/// by the cube of the speed ratio.
#[derive(Debug, Clone, Copy)]
pub struct FuelModel {
    pub base_tonnes_per_day: f64,
    pub reference_speed: f64,
    /// Port dues and handling per lane call, USD.
    pub port_fee_per_lane: f64,
}

impl FuelModel {
    pub fn daily_tonnes(&self, speed: f64) -> f64 {
        self.base_tonnes_per_day * (speed / self.reference_speed).powi(3)
    }

    /// Fuel burned sailing `distance` nautical miles at `speed` knots.
    pub fn sailing_tonnes(&self, distance: f64, speed: f64) -> f64 {
        self.daily_tonnes(speed) * sailing_days(distance, speed)
    }
}

pub fn sailing_days(distance: f64, speed_knots: f64) -> f64 {
    distance / (24.0 * speed_knots)
}

/// Derives the full voyage and transfer profile tables.
///
/// `route_starts[r]` is the coordinate of route `r`'s starting point on the
/// synthetic plane; transfer distance is the straight-line distance between
/// starting points and is therefore symmetric and zero on the diagonal.
pub fn derive_voyage_profiles(
    ships: &[ShipSpec],
    routes: &[RouteSpec],
    route_starts: &[[f64; 2]],
    fuel: &[FuelModel],
    fuel_price: f64,
    layover_days_per_lane: f64,
) -> Result<ProfileSet, InstanceError> {
    if fuel_price <= 0.0 {
        return Err(InstanceError::NonPositiveFuelPrice(fuel_price));
    }
    let mut set = ProfileSet::default();
    for ship in ships {
        if ship.speed_set.is_empty() {
            return Err(InstanceError::EmptySpeedSet(ship.id));
        }
        let model = fuel[ship.id.index()];
        for &rid in &ship.sailable_routes {
            let route = &routes[rid.index()];
            let calls = route.lane_sequence.len() as f64;
            for (ei, &speed) in ship.speed_set.iter().enumerate() {
                let tonnes = model.sailing_tonnes(route.total_length, speed);
                set.voyage.push(VoyageProfile {
                    ship: ship.id,
                    route: rid,
                    speed_index: ei,
                    round_trip_days: sailing_days(route.total_length, speed)
                        + layover_days_per_lane * calls,
                    round_trip_cost_p1: tonnes * fuel_price + model.port_fee_per_lane * calls,
                    round_trip_emissions: tonnes * EMISSION_GRAMS_PER_TONNE_FUEL
                        + ship.port_emission_rate * layover_days_per_lane * calls,
                });
            }
        }
        for &from in &ship.sailable_routes {
            for &to in &ship.sailable_routes {
                let d = if from == to {
                    0.0
                } else {
                    let a = route_starts[from.index()];
                    let b = route_starts[to.index()];
                    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
                };
                for (ei, &speed) in ship.speed_set.iter().enumerate() {
                    let tonnes = model.sailing_tonnes(d, speed);
                    set.transfer.push(TransferProfile {
                        ship: ship.id,
                        from_route: from,
                        to_route: to,
                        speed_index: ei,
                        transfer_days: sailing_days(d, speed),
                        transfer_cost_p1: tonnes * fuel_price,
                        transfer_emissions: tonnes * EMISSION_GRAMS_PER_TONNE_FUEL,
                        transfer_distance: d,
                    });
                }
            }
        }
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_speed_halves_sailing_days() {
        assert!((sailing_days(12_000.0, 12.0) - 2.0 * sailing_days(12_000.0, 24.0)).abs() < 1e-12);
    }

    #[test]
    fn cubic_law_fuel_per_mile_scales_with_speed_squared() {
        let m = FuelModel {
            base_tonnes_per_day: 30.0,
            reference_speed: 12.0,
            port_fee_per_lane: 0.0,
        };
        let distance = 10_000.0;
        let per_mile = |e: f64| m.sailing_tonnes(distance, e) / distance;
        // One-line oracle: burn/nmile = daily(e) / (24 e), so the ratio at
        // speeds e' and e is (e'/e)^2.
        let ratio = per_mile(15.0) / per_mile(12.0);
        assert!((ratio - 1.5625).abs() < 1e-12);
    }

    #[test]
    fn zero_length_transfer_is_free() {
        let m = FuelModel {
            base_tonnes_per_day: 30.0,
            reference_speed: 12.0,
            port_fee_per_lane: 100.0,
        };
        assert_eq!(m.sailing_tonnes(0.0, 14.0), 0.0);
        assert_eq!(sailing_days(0.0, 14.0), 0.0);
    }

    #[test]
    fn rejects_non_positive_fuel_price() {
        let err = derive_voyage_profiles(&[], &[], &[], &[], 0.0, 1.0);
        assert!(err.is_err());
    }
}
