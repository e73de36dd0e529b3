//! Route enumeration over trade lanes.
//!
//! A route is a directed cycle visiting a subset of lanes. Between the
//! destination of one lane and the origin of the next the ship sails in
//! ballast, so a cycle over lanes `l1..lk` has length
//! `sum(laden) + sum(gaps)`. Cycles that differ only by rotation are the
//! same route; we enumerate each one exactly once by fixing the smallest
//! lane id as the first element, which yields `(l-1)!` orderings per
//! `l`-subset.

use super::{InstanceError, RouteSpec};
use crate::ids::{LaneId, RouteId};

/// A lane with endpoint geometry on the synthetic plane.
#[derive(Debug, Clone, Copy)]
pub struct LaneEndpoints {
    pub id: LaneId,
    pub origin: [f64; 2],
    pub destination: [f64; 2],
    pub laden_distance: f64,
}

impl LaneEndpoints {
    pub fn from_points(id: LaneId, origin: [f64; 2], destination: [f64; 2]) -> Self {
        Self {
            id,
            origin,
            destination,
            laden_distance: dist(origin, destination),
        }
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Ballast-leg distance from the end of `from` to the start of `to`.
fn gap(from: &LaneEndpoints, to: &LaneEndpoints) -> f64 {
    dist(from.destination, to.origin)
}

/// Closed-form count of directed cycles over `n` lanes with subsets of size
/// at most `c_max`: sum over l of C(n, l) * (l-1)!.
pub fn route_count_formula(n: usize, c_max: usize) -> u64 {
    let mut total = 0u64;
    for l in 1..=c_max.min(n) {
        let mut choose = 1u64;
        for j in 0..l {
            choose = choose * (n - j) as u64 / (j + 1) as u64;
        }
        let mut fact = 1u64;
        for j in 1..l {
            fact *= j as u64;
        }
        total += choose * fact;
    }
    total
}

/// Enumerates every route over non-empty lane subsets of size at most
/// `c_max`. Routes are emitted sorted by (cycle length, lane sequence) and
/// numbered from zero in that order.
pub fn enumerate_routes(
    lanes: &[LaneEndpoints],
    c_max: usize,
) -> Result<Vec<RouteSpec>, InstanceError> {
    if lanes.is_empty() {
        return Err(InstanceError::EmptyLanes);
    }
    if c_max < 1 || c_max > lanes.len() {
        return Err(InstanceError::BadCycleCap {
            c_max,
            lanes: lanes.len(),
        });
    }
    let n = lanes.len();
    let mut sequences: Vec<Vec<usize>> = Vec::new();
    let mut subset: Vec<usize> = Vec::new();
    subsets(n, c_max, 0, &mut subset, &mut sequences);

    let mut routes = Vec::with_capacity(sequences.len());
    for seq in &sequences {
        // The cycle starts at the subset's smallest lane; rotation-equal
        // cycles therefore collapse to one canonical sequence.
        let mut total = 0.0;
        for (pos, &li) in seq.iter().enumerate() {
            let next = seq[(pos + 1) % seq.len()];
            total += lanes[li].laden_distance + gap(&lanes[li], &lanes[next]);
        }
        let lane_sum: f64 = seq.iter().map(|&li| lanes[li].laden_distance).sum();
        let sequence: Vec<LaneId> = seq.iter().map(|&li| lanes[li].id).collect();
        let spec = RouteSpec {
            id: RouteId(0), // renumbered after sorting
            lane_sequence: sequence,
            total_length: total,
            lane_length_sum: lane_sum,
            ballast_ratio: ratio(lane_sum, total)?,
        };
        routes.push(spec);
    }
    routes.sort_by(|a, b| {
        a.lane_sequence
            .len()
            .cmp(&b.lane_sequence.len())
            .then_with(|| a.lane_sequence.cmp(&b.lane_sequence))
    });
    for (i, r) in routes.iter_mut().enumerate() {
        r.id = RouteId(i as u32);
    }
    Ok(routes)
}

/// All directed cycles over subsets of {0..n} of size <= c_max, each cycle
/// written with its smallest member first.
fn subsets(n: usize, c_max: usize, start: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if !acc.is_empty() {
        let first = acc[0];
        let mut rest: Vec<usize> = acc[1..].to_vec();
        permute(&mut rest, 0, first, out);
    }
    if acc.len() == c_max {
        return;
    }
    for next in start..n {
        acc.push(next);
        subsets(n, c_max, next + 1, acc, out);
        acc.pop();
    }
}

fn permute(rest: &mut Vec<usize>, k: usize, first: usize, out: &mut Vec<Vec<usize>>) {
    if k == rest.len() {
        let mut cycle = Vec::with_capacity(rest.len() + 1);
        cycle.push(first);
        cycle.extend_from_slice(rest);
        out.push(cycle);
        return;
    }
    for i in k..rest.len() {
        rest.swap(k, i);
        permute(rest, k + 1, first, out);
        rest.swap(k, i);
    }
}

/// Fraction of a route's length not covered by laden trade lanes.
pub fn ballast_ratio(route: &RouteSpec) -> Result<f64, InstanceError> {
    ratio(route.lane_length_sum, route.total_length)
}

fn ratio(lane_sum: f64, total: f64) -> Result<f64, InstanceError> {
    if total <= 0.0 {
        return Err(InstanceError::NonPositiveRouteLength(total));
    }
    let r = 1.0 - lane_sum / total;
    Ok(r.clamp(0.0, 1.0))
}

/// Deterministic route ordering used by the route-search heuristic:
/// ascending ballast ratio, then total length, then id.
pub fn sort_routes_by_ballast_ratio(routes: &mut [RouteSpec]) {
    routes.sort_by(|a, b| {
        a.ballast_ratio
            .total_cmp(&b.ballast_ratio)
            .then(a.total_length.total_cmp(&b.total_length))
            .then(a.id.cmp(&b.id))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_lanes(n: usize) -> Vec<LaneEndpoints> {
        // Lanes spread around a circle so every gap distance is positive.
        (0..n)
            .map(|i| {
                let a = i as f64 / n as f64 * std::f64::consts::TAU;
                let o = [1000.0 * a.cos(), 1000.0 * a.sin()];
                let d = [1000.0 * (a + 0.7).cos(), 1000.0 * (a + 0.7).sin()];
                LaneEndpoints::from_points(LaneId(i as u32), o, d)
            })
            .collect()
    }

    #[test]
    fn six_lanes_full_depth_yields_415_routes() {
        let lanes = square_lanes(6);
        let routes = enumerate_routes(&lanes, 6).unwrap();
        assert_eq!(routes.len(), 415);
        assert_eq!(route_count_formula(6, 6), 415);
    }

    #[test]
    fn single_lane_single_route() {
        let lanes = square_lanes(1);
        let routes = enumerate_routes(&lanes, 1).unwrap();
        assert_eq!(routes.len(), 1);
        assert_eq!(routes[0].lane_sequence, vec![LaneId(0)]);
    }

    #[test]
    fn three_lanes_eight_routes() {
        // 3 singles + 3 pairs + 2 directed triangles.
        let lanes = square_lanes(3);
        let routes = enumerate_routes(&lanes, 3).unwrap();
        assert_eq!(routes.len(), 8);
        let triangles: Vec<_> = routes
            .iter()
            .filter(|r| r.lane_sequence.len() == 3)
            .collect();
        assert_eq!(triangles.len(), 2);
        assert_ne!(triangles[0].lane_sequence, triangles[1].lane_sequence);
    }

    #[test]
    fn ratios_stay_in_unit_interval() {
        let lanes = square_lanes(5);
        for r in enumerate_routes(&lanes, 4).unwrap() {
            assert!(r.ballast_ratio >= 0.0 && r.ballast_ratio <= 1.0);
            assert!(r.lane_length_sum <= r.total_length + 1e-9);
        }
    }

    #[test]
    fn ballast_ratio_evaluates_directly() {
        let route = RouteSpec {
            id: RouteId(0),
            lane_sequence: vec![LaneId(0)],
            total_length: 12_288.0,
            lane_length_sum: 6_144.0,
            ballast_ratio: 0.0,
        };
        assert!((ballast_ratio(&route).unwrap() - 0.5).abs() < 1e-12);

        let flat = RouteSpec {
            total_length: 10_000.0,
            lane_length_sum: 10_000.0,
            ..route.clone()
        };
        assert_eq!(ballast_ratio(&flat).unwrap(), 0.0);

        let broken = RouteSpec {
            total_length: 0.0,
            lane_length_sum: 0.0,
            ..route
        };
        assert!(ballast_ratio(&broken).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(enumerate_routes(&[], 1).is_err());
        let lanes = square_lanes(2);
        assert!(enumerate_routes(&lanes, 0).is_err());
        assert!(enumerate_routes(&lanes, 3).is_err());
    }
}
