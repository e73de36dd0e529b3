//! Second-stage market scenarios.
//!
//! A scenario is a joint move of three factors (fuel price, market demand,
//! freight rate), quantified as multiplicative scaling of the first-stage
//! parameters: up is 120%, flat is 100%, down is 80%. The base set holds
//! the thirteen admissible factor combinations with equal probability;
//! larger sets are built by adding uniformly perturbed variants of each
//! base scenario.

use crate::ids::ScenarioId;
use crate::instance::InstanceData;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCENARIO_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario set references instance {expected}, got {found}")]
    InstanceMismatch { expected: String, found: String },
    #[error("variants_per_base must be at least 1")]
    BadVariantCount,
    #[error("amplitude must lie strictly between 0 and 1, got {0}")]
    BadAmplitude(f64),
    #[error("inadmissible factor combination: {0:?}")]
    Inadmissible(FactorDirections),
    #[error("probabilities sum to {0}, expected 1")]
    BadProbabilitySum(f64),
    #[error("unsupported scenario schema version {found}, expected {expected}")]
    SchemaVersion { found: u32, expected: u32 },
    #[error("scenario file: {0}")]
    Io(#[from] std::io::Error),
    #[error("scenario file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Direction of one market factor over the second stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Up,
    Flat,
    Down,
}

impl Direction {
    pub fn multiplier(self) -> f64 {
        match self {
            Direction::Up => 1.2,
            Direction::Flat => 1.0,
            Direction::Down => 0.8,
        }
    }

    /// Encoding used for correlation analysis.
    pub fn sign(self) -> i64 {
        match self {
            Direction::Up => 1,
            Direction::Flat => 0,
            Direction::Down => -1,
        }
    }
}

/// Joint direction of the three stochastic factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorDirections {
    pub fuel_price: Direction,
    pub market_demand: Direction,
    pub freight_rate: Direction,
}

impl FactorDirections {
    pub const fn new(fuel: Direction, demand: Direction, freight: Direction) -> Self {
        Self {
            fuel_price: fuel,
            market_demand: demand,
            freight_rate: freight,
        }
    }
}

/// Whether a factor combination is economically plausible.
///
/// Freight follows the pressure of fuel cost pass-through and demand: when
/// both push the same way (or one is flat) the direction is forced; when
/// fuel and demand pull in opposite directions any freight move is allowed.
pub fn admissible(d: &FactorDirections) -> bool {
    use Direction::*;
    match (d.fuel_price, d.market_demand) {
        (Flat, Flat) => d.freight_rate == Flat,
        (Flat, Up) => d.freight_rate == Up,
        (Flat, Down) => d.freight_rate == Down,
        (Up, Flat) => d.freight_rate == Up,
        (Up, Up) => d.freight_rate == Up,
        (Up, Down) => true,
        (Down, Flat) => d.freight_rate == Down,
        (Down, Up) => true,
        (Down, Down) => d.freight_rate == Down,
    }
}

/// The thirteen admissible base combinations, in canonical order.
pub fn build_base_scenarios() -> Vec<FactorDirections> {
    use Direction::*;
    vec![
        FactorDirections::new(Flat, Flat, Flat),
        FactorDirections::new(Flat, Up, Up),
        FactorDirections::new(Flat, Down, Down),
        FactorDirections::new(Up, Flat, Up),
        FactorDirections::new(Up, Up, Up),
        FactorDirections::new(Up, Down, Flat),
        FactorDirections::new(Up, Down, Up),
        FactorDirections::new(Up, Down, Down),
        FactorDirections::new(Down, Flat, Down),
        FactorDirections::new(Down, Up, Flat),
        FactorDirections::new(Down, Up, Up),
        FactorDirections::new(Down, Up, Down),
        FactorDirections::new(Down, Down, Down),
    ]
}

/// Knobs for turning factor directions into parameter scaling.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingOptions {
    /// Share of voyage, transfer, ballast and port costs that moves with
    /// the fuel price. 1.0 scales those costs wholesale.
    pub fuel_cost_share: f64,
}

impl Default for ScalingOptions {
    fn default() -> Self {
        Self {
            fuel_cost_share: 1.0,
        }
    }
}

/// Per-entry multiplicative noise applied by scenario expansion to the
/// voyage and transfer cost tables, aligned with the instance profile
/// vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostPerturb {
    pub round_trip: Vec<f64>,
    pub transfer: Vec<f64>,
}

/// One second-stage scenario with its full parameter tables.
///
/// Demand, spot and idle-cost tables are stored explicitly. Voyage and
/// transfer costs are derived on demand: first-stage cost times the fuel
/// multiplier, times the expansion noise when present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: ScenarioId,
    pub directions: FactorDirections,
    pub probability: f64,
    /// Base scenario this one was expanded from, if any.
    pub derived_from: Option<ScenarioId>,
    /// Contract demand in the second stage, by contract.
    pub demand_p2: Vec<f64>,
    /// Spot volume by lane and capacity type.
    pub spot_volume_p2: Vec<Vec<f64>>,
    /// Spot revenue per tonne by lane and capacity type.
    pub spot_revenue_p2: Vec<Vec<f64>>,
    /// Ballast cost per day, by ship.
    pub ballast_cost_p2: Vec<f64>,
    /// Port cost per day, by ship.
    pub port_cost_p2: Vec<f64>,
    /// Effective multiplier on voyage and transfer costs.
    pub fuel_multiplier: f64,
    pub cost_perturb: Option<CostPerturb>,
}

impl Scenario {
    /// Second-stage cost of the voyage profile at `pos` in the instance
    /// profile table.
    pub fn round_trip_cost(&self, instance: &InstanceData, pos: usize) -> f64 {
        let base = instance.profiles.voyage[pos].round_trip_cost_p1 * self.fuel_multiplier;
        match &self.cost_perturb {
            Some(p) => base * p.round_trip[pos],
            None => base,
        }
    }

    /// Second-stage cost of the transfer profile at `pos`.
    pub fn transfer_cost(&self, instance: &InstanceData, pos: usize) -> f64 {
        let base = instance.profiles.transfer[pos].transfer_cost_p1 * self.fuel_multiplier;
        match &self.cost_perturb {
            Some(p) => base * p.transfer[pos],
            None => base,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionMeta {
    pub variants_per_base: usize,
    pub amplitude: f64,
    pub seed: u64,
}

/// A full scenario set tied to one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSet {
    pub schema_version: u32,
    /// Content hash of the instance these scenarios quantify.
    pub instance_hash: String,
    pub base_count: usize,
    pub expansion: Option<ExpansionMeta>,
    pub scenarios: Vec<Scenario>,
}

impl ScenarioSet {
    /// Builds the thirteen-scenario base set with equal probabilities.
    pub fn base(instance: &InstanceData, options: &ScalingOptions) -> Self {
        let directions = build_base_scenarios();
        let p = 1.0 / directions.len() as f64;
        let scenarios = directions
            .iter()
            .enumerate()
            .map(|(i, d)| apply_scaling(instance, *d, options, ScenarioId(i as u32), p))
            .collect();
        Self {
            schema_version: SCENARIO_SCHEMA_VERSION,
            instance_hash: instance.content_hash(),
            base_count: directions.len(),
            expansion: None,
            scenarios,
        }
    }

    /// A single-scenario set (probability one) picked out of an existing
    /// set; used for wait-and-see subproblems.
    pub fn single(&self, index: usize) -> Self {
        let mut s = self.scenarios[index].clone();
        s.probability = 1.0;
        Self {
            schema_version: self.schema_version,
            instance_hash: self.instance_hash.clone(),
            base_count: 1,
            expansion: None,
            scenarios: vec![s],
        }
    }

    /// The probability-weighted mean scenario: every stochastic parameter
    /// is replaced by its expectation across the set.
    pub fn mean(&self, instance: &InstanceData) -> Self {
        let n_profiles_rt = instance.profiles.voyage.len();
        let n_profiles_tf = instance.profiles.transfer.len();
        let mut mean = Scenario {
            id: ScenarioId(0),
            directions: FactorDirections::new(
                Direction::Flat,
                Direction::Flat,
                Direction::Flat,
            ),
            probability: 1.0,
            derived_from: None,
            demand_p2: vec![0.0; instance.contracts.len()],
            spot_volume_p2: vec![
                vec![0.0; instance.capacity_type_count()];
                instance.lanes.len()
            ],
            spot_revenue_p2: vec![
                vec![0.0; instance.capacity_type_count()];
                instance.lanes.len()
            ],
            ballast_cost_p2: vec![0.0; instance.ships.len()],
            port_cost_p2: vec![0.0; instance.ships.len()],
            fuel_multiplier: 1.0,
            cost_perturb: Some(CostPerturb {
                round_trip: vec![0.0; n_profiles_rt],
                transfer: vec![0.0; n_profiles_tf],
            }),
        };
        for s in &self.scenarios {
            let w = s.probability;
            for (acc, v) in mean.demand_p2.iter_mut().zip(&s.demand_p2) {
                *acc += w * v;
            }
            for (accs, vs) in mean.spot_volume_p2.iter_mut().zip(&s.spot_volume_p2) {
                for (acc, v) in accs.iter_mut().zip(vs) {
                    *acc += w * v;
                }
            }
            for (accs, vs) in mean.spot_revenue_p2.iter_mut().zip(&s.spot_revenue_p2) {
                for (acc, v) in accs.iter_mut().zip(vs) {
                    *acc += w * v;
                }
            }
            for (acc, v) in mean.ballast_cost_p2.iter_mut().zip(&s.ballast_cost_p2) {
                *acc += w * v;
            }
            for (acc, v) in mean.port_cost_p2.iter_mut().zip(&s.port_cost_p2) {
                *acc += w * v;
            }
            let perturb = mean.cost_perturb.as_mut().unwrap();
            for pos in 0..n_profiles_rt {
                let noise = s.cost_perturb.as_ref().map_or(1.0, |p| p.round_trip[pos]);
                perturb.round_trip[pos] += w * s.fuel_multiplier * noise;
            }
            for pos in 0..n_profiles_tf {
                let noise = s.cost_perturb.as_ref().map_or(1.0, |p| p.transfer[pos]);
                perturb.transfer[pos] += w * s.fuel_multiplier * noise;
            }
        }
        Self {
            schema_version: self.schema_version,
            instance_hash: self.instance_hash.clone(),
            base_count: 1,
            expansion: None,
            scenarios: vec![mean],
        }
    }

    pub fn probability_sum(&self) -> f64 {
        self.scenarios.iter().map(|s| s.probability).sum()
    }

    /// Errors unless probabilities sum to one within 1e-12 and the set
    /// matches the given instance.
    pub fn check_against(&self, instance: &InstanceData) -> Result<(), ScenarioError> {
        let hash = instance.content_hash();
        if hash != self.instance_hash {
            return Err(ScenarioError::InstanceMismatch {
                expected: self.instance_hash.clone(),
                found: hash,
            });
        }
        let sum = self.probability_sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(ScenarioError::BadProbabilitySum(sum));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let set: ScenarioSet = serde_json::from_str(text)?;
        if set.schema_version != SCENARIO_SCHEMA_VERSION {
            return Err(ScenarioError::SchemaVersion {
                found: set.schema_version,
                expected: SCENARIO_SCHEMA_VERSION,
            });
        }
        Ok(set)
    }

    pub fn write_json_file(&self, path: &std::path::Path) -> Result<(), ScenarioError> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read_json_file(path: &std::path::Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

/// Quantifies one factor combination against an instance.
///
/// The demand direction scales contract demand and spot volume; the freight
/// direction scales spot revenue; the fuel direction scales the fuel share
/// of voyage, transfer, ballast and port costs.
pub fn apply_scaling(
    instance: &InstanceData,
    directions: FactorDirections,
    options: &ScalingOptions,
    id: ScenarioId,
    probability: f64,
) -> Scenario {
    let m_demand = directions.market_demand.multiplier();
    let m_freight = directions.freight_rate.multiplier();
    let m_fuel = 1.0 + options.fuel_cost_share * (directions.fuel_price.multiplier() - 1.0);
    Scenario {
        id,
        directions,
        probability,
        derived_from: None,
        demand_p2: instance
            .contracts
            .iter()
            .map(|c| m_demand * c.demand_p1)
            .collect(),
        spot_volume_p2: instance
            .lanes
            .iter()
            .map(|l| l.spot_volume_p1_by_type.iter().map(|v| m_demand * v).collect())
            .collect(),
        spot_revenue_p2: instance
            .lanes
            .iter()
            .map(|l| {
                l.spot_revenue_p1_by_type
                    .iter()
                    .map(|v| m_freight * v)
                    .collect()
            })
            .collect(),
        ballast_cost_p2: instance
            .ships
            .iter()
            .map(|s| m_fuel * s.ballast_cost_rate_p1)
            .collect(),
        port_cost_p2: instance
            .ships
            .iter()
            .map(|s| m_fuel * s.port_cost_rate_p1)
            .collect(),
        fuel_multiplier: m_fuel,
        cost_perturb: None,
    }
}

/// Expands a set by adding `variants_per_base` perturbed copies of each
/// scenario. Every stochastic parameter of a variant is its base value
/// times an independent uniform draw from `[1 - amplitude, 1 + amplitude]`;
/// probabilities are re-normalized to be equal.
pub fn expand_scenarios(
    base: &ScenarioSet,
    instance: &InstanceData,
    variants_per_base: usize,
    amplitude: f64,
    seed: u64,
) -> Result<ScenarioSet, ScenarioError> {
    if variants_per_base < 1 {
        return Err(ScenarioError::BadVariantCount);
    }
    if amplitude <= 0.0 || amplitude >= 1.0 {
        return Err(ScenarioError::BadAmplitude(amplitude));
    }
    let total = base.scenarios.len() * (1 + variants_per_base);
    let p = 1.0 / total as f64;
    let mut scenarios = Vec::with_capacity(total);
    for s in &base.scenarios {
        let mut copy = s.clone();
        copy.probability = p;
        scenarios.push(copy);
    }
    for s in &base.scenarios {
        for variant in 0..variants_per_base {
            // Seed split per (base scenario, variant) so expansion order
            // and parallelism cannot change the draw.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((s.id.0 as u64) << 32 | variant as u64);
            let mut draw = |base_value: f64| {
                base_value * rng.gen_range(1.0 - amplitude..=1.0 + amplitude)
            };
            let base_perturb_rt =
                |pos: usize| s.cost_perturb.as_ref().map_or(1.0, |p| p.round_trip[pos]);
            let base_perturb_tf =
                |pos: usize| s.cost_perturb.as_ref().map_or(1.0, |p| p.transfer[pos]);
            let id = ScenarioId(scenarios.len() as u32);
            scenarios.push(Scenario {
                id,
                directions: s.directions,
                probability: p,
                derived_from: Some(s.id),
                demand_p2: s.demand_p2.iter().map(|&v| draw(v)).collect(),
                spot_volume_p2: s
                    .spot_volume_p2
                    .iter()
                    .map(|row| row.iter().map(|&v| draw(v)).collect())
                    .collect(),
                spot_revenue_p2: s
                    .spot_revenue_p2
                    .iter()
                    .map(|row| row.iter().map(|&v| draw(v)).collect())
                    .collect(),
                ballast_cost_p2: s.ballast_cost_p2.iter().map(|&v| draw(v)).collect(),
                port_cost_p2: s.port_cost_p2.iter().map(|&v| draw(v)).collect(),
                fuel_multiplier: s.fuel_multiplier,
                cost_perturb: Some(CostPerturb {
                    round_trip: (0..instance.profiles.voyage.len())
                        .map(|pos| draw(base_perturb_rt(pos)))
                        .collect(),
                    transfer: (0..instance.profiles.transfer.len())
                        .map(|pos| draw(base_perturb_tf(pos)))
                        .collect(),
                }),
            });
        }
    }
    // Renumber so ids stay dense.
    for (i, s) in scenarios.iter_mut().enumerate() {
        s.id = ScenarioId(i as u32);
    }
    Ok(ScenarioSet {
        schema_version: base.schema_version,
        instance_hash: base.instance_hash.clone(),
        base_count: base.scenarios.len(),
        expansion: Some(ExpansionMeta {
            variants_per_base,
            amplitude,
            seed,
        }),
        scenarios,
    })
}

/// Pairwise correlations of the three factor directions under the set's
/// probabilities, with factors encoded up/flat/down as +1/0/-1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    /// Order: fuel price, market demand, freight rate. Entries involving a
    /// zero-variance factor are NaN.
    pub matrix: [[f64; 3]; 3],
    /// Which factors have zero variance across the set.
    pub degenerate: [bool; 3],
}

/// Computes the factor correlation matrix. Uses exact integer arithmetic
/// when all probabilities are equal, so the base set reproduces its
/// rational correlations without rounding.
pub fn factor_correlations(set: &ScenarioSet) -> CorrelationReport {
    let n = set.scenarios.len();
    assert!(n >= 2, "correlations need at least two scenarios");
    let signs: Vec<[i64; 3]> = set
        .scenarios
        .iter()
        .map(|s| {
            [
                s.directions.fuel_price.sign(),
                s.directions.market_demand.sign(),
                s.directions.freight_rate.sign(),
            ]
        })
        .collect();
    let equal_probs = set
        .scenarios
        .iter()
        .all(|s| (s.probability - 1.0 / n as f64).abs() < 1e-15);

    let (mut cov, mut var) = ([[0.0f64; 3]; 3], [0.0f64; 3]);
    if equal_probs {
        // n*cov and n*var stay integer under the +1/0/-1 encoding.
        let mut sum = [0i64; 3];
        let mut sum_sq = [0i64; 3];
        let mut sum_xy = [[0i64; 3]; 3];
        for row in &signs {
            for a in 0..3 {
                sum[a] += row[a];
                sum_sq[a] += row[a] * row[a];
                for b in 0..3 {
                    sum_xy[a][b] += row[a] * row[b];
                }
            }
        }
        let n = n as i64;
        for a in 0..3 {
            var[a] = (n * sum_sq[a] - sum[a] * sum[a]) as f64;
            for b in 0..3 {
                cov[a][b] = (n * sum_xy[a][b] - sum[a] * sum[b]) as f64;
            }
        }
    } else {
        let mut mean = [0.0f64; 3];
        for (s, row) in set.scenarios.iter().zip(&signs) {
            for a in 0..3 {
                mean[a] += s.probability * row[a] as f64;
            }
        }
        for (s, row) in set.scenarios.iter().zip(&signs) {
            for a in 0..3 {
                let da = row[a] as f64 - mean[a];
                var[a] += s.probability * da * da;
                for b in 0..3 {
                    let db = row[b] as f64 - mean[b];
                    cov[a][b] += s.probability * da * db;
                }
            }
        }
    }

    let degenerate = [var[0] == 0.0, var[1] == 0.0, var[2] == 0.0];
    let mut matrix = [[f64::NAN; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            if degenerate[a] || degenerate[b] {
                continue;
            }
            matrix[a][b] = if a == b {
                1.0
            } else {
                cov[a][b] / (var[a] * var[b]).sqrt()
            };
        }
    }
    CorrelationReport { matrix, degenerate }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, Dims, ParamRanges};

    fn small_instance() -> InstanceData {
        let dims = Dims {
            ships: 3,
            lanes: 2,
            contracts: 2,
            capacity_types: 2,
            speeds: 2,
            c_max: 2,
            routes_per_ship: None,
        };
        generate_instance(11, &dims, &ParamRanges::default()).unwrap()
    }

    #[test]
    fn base_set_has_thirteen_equal_scenarios() {
        let inst = small_instance();
        let set = ScenarioSet::base(&inst, &ScalingOptions::default());
        assert_eq!(set.scenarios.len(), 13);
        assert!((set.probability_sum() - 1.0).abs() < 1e-12);
        for s in &set.scenarios {
            assert!((s.probability - 1.0 / 13.0).abs() < 1e-15);
            assert!(admissible(&s.directions));
        }
    }

    #[test]
    fn scenario_six_is_fuel_up_demand_down_freight_flat() {
        let rows = build_base_scenarios();
        assert_eq!(
            rows[5],
            FactorDirections::new(Direction::Up, Direction::Down, Direction::Flat)
        );
    }

    #[test]
    fn marginals_are_5_3_5_over_13() {
        let rows = build_base_scenarios();
        for pick in [0usize, 1, 2] {
            let mut counts = [0; 3];
            for r in &rows {
                let d = match pick {
                    0 => r.fuel_price,
                    1 => r.market_demand,
                    _ => r.freight_rate,
                };
                match d {
                    Direction::Up => counts[0] += 1,
                    Direction::Flat => counts[1] += 1,
                    Direction::Down => counts[2] += 1,
                }
            }
            assert_eq!(counts, [5, 3, 5]);
        }
    }

    #[test]
    fn admissibility_table() {
        use Direction::*;
        assert!(!admissible(&FactorDirections::new(Flat, Up, Down)));
        assert!(admissible(&FactorDirections::new(Up, Down, Flat)));
        assert!(admissible(&FactorDirections::new(Flat, Flat, Flat)));
        assert!(!admissible(&FactorDirections::new(Down, Down, Up)));
        assert!(admissible(&FactorDirections::new(Down, Up, Down)));
    }

    #[test]
    fn base_correlations_are_exact() {
        let inst = small_instance();
        let set = ScenarioSet::base(&inst, &ScalingOptions::default());
        let report = factor_correlations(&set);
        assert_eq!(report.degenerate, [false, false, false]);
        let m = report.matrix;
        assert_eq!(m[0][0], 1.0);
        assert_eq!(m[0][1], -0.4);
        assert_eq!(m[1][0], -0.4);
        assert_eq!(m[0][2], 0.4);
        assert_eq!(m[1][2], 0.4);
    }

    #[test]
    fn degenerate_factor_is_flagged() {
        let inst = small_instance();
        let mut set = ScenarioSet::base(&inst, &ScalingOptions::default());
        set.scenarios.truncate(2);
        set.scenarios[1] = set.scenarios[0].clone();
        set.scenarios[0].probability = 0.5;
        set.scenarios[1].probability = 0.5;
        let report = factor_correlations(&set);
        assert_eq!(report.degenerate, [true, true, true]);
        assert!(report.matrix[0][1].is_nan());
    }

    #[test]
    fn flat_triple_reproduces_first_stage() {
        let inst = small_instance();
        let s = apply_scaling(
            &inst,
            FactorDirections::new(Direction::Flat, Direction::Flat, Direction::Flat),
            &ScalingOptions::default(),
            ScenarioId(0),
            1.0,
        );
        for (c, d) in inst.contracts.iter().zip(&s.demand_p2) {
            assert_eq!(c.demand_p1, *d);
        }
        assert_eq!(s.fuel_multiplier, 1.0);
    }

    #[test]
    fn demand_up_scales_contracts_by_1_2() {
        let inst = small_instance();
        let s = apply_scaling(
            &inst,
            FactorDirections::new(Direction::Flat, Direction::Up, Direction::Up),
            &ScalingOptions::default(),
            ScenarioId(0),
            1.0,
        );
        for (c, d) in inst.contracts.iter().zip(&s.demand_p2) {
            assert!((d - 1.2 * c.demand_p1).abs() < 1e-9);
        }
    }

    #[test]
    fn demand_down_from_176_150_lands_at_140_920() {
        assert!((0.8 * 176_150.0 - 140_920.0_f64).abs() < 1e-9);
        // and the scaled value stays inside the published stochastic range
        assert!((115_900.0..=211_380.0).contains(&140_920.0));
    }

    #[test]
    fn scaling_is_monotone_in_demand_direction() {
        let inst = small_instance();
        let mk = |d| {
            apply_scaling(
                &inst,
                FactorDirections::new(Direction::Down, d, Direction::Down),
                &ScalingOptions::default(),
                ScenarioId(0),
                1.0,
            )
        };
        let up = mk(Direction::Up);
        let flat = mk(Direction::Flat);
        let down = mk(Direction::Down);
        for c in 0..inst.contracts.len() {
            assert!(up.demand_p2[c] >= flat.demand_p2[c]);
            assert!(flat.demand_p2[c] >= down.demand_p2[c]);
        }
    }

    #[test]
    fn expansion_by_three_gives_52_within_bounds() {
        let inst = small_instance();
        let base = ScenarioSet::base(&inst, &ScalingOptions::default());
        let expanded = expand_scenarios(&base, &inst, 3, 0.15, 99).unwrap();
        assert_eq!(expanded.scenarios.len(), 52);
        assert!((expanded.probability_sum() - 1.0).abs() < 1e-12);
        for s in &expanded.scenarios {
            assert!((s.probability - 1.0 / 52.0).abs() < 1e-15);
            assert!(admissible(&s.directions));
            if let Some(from) = s.derived_from {
                let b = &base.scenarios[from.index()];
                for (v, bv) in s.demand_p2.iter().zip(&b.demand_p2) {
                    assert!(*v >= 0.85 * bv - 1e-9 && *v <= 1.15 * bv + 1e-9);
                }
                let p = s.cost_perturb.as_ref().unwrap();
                for f in p.round_trip.iter().chain(&p.transfer) {
                    assert!((0.85..=1.15).contains(f));
                }
            }
        }
        assert!(expand_scenarios(&base, &inst, 0, 0.15, 0).is_err());
        assert!(expand_scenarios(&base, &inst, 1, 0.0, 0).is_err());
    }

    #[test]
    fn expansion_is_seed_deterministic() {
        let inst = small_instance();
        let base = ScenarioSet::base(&inst, &ScalingOptions::default());
        let a = expand_scenarios(&base, &inst, 2, 0.15, 5).unwrap();
        let b = expand_scenarios(&base, &inst, 2, 0.15, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip_preserves_set() {
        let inst = small_instance();
        let set = ScenarioSet::base(&inst, &ScalingOptions::default());
        let text = set.to_json().unwrap();
        let back = ScenarioSet::from_json(&text).unwrap();
        assert_eq!(set, back);
        assert!(back.check_against(&inst).is_ok());
    }
}
