//! Engine-agnostic MILP representation and the light presolve used by the
//! builtin solver.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone)]
pub struct MilpCol {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub integer: bool,
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub struct MilpRow {
    pub name: String,
    /// (column index, coefficient), column indices strictly increasing.
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// A minimization MILP over bounded columns.
#[derive(Debug, Clone, Default)]
pub struct MilpProblem {
    pub cols: Vec<MilpCol>,
    pub rows: Vec<MilpRow>,
}

impl MilpProblem {
    pub fn integer_count(&self) -> usize {
        self.cols.iter().filter(|c| c.integer).count()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.cols
            .iter()
            .zip(x)
            .map(|(c, v)| c.objective * v)
            .sum()
    }

    /// Largest scaled violation across all rows and bounds.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for (c, &v) in self.cols.iter().zip(x) {
            worst = worst.max(c.lower - v).max(v - c.upper);
        }
        for row in &self.rows {
            let lhs: f64 = row.terms.iter().map(|&(j, a)| a * x[j]).sum();
            let scale = row
                .terms
                .iter()
                .map(|&(j, a)| (a * x[j]).abs())
                .fold(row.rhs.abs().max(1.0), f64::max);
            let raw = match row.sense {
                Sense::Le => lhs - row.rhs,
                Sense::Ge => row.rhs - lhs,
                Sense::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(raw / scale);
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MilpStatus {
    Optimal,
    Feasible,
    Infeasible,
    Unbounded,
    TimeLimit,
}

#[derive(Debug, Clone)]
pub struct MilpOutcome {
    pub status: MilpStatus,
    /// Best integer-feasible point, full column order.
    pub solution: Option<Vec<f64>>,
    pub objective: Option<f64>,
    /// Proven lower bound on the optimum.
    pub best_bound: f64,
    pub nodes: u64,
    pub wall_seconds: f64,
}

/// Result of presolving: a reduced problem plus the mapping back to the
/// original column space.
pub struct Presolved {
    pub problem: MilpProblem,
    /// For each original column: Fixed(value) or Kept(new index) or
    /// Aliased(original canonical column, scale).
    map: Vec<ColMap>,
    pub objective_offset: f64,
    pub infeasible: bool,
}

#[derive(Debug, Clone, Copy)]
enum ColMap {
    Kept(usize),
    Fixed(f64),
    /// Equal to another original column times +-1.
    Alias { of: usize, scale: f64 },
}

impl Presolved {
    /// Lifts a reduced-space solution back to the original columns.
    pub fn restore(&self, reduced: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.map.len()];
        for (orig, m) in self.map.iter().enumerate() {
            match *m {
                ColMap::Kept(j) => out[orig] = reduced[j],
                ColMap::Fixed(v) => out[orig] = v,
                ColMap::Alias { .. } => {}
            }
        }
        for (orig, m) in self.map.iter().enumerate() {
            if let ColMap::Alias { of, scale } = *m {
                out[orig] = scale * resolve(&self.map, reduced, of);
            }
        }
        out
    }
}

fn resolve(map: &[ColMap], reduced: &[f64], col: usize) -> f64 {
    match map[col] {
        ColMap::Kept(j) => reduced[j],
        ColMap::Fixed(v) => v,
        ColMap::Alias { of, scale } => scale * resolve(map, reduced, of),
    }
}

const FEAS_TOL: f64 = 1e-7;

/// Light presolve: fixed-column elimination, zero-sum equality fixing, and
/// two-column equality aliasing. These reductions target the structure of
/// the deployment models (symmetric transfer pairs, transfers pinned to the
/// initial route) but are generally valid.
pub fn presolve(input: &MilpProblem) -> Presolved {
    let n = input.cols.len();
    let mut lower: Vec<f64> = input.cols.iter().map(|c| c.lower).collect();
    let mut upper: Vec<f64> = input.cols.iter().map(|c| c.upper).collect();
    let mut state: Vec<Option<ColMap>> = vec![None; n];
    let mut infeasible = false;

    // Union-find-free aliasing: canon[j] points at the representative.
    let mut alias_of: Vec<Option<(usize, f64)>> = vec![None; n];

    let canon = |alias_of: &Vec<Option<(usize, f64)>>, mut j: usize| -> (usize, f64) {
        let mut scale = 1.0;
        while let Some((k, s)) = alias_of[j] {
            scale *= s;
            j = k;
        }
        (j, scale)
    };

    let mut changed = true;
    let mut row_alive = vec![true; input.rows.len()];
    while changed && !infeasible {
        changed = false;
        for (ri, row) in input.rows.iter().enumerate() {
            if !row_alive[ri] || row.sense != Sense::Eq {
                continue;
            }
            // Rewrite terms over canonical, unfixed columns.
            let mut terms: Vec<(usize, f64)> = Vec::with_capacity(row.terms.len());
            let mut rhs = row.rhs;
            for &(j, a) in &row.terms {
                let (cj, s) = canon(&alias_of, j);
                if let Some(ColMap::Fixed(v)) = state[cj] {
                    rhs -= a * s * v;
                } else {
                    terms.push((cj, a * s));
                }
            }
            terms.sort_by_key(|t| t.0);
            terms.dedup_by(|b, a| {
                if a.0 == b.0 {
                    a.1 += b.1;
                    true
                } else {
                    false
                }
            });
            terms.retain(|t| t.1 != 0.0);

            if terms.is_empty() {
                if rhs.abs() > FEAS_TOL {
                    infeasible = true;
                }
                row_alive[ri] = false;
                changed = true;
                continue;
            }
            // All-positive (or all-negative) equality to zero over
            // non-negative columns: everything in it is zero.
            if rhs.abs() <= 1e-12 {
                let sign = terms[0].1.signum();
                let uniform = terms
                    .iter()
                    .all(|&(j, a)| a.signum() == sign && lower[j] >= 0.0);
                if uniform {
                    for &(j, _) in &terms {
                        if upper[j] < -FEAS_TOL {
                            infeasible = true;
                        }
                        state[j] = Some(ColMap::Fixed(0.0));
                        lower[j] = 0.0;
                        upper[j] = 0.0;
                    }
                    row_alive[ri] = false;
                    changed = true;
                    continue;
                }
            }
            // Doubleton equality a x - a y = 0 with matching bounds and
            // integrality: alias y to x.
            if terms.len() == 2 && rhs.abs() <= 1e-12 {
                let (j1, a1) = terms[0];
                let (j2, a2) = terms[1];
                if (a1 + a2).abs() <= 1e-12
                    && lower[j1] == lower[j2]
                    && upper[j1] == upper[j2]
                    && input.cols[j1].integer == input.cols[j2].integer
                {
                    alias_of[j2] = Some((j1, 1.0));
                    state[j2] = None;
                    row_alive[ri] = false;
                    changed = true;
                    continue;
                }
            }
            // Singleton equality: fix the column.
            if terms.len() == 1 {
                let (j, a) = terms[0];
                let v = rhs / a;
                let fractional = input.cols[j].integer && (v - v.round()).abs() > 1e-9;
                if v < lower[j] - FEAS_TOL || v > upper[j] + FEAS_TOL || fractional {
                    infeasible = true;
                } else {
                    state[j] = Some(ColMap::Fixed(v));
                    lower[j] = v;
                    upper[j] = v;
                }
                row_alive[ri] = false;
                changed = true;
            }
        }
    }

    // Assemble the reduced problem.
    let mut map = Vec::with_capacity(n);
    let mut cols = Vec::new();
    let mut new_index = vec![usize::MAX; n];
    for j in 0..n {
        let (cj, scale) = canon(&alias_of, j);
        if cj != j {
            map.push(ColMap::Alias { of: cj, scale });
            continue;
        }
        match state[j] {
            Some(ColMap::Fixed(v)) => map.push(ColMap::Fixed(v)),
            _ => {
                new_index[j] = cols.len();
                map.push(ColMap::Kept(cols.len()));
                cols.push(MilpCol {
                    name: input.cols[j].name.clone(),
                    lower: lower[j],
                    upper: upper[j],
                    integer: input.cols[j].integer,
                    objective: 0.0,
                });
            }
        }
    }
    // Objective: fold fixed columns into the offset, merge aliases.
    let mut objective_offset = 0.0;
    for j in 0..n {
        let c = input.cols[j].objective;
        if c == 0.0 {
            continue;
        }
        let (cj, scale) = canon(&alias_of, j);
        match state[cj] {
            Some(ColMap::Fixed(v)) => objective_offset += c * scale * v,
            _ => cols[new_index[cj]].objective += c * scale,
        }
    }

    let mut rows = Vec::new();
    for (ri, row) in input.rows.iter().enumerate() {
        if !row_alive[ri] {
            continue;
        }
        let mut terms: Vec<(usize, f64)> = Vec::with_capacity(row.terms.len());
        let mut rhs = row.rhs;
        for &(j, a) in &row.terms {
            let (cj, s) = canon(&alias_of, j);
            match state[cj] {
                Some(ColMap::Fixed(v)) => rhs -= a * s * v,
                _ => terms.push((new_index[cj], a * s)),
            }
        }
        terms.sort_by_key(|t| t.0);
        terms.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        terms.retain(|t| t.1 != 0.0);
        if terms.is_empty() {
            let ok = match row.sense {
                Sense::Le => rhs >= -FEAS_TOL,
                Sense::Ge => rhs <= FEAS_TOL,
                Sense::Eq => rhs.abs() <= FEAS_TOL,
            };
            if !ok {
                infeasible = true;
            }
            continue;
        }
        rows.push(MilpRow {
            name: row.name.clone(),
            terms,
            sense: row.sense,
            rhs,
        });
    }

    Presolved {
        problem: MilpProblem { cols, rows },
        map,
        objective_offset,
        infeasible,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(name: &str, lower: f64, upper: f64, integer: bool, obj: f64) -> MilpCol {
        MilpCol {
            name: name.into(),
            lower,
            upper,
            integer,
            objective: obj,
        }
    }

    #[test]
    fn zero_sum_equality_fixes_columns() {
        let p = MilpProblem {
            cols: vec![
                col("a", 0.0, 1.0, true, 1.0),
                col("b", 0.0, 1.0, true, 2.0),
                col("c", 0.0, 5.0, false, -1.0),
            ],
            rows: vec![MilpRow {
                name: "z".into(),
                terms: vec![(0, 1.0), (1, 3.0)],
                sense: Sense::Eq,
                rhs: 0.0,
            }],
        };
        let pre = presolve(&p);
        assert!(!pre.infeasible);
        assert_eq!(pre.problem.cols.len(), 1);
        let restored = pre.restore(&[4.0]);
        assert_eq!(restored, vec![0.0, 0.0, 4.0]);
    }

    #[test]
    fn symmetry_pair_is_aliased() {
        let p = MilpProblem {
            cols: vec![
                col("x", 0.0, 1.0, true, 1.0),
                col("y", 0.0, 1.0, true, 1.0),
            ],
            rows: vec![
                MilpRow {
                    name: "sym".into(),
                    terms: vec![(0, 1.0), (1, -1.0)],
                    sense: Sense::Eq,
                    rhs: 0.0,
                },
                MilpRow {
                    name: "pick".into(),
                    terms: vec![(0, 1.0), (1, 1.0)],
                    sense: Sense::Eq,
                    rhs: 2.0,
                },
            ],
        };
        let pre = presolve(&p);
        assert!(!pre.infeasible);
        // y aliased to x, then "pick" becomes 2x = 2 and fixes x.
        assert_eq!(pre.problem.rows.len(), 0);
        let restored = pre.restore(&[]);
        assert_eq!(restored, vec![1.0, 1.0]);
        assert_eq!(pre.objective_offset, 2.0);
    }
}
