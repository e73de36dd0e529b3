//! Branch and bound over LP relaxations.
//!
//! Node selection is best-bound with plunging: after a node is solved, one
//! child is explored immediately with a warm-started LP, the sibling goes
//! to the heap. Branching picks the most fractional integer column.

use super::milp::{presolve, MilpOutcome, MilpProblem, MilpStatus};
use super::simplex::{Basis, LpOptions, LpSolver, LpStatus};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

const INT_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct BnbOptions {
    /// Relative optimality gap at which the search stops.
    pub gap: f64,
    pub time_limit_seconds: f64,
    pub max_nodes: u64,
}

impl Default for BnbOptions {
    fn default() -> Self {
        Self {
            gap: 1e-9,
            time_limit_seconds: 3_600.0,
            max_nodes: u64::MAX,
        }
    }
}

struct OpenNode {
    bound: f64,
    seq: u64,
    changes: Vec<(usize, f64, f64)>,
}

impl PartialEq for OpenNode {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.seq == other.seq
    }
}
impl Eq for OpenNode {}
impl PartialOrd for OpenNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OpenNode {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; invert for best-first.
        other
            .bound
            .total_cmp(&self.bound)
            .then(other.seq.cmp(&self.seq))
    }
}

pub fn solve_milp(problem: &MilpProblem, opts: &BnbOptions) -> MilpOutcome {
    let start = Instant::now();
    let deadline = start + std::time::Duration::from_secs_f64(opts.time_limit_seconds);
    let pre = presolve(problem);
    if pre.infeasible {
        return MilpOutcome {
            status: MilpStatus::Infeasible,
            solution: None,
            objective: None,
            best_bound: f64::INFINITY,
            nodes: 0,
            wall_seconds: start.elapsed().as_secs_f64(),
        };
    }
    let reduced = &pre.problem;
    let solver = LpSolver::new(reduced);
    let n = reduced.cols.len();
    let root_lower: Vec<f64> = reduced.cols.iter().map(|c| c.lower).collect();
    let root_upper: Vec<f64> = reduced.cols.iter().map(|c| c.upper).collect();
    let integer: Vec<bool> = reduced.cols.iter().map(|c| c.integer).collect();

    let lp_opts = LpOptions {
        max_iterations: 0,
        deadline: Some(deadline),
    };

    let mut heap: BinaryHeap<OpenNode> = BinaryHeap::new();
    let mut seq = 0u64;
    let mut nodes = 0u64;
    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut timed_out = false;

    heap.push(OpenNode {
        bound: f64::NEG_INFINITY,
        seq,
        changes: Vec::new(),
    });

    let mut lower = vec![0.0; n];
    let mut upper = vec![0.0; n];

    'outer: while let Some(node) = heap.pop() {
        if let Some((best, _)) = &incumbent {
            if !improves(node.bound, *best, opts.gap) {
                continue; // bound already beaten
            }
        }
        if Instant::now() >= deadline || nodes >= opts.max_nodes {
            // Node still open; account for it in the final bound.
            heap.push(node);
            timed_out = true;
            break;
        }

        lower.copy_from_slice(&root_lower);
        upper.copy_from_slice(&root_upper);
        for &(j, lo, hi) in &node.changes {
            lower[j] = lower[j].max(lo);
            upper[j] = upper[j].min(hi);
        }

        // Plunge: keep diving on warm starts until the branch dies.
        let mut warm: Option<Basis> = None;
        let mut changes = node.changes;
        loop {
            let (sol, basis) = solver.solve(&lower, &upper, warm.as_ref(), &lp_opts);
            nodes += 1;
            match sol.status {
                LpStatus::Optimal => {}
                LpStatus::Infeasible => break,
                LpStatus::Unbounded => {
                    // A bounded MILP relaxation should not be unbounded at
                    // a node below the root; report honestly at the root.
                    if nodes == 1 {
                        return MilpOutcome {
                            status: MilpStatus::Unbounded,
                            solution: None,
                            objective: None,
                            best_bound: f64::NEG_INFINITY,
                            nodes,
                            wall_seconds: start.elapsed().as_secs_f64(),
                        };
                    }
                    break;
                }
                LpStatus::TimeLimit | LpStatus::IterationLimit | LpStatus::Numerical => {
                    timed_out = true;
                    // Treat the subtree as open so the bound stays valid.
                    heap.push(OpenNode {
                        bound: f64::NEG_INFINITY,
                        seq: next_seq(&mut seq),
                        changes: changes.clone(),
                    });
                    break 'outer;
                }
            }
            if let Some((best, _)) = &incumbent {
                if !improves(sol.objective, *best, opts.gap) {
                    break;
                }
            }
            let frac = most_fractional(&sol.x, &integer, &lower, &upper);
            match frac {
                None => {
                    let mut x = sol.x.clone();
                    snap_integers(&mut x, &integer);
                    let obj = reduced.objective_value(&x);
                    if incumbent.as_ref().map_or(true, |(b, _)| obj < *b) {
                        incumbent = Some((obj, x));
                    }
                    break;
                }
                Some(j) => {
                    let v = sol.x[j];
                    let floor = v.floor();
                    // Sibling (x >= ceil) to the heap, dive on x <= floor.
                    let mut sibling = changes.clone();
                    sibling.push((j, floor + 1.0, f64::INFINITY));
                    heap.push(OpenNode {
                        bound: sol.objective,
                        seq: next_seq(&mut seq),
                        changes: sibling,
                    });
                    changes.push((j, f64::NEG_INFINITY, floor));
                    upper[j] = upper[j].min(floor);
                    warm = basis;
                }
            }
            if Instant::now() >= deadline {
                timed_out = true;
                heap.push(OpenNode {
                    bound: f64::NEG_INFINITY,
                    seq: next_seq(&mut seq),
                    changes,
                });
                break 'outer;
            }
        }
    }

    let open_bound = heap
        .iter()
        .map(|n| n.bound)
        .fold(f64::INFINITY, f64::min);
    let wall = start.elapsed().as_secs_f64();
    match incumbent {
        Some((obj, x)) => {
            let full = pre.restore(&x);
            let objective = obj + pre.objective_offset;
            let best_bound = if heap.is_empty() {
                objective
            } else {
                (open_bound + pre.objective_offset).min(objective)
            };
            let status = if timed_out && !heap.is_empty() {
                MilpStatus::TimeLimit
            } else {
                MilpStatus::Optimal
            };
            MilpOutcome {
                status,
                solution: Some(full),
                objective: Some(objective),
                best_bound,
                nodes,
                wall_seconds: wall,
            }
        }
        None => MilpOutcome {
            status: if timed_out {
                MilpStatus::TimeLimit
            } else {
                MilpStatus::Infeasible
            },
            solution: None,
            objective: None,
            best_bound: if timed_out {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            },
            nodes,
            wall_seconds: wall,
        },
    }
}

fn next_seq(seq: &mut u64) -> u64 {
    *seq += 1;
    *seq
}

/// Does a node bound still beat the incumbent by more than the gap?
fn improves(bound: f64, incumbent: f64, gap: f64) -> bool {
    bound < incumbent - gap * incumbent.abs().max(1.0) - 1e-12
}

fn most_fractional(x: &[f64], integer: &[bool], lower: &[f64], upper: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, &v) in x.iter().enumerate() {
        if !integer[j] || lower[j] == upper[j] {
            continue;
        }
        let frac = v - v.floor();
        let dist = (frac - 0.5).abs();
        if frac > INT_TOL && frac < 1.0 - INT_TOL && best.map_or(true, |(_, d)| dist < d) {
            best = Some((j, dist));
        }
    }
    best.map(|(j, _)| j)
}

fn snap_integers(x: &mut [f64], integer: &[bool]) {
    for (v, &is_int) in x.iter_mut().zip(integer) {
        if is_int {
            let r = v.round();
            if (*v - r).abs() <= INT_TOL * 10.0 {
                *v = r;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::milp::{MilpCol, MilpRow, Sense};

    fn int_col(name: &str, upper: f64, obj: f64) -> MilpCol {
        MilpCol {
            name: name.into(),
            lower: 0.0,
            upper,
            integer: true,
            objective: obj,
        }
    }

    #[test]
    fn knapsack_matches_brute_force() {
        // max 5a + 4b + 3c st 2a + 3b + c <= 5, binaries.
        let p = MilpProblem {
            cols: vec![
                int_col("a", 1.0, -5.0),
                int_col("b", 1.0, -4.0),
                int_col("c", 1.0, -3.0),
            ],
            rows: vec![MilpRow {
                name: "w".into(),
                terms: vec![(0, 2.0), (1, 3.0), (2, 1.0)],
                sense: Sense::Le,
                rhs: 5.0,
            }],
        };
        let out = solve_milp(&p, &BnbOptions::default());
        assert_eq!(out.status, MilpStatus::Optimal);
        // Brute force: a+c = 8 with weight 3; a+b = 9 weight 5. Best -9.
        assert!((out.objective.unwrap() + 9.0).abs() < 1e-9);
    }

    #[test]
    fn bounded_integers_beyond_binary() {
        // min -3x - 2y st x + y <= 7, 2x + y <= 10, x,y integer in [0,6].
        let p = MilpProblem {
            cols: vec![int_col("x", 6.0, -3.0), int_col("y", 6.0, -2.0)],
            rows: vec![
                MilpRow {
                    name: "r1".into(),
                    terms: vec![(0, 1.0), (1, 1.0)],
                    sense: Sense::Le,
                    rhs: 7.0,
                },
                MilpRow {
                    name: "r2".into(),
                    terms: vec![(0, 2.0), (1, 1.0)],
                    sense: Sense::Le,
                    rhs: 10.0,
                },
            ],
        };
        let out = solve_milp(&p, &BnbOptions::default());
        assert_eq!(out.status, MilpStatus::Optimal);
        // Enumerate by hand: x=3,y=4 -> -17.
        assert!((out.objective.unwrap() + 17.0).abs() < 1e-9);
        let x = out.solution.unwrap();
        assert_eq!(x[0].round() as i64, 3);
        assert_eq!(x[1].round() as i64, 4);
    }

    #[test]
    fn integer_infeasibility() {
        // 2x = 1 with x integer.
        let p = MilpProblem {
            cols: vec![int_col("x", 10.0, 0.0)],
            rows: vec![MilpRow {
                name: "odd".into(),
                terms: vec![(0, 2.0)],
                sense: Sense::Eq,
                rhs: 1.0,
            }],
        };
        let out = solve_milp(&p, &BnbOptions::default());
        assert_eq!(out.status, MilpStatus::Infeasible);
    }

    #[test]
    fn mixed_integer_continuous() {
        // min -x - 10y st x <= 2.5 (cont), y binary, x + 4y <= 5.
        let p = MilpProblem {
            cols: vec![
                MilpCol {
                    name: "x".into(),
                    lower: 0.0,
                    upper: 2.5,
                    integer: false,
                    objective: -1.0,
                },
                int_col("y", 1.0, -10.0),
            ],
            rows: vec![MilpRow {
                name: "cap".into(),
                terms: vec![(0, 1.0), (1, 4.0)],
                sense: Sense::Le,
                rhs: 5.0,
            }],
        };
        let out = solve_milp(&p, &BnbOptions::default());
        assert_eq!(out.status, MilpStatus::Optimal);
        // y=1, x=1 -> -11.
        assert!((out.objective.unwrap() + 11.0).abs() < 1e-9);
    }
}
