//! Branching-point optimization for a fixed topology.
//!
//! For fixed flows the cost is a convex sum of weighted edge lengths.
//! Each iteration freezes the edge lengths of the previous iterate as
//! weights and solves the resulting quadratic exactly per spatial
//! dimension by elimination on leaves of the branching-point subtree, so
//! one iteration costs O(nodes * dim). Iteration stops once the relative
//! cost improvement drops to `eta`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::BotError;
use crate::problem::BotProblem;
use crate::topology::{compute_edge_flows, FlowAssignment, Topology};

/// Solver knobs; the defaults follow the reference experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Relative-improvement convergence threshold.
    pub eta: f64,
    /// Iteration cap; hitting it flags the result as non-converged.
    pub max_iters: usize,
    /// Floor for edge lengths entering the reweighted system.
    pub clip: f64,
    /// Exponent on edge lengths in the cost; 1 is the standard problem,
    /// 2 is exactly quadratic and solves in a single iteration.
    pub beta: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            eta: 1e-6,
            max_iters: 2000,
            clip: 1e-7,
            beta: 1.0,
        }
    }
}

impl SolverConfig {
    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn validate(&self) -> Result<(), BotError> {
        if !(self.eta > 0.0) || !(self.clip > 0.0) || !(self.beta >= 1.0) {
            return Err(BotError::InvalidArgument(format!(
                "solver config out of range: eta {} clip {} beta {}",
                self.eta, self.clip, self.beta
            )));
        }
        Ok(())
    }
}

/// Converged (or capped) branching-point configuration with its cost
/// history. The trace is non-increasing; a final reweighted step that
/// would raise the cost (possible only under active clipping) is
/// rolled back instead of kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryResult {
    pub bp_coords: Vec<Vec<f64>>,
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
    pub cost_trace: Vec<f64>,
}

/// Initial branching-point placement for the optimizer.
pub enum BpInit<'a> {
    /// Uniform in the axis-aligned bounding box of the terminals.
    Random(u64),
    Given(&'a [Vec<f64>]),
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `|m|^alpha` with the `0^0 = 1` convention, so zero-flow edges still
/// count their full length in the Steiner limit `alpha = 0`.
pub(crate) fn edge_weight(flow: f64, alpha: f64) -> f64 {
    flow.abs().powf(alpha)
}

/// Full node coordinate table: terminal positions followed by `bp_coords`.
pub fn assemble_coords(problem: &BotProblem, bp_coords: &[Vec<f64>]) -> Vec<Vec<f64>> {
    problem
        .terminals
        .iter()
        .map(|t| t.pos.clone())
        .chain(bp_coords.iter().cloned())
        .collect()
}

/// The transport cost `sum_e |m_e|^alpha * len_e^beta` of a configuration.
pub fn bot_cost(
    topology: &Topology,
    coords: &[Vec<f64>],
    flows: &FlowAssignment,
    alpha: f64,
    beta: f64,
) -> f64 {
    topology
        .edges
        .iter()
        .zip(&flows.flow)
        .map(|(&(a, b), &m)| {
            let w = edge_weight(m, alpha);
            if w == 0.0 {
                0.0
            } else if beta == 1.0 {
                w * dist(&coords[a], &coords[b])
            } else {
                w * dist(&coords[a], &coords[b]).powf(beta)
            }
        })
        .sum()
}

/// One reweighted step: solves the linearized stationarity system built
/// at `coords` exactly and returns the updated branching-point block.
/// Edge lengths below `clip` are floored. Branching points whose entire
/// incident weight vanishes (possible for zero-flow edges at
/// `alpha > 0`) are left where they are; their position does not enter
/// the cost.
pub fn irls_iteration(
    topology: &Topology,
    coords: &[Vec<f64>],
    flows: &FlowAssignment,
    alpha: f64,
    clip: f64,
    beta: f64,
) -> Vec<Vec<f64>> {
    let n = topology.n_terminals;
    let m = topology.n_bps;
    let dim = coords[0].len();

    // Quadratic-form coefficient per edge.
    let coeff: Vec<f64> = topology
        .edges
        .iter()
        .zip(&flows.flow)
        .map(|(&(a, b), &flow)| {
            let w = edge_weight(flow, alpha);
            if w == 0.0 {
                0.0
            } else {
                let len = dist(&coords[a], &coords[b]).max(clip);
                if beta == 1.0 {
                    w / len
                } else if beta == 2.0 {
                    w
                } else {
                    w * len.powf(beta - 2.0)
                }
            }
        })
        .collect();

    // Per-BP diagonal, right-hand side (one entry per dimension) and
    // BP-BP adjacency restricted to positive coefficients.
    let mut diag = vec![0.0f64; m];
    let mut rhs = vec![vec![0.0f64; dim]; m];
    let mut bp_adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    for (e, &(a, b)) in topology.edges.iter().enumerate() {
        let c = coeff[e];
        if c == 0.0 {
            continue;
        }
        for (this, other) in [(a, b), (b, a)] {
            if this >= n {
                let i = this - n;
                diag[i] += c;
                if other < n {
                    for d in 0..dim {
                        rhs[i][d] += c * coords[other][d];
                    }
                } else {
                    bp_adj[i].push((other - n, c));
                }
            }
        }
    }

    let mut new_bp: Vec<Vec<f64>> = coords[n..].to_vec();
    let mut eliminated = vec![false; m];
    let mut remaining: Vec<usize> = bp_adj.iter().map(|l| l.len()).collect();
    for i in 0..m {
        if diag[i] == 0.0 {
            eliminated[i] = true; // unconstrained, keep previous position
        }
    }
    // Eliminate leaves of the BP subtree in ascending-id order, then
    // back-substitute.
    let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..m)
        .filter(|&i| !eliminated[i] && remaining[i] <= 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut order: Vec<(usize, Option<(usize, f64)>)> = Vec::with_capacity(m);
    while let Some(std::cmp::Reverse(i)) = heap.pop() {
        if eliminated[i] {
            continue;
        }
        let link = bp_adj[i]
            .iter()
            .copied()
            .find(|&(j, _)| !eliminated[j]);
        eliminated[i] = true;
        if let Some((j, c)) = link {
            let factor = c / diag[i];
            diag[j] -= factor * c;
            for d in 0..dim {
                rhs[j][d] += factor * rhs[i][d];
            }
            remaining[j] -= 1;
            if remaining[j] <= 1 {
                heap.push(std::cmp::Reverse(j));
            }
        }
        order.push((i, link));
    }
    for &(i, link) in order.iter().rev() {
        match link {
            None => {
                for d in 0..dim {
                    new_bp[i][d] = rhs[i][d] / diag[i];
                }
            }
            Some((j, c)) => {
                for d in 0..dim {
                    new_bp[i][d] = (rhs[i][d] + c * new_bp[j][d]) / diag[i];
                }
            }
        }
    }
    new_bp
}

/// Runs the reweighted iteration until the relative improvement drops to
/// `config.eta` or `config.max_iters` is reached (flagged, not an error).
pub fn optimize_branching_points(
    topology: &Topology,
    problem: &BotProblem,
    init: BpInit,
    config: &SolverConfig,
) -> Result<GeometryResult, BotError> {
    config.validate()?;
    let flows = compute_edge_flows(topology, problem)?;
    optimize_with_flows(topology, problem, &flows, init, config)
}

/// Same as [`optimize_branching_points`] for callers that already hold
/// the flow assignment.
pub fn optimize_with_flows(
    topology: &Topology,
    problem: &BotProblem,
    flows: &FlowAssignment,
    init: BpInit,
    config: &SolverConfig,
) -> Result<GeometryResult, BotError> {
    let m = topology.n_bps;
    let dim = problem.dim;
    let bp_init: Vec<Vec<f64>> = match init {
        BpInit::Random(seed) => {
            let (lo, hi) = problem.bounding_box();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..m)
                .map(|_| {
                    (0..dim)
                        .map(|d| {
                            if lo[d] == hi[d] {
                                lo[d]
                            } else {
                                rng.gen_range(lo[d]..hi[d])
                            }
                        })
                        .collect()
                })
                .collect()
        }
        BpInit::Given(coords) => {
            if coords.len() != m || coords.iter().any(|c| c.len() != dim) {
                return Err(BotError::InvalidArgument(format!(
                    "init must supply {m} branching points of dimension {dim}"
                )));
            }
            coords.to_vec()
        }
    };

    let mut coords = assemble_coords(problem, &bp_init);
    let n = topology.n_terminals;
    let mut cost = bot_cost(topology, &coords, flows, problem.alpha, config.beta);
    let mut trace = vec![cost];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iters {
        let new_bp = irls_iteration(
            topology,
            &coords,
            flows,
            problem.alpha,
            config.clip,
            config.beta,
        );
        let previous = coords[n..].to_vec();
        coords[n..].clone_from_slice(&new_bp);
        let new_cost = bot_cost(topology, &coords, flows, problem.alpha, config.beta);
        iterations += 1;
        if new_cost > cost {
            // Only possible when clipping distorted the surrogate; the
            // step is not an improvement, so roll it back and stop.
            coords[n..].clone_from_slice(&previous);
            converged = true;
            break;
        }
        let improvement = (cost - new_cost) / new_cost;
        cost = new_cost;
        trace.push(cost);
        if improvement <= config.eta {
            converged = true;
            break;
        }
    }
    Ok(GeometryResult {
        bp_coords: coords[n..].to_vec(),
        cost,
        iterations,
        converged,
        cost_trace: trace,
    })
}

/// Analytic gradient of the cost with respect to each branching point,
/// `None` where an incident edge is shorter than `clip` (the gradient is
/// undefined at coincidence).
pub fn bp_gradient(
    topology: &Topology,
    coords: &[Vec<f64>],
    flows: &FlowAssignment,
    alpha: f64,
    clip: f64,
) -> Vec<Option<Vec<f64>>> {
    let n = topology.n_terminals;
    let m = topology.n_bps;
    let dim = coords[0].len();
    let mut grad: Vec<Option<Vec<f64>>> = vec![Some(vec![0.0; dim]); m];
    for (e, &(a, b)) in topology.edges.iter().enumerate() {
        let w = edge_weight(flows.flow[e], alpha);
        let len = dist(&coords[a], &coords[b]);
        for (this, other) in [(a, b), (b, a)] {
            if this < n {
                continue;
            }
            let i = this - n;
            if len <= clip {
                grad[i] = None;
            }
            if let Some(g) = grad[i].as_mut() {
                for d in 0..dim {
                    g[d] += w * (coords[this][d] - coords[other][d]) / len;
                }
            }
        }
    }
    grad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{generate_random_problem, Terminal};
    use crate::topology::{enumerate_full_topologies, star_topology};

    fn fork_problem(alpha: f64) -> (BotProblem, Topology) {
        let p = BotProblem::new(
            alpha,
            2,
            vec![
                Terminal {
                    pos: vec![0.0, 0.0],
                    mu: 1.0,
                },
                Terminal {
                    pos: vec![1.0, 1.0],
                    mu: -0.5,
                },
                Terminal {
                    pos: vec![1.0, -1.0],
                    mu: -0.5,
                },
            ],
        )
        .unwrap();
        let t = star_topology(&p);
        (p, t)
    }

    #[test]
    fn cost_of_right_angle_star() {
        let p = BotProblem::new(
            1.0,
            2,
            vec![
                Terminal {
                    pos: vec![0.0, 0.0],
                    mu: 1.0,
                },
                Terminal {
                    pos: vec![1.0, 0.0],
                    mu: -0.5,
                },
                Terminal {
                    pos: vec![0.0, 1.0],
                    mu: -0.5,
                },
            ],
        )
        .unwrap();
        let t = star_topology(&p);
        let flows = compute_edge_flows(&t, &p).unwrap();
        let coords = assemble_coords(&p, &[vec![0.0, 0.0]]);
        let cost = bot_cost(&t, &coords, &flows, p.alpha, 1.0);
        assert!((cost - 1.0).abs() < 1e-15);

        // Homogeneity: scaling all coordinates scales the cost.
        let scaled: Vec<Vec<f64>> = coords
            .iter()
            .map(|c| c.iter().map(|x| 3.0 * x).collect())
            .collect();
        let cost3 = bot_cost(&t, &scaled, &flows, p.alpha, 1.0);
        assert!((cost3 - 3.0 * cost).abs() < 1e-12);
    }

    #[test]
    fn steiner_limit_counts_lengths_only() {
        let (p, t) = fork_problem(0.0);
        let flows = compute_edge_flows(&t, &p).unwrap();
        let coords = assemble_coords(&p, &[vec![1.0, 0.0]]);
        // Three unit edges, unit weights regardless of the flows.
        let cost = bot_cost(&t, &coords, &flows, 0.0, 1.0);
        assert!((cost - 3.0).abs() < 1e-15);
    }

    #[test]
    fn single_bp_update_is_weighted_barycenter() {
        let (p, t) = fork_problem(0.5);
        let flows = compute_edge_flows(&t, &p).unwrap();
        let start = vec![0.3, 0.2];
        let coords = assemble_coords(&p, &[start.clone()]);
        let updated = irls_iteration(&t, &coords, &flows, p.alpha, 1e-7, 1.0);

        let mut num = vec![0.0; 2];
        let mut den = 0.0;
        for (e, &(a, b)) in t.edges.iter().enumerate() {
            let neighbor = if a == 3 { b } else { a };
            let w = edge_weight(flows.flow[e], p.alpha) / dist(&start, &p.terminals[neighbor].pos);
            den += w;
            for d in 0..2 {
                num[d] += w * p.terminals[neighbor].pos[d];
            }
        }
        for d in 0..2 {
            assert!((updated[0][d] - num[d] / den).abs() < 1e-14);
        }
    }

    /// Dense oracle for one reweighted step: assemble the full linear
    /// system and solve it by Gaussian elimination.
    fn dense_irls_oracle(
        topology: &Topology,
        coords: &[Vec<f64>],
        flows: &FlowAssignment,
        alpha: f64,
        clip: f64,
    ) -> Vec<Vec<f64>> {
        let n = topology.n_terminals;
        let m = topology.n_bps;
        let dim = coords[0].len();
        let mut a = vec![vec![0.0f64; m]; m];
        let mut rhs = vec![vec![0.0f64; dim]; m];
        for (e, &(u, v)) in topology.edges.iter().enumerate() {
            let w = edge_weight(flows.flow[e], alpha);
            if w == 0.0 {
                continue;
            }
            let c = w / dist(&coords[u], &coords[v]).max(clip);
            for (this, other) in [(u, v), (v, u)] {
                if this < n {
                    continue;
                }
                let i = this - n;
                a[i][i] += c;
                if other < n {
                    for d in 0..dim {
                        rhs[i][d] += c * coords[other][d];
                    }
                } else {
                    a[i][other - n] -= c;
                }
            }
        }
        // Gaussian elimination with partial pivoting, shared across dims.
        let mut aug: Vec<Vec<f64>> = (0..m)
            .map(|r| {
                let mut row = a[r].clone();
                row.extend_from_slice(&rhs[r]);
                row
            })
            .collect();
        for col in 0..m {
            let pivot = (col..m)
                .max_by(|&r1, &r2| {
                    aug[r1][col]
                        .abs()
                        .partial_cmp(&aug[r2][col].abs())
                        .unwrap()
                })
                .unwrap();
            aug.swap(col, pivot);
            let p = aug[col][col];
            for r in 0..m {
                if r != col && aug[r][col] != 0.0 {
                    let factor = aug[r][col] / p;
                    for c in col..m + dim {
                        aug[r][c] -= factor * aug[col][c];
                    }
                }
            }
        }
        (0..m)
            .map(|i| (0..dim).map(|d| aug[i][m + d] / aug[i][i]).collect())
            .collect()
    }

    #[test]
    fn tree_solve_matches_dense_solve() {
        for seed in 0..12 {
            let n = 4 + (seed as usize % 5); // up to 8 terminals
            let p = generate_random_problem(n, 2, seed).unwrap();
            let top = enumerate_full_topologies(n)
                .unwrap()
                .nth(seed as usize % 3)
                .unwrap();
            let flows = compute_edge_flows(&top, &p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let bps: Vec<Vec<f64>> = (0..top.n_bps)
                .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
                .collect();
            let coords = assemble_coords(&p, &bps);
            let fast = irls_iteration(&top, &coords, &flows, p.alpha, 1e-7, 1.0);
            let dense = dense_irls_oracle(&top, &coords, &flows, p.alpha, 1e-7);
            for (i, (f, d)) in fast.iter().zip(&dense).enumerate() {
                for (x, y) in f.iter().zip(d) {
                    assert!((x - y).abs() < 1e-10, "seed {seed} bp {i}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn cost_descends_monotonically() {
        let config = SolverConfig::default();
        for seed in 0..30 {
            let n = 4 + (seed as usize % 4);
            let p = generate_random_problem(n, 2 + (seed as usize % 2), seed).unwrap();
            let count = crate::topology::full_topology_count(n) as u64;
            let top = enumerate_full_topologies(n)
                .unwrap()
                .nth((seed % count) as usize)
                .unwrap();
            let result =
                optimize_branching_points(&top, &p, BpInit::Random(seed ^ 0xabcd), &config)
                    .unwrap();
            for w in result.cost_trace.windows(2) {
                assert!(
                    w[1] <= w[0] * (1.0 + 1e-12),
                    "cost rose from {} to {} (seed {seed})",
                    w[0],
                    w[1]
                );
            }
            assert!((result.cost - *result.cost_trace.last().unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn fermat_point_alpha_zero() {
        let (p, t) = fork_problem(0.0);
        let config = SolverConfig::default().with_eta(1e-10).with_max_iters(20000);
        let result = optimize_branching_points(&t, &p, BpInit::Random(7), &config).unwrap();
        assert!(result.converged);
        let expected = 1.0 + 3f64.sqrt();
        assert!(
            (result.cost - expected).abs() < 1e-5,
            "cost {} vs {expected}",
            result.cost
        );
        // Position error scales like the square root of the cost error.
        let bp = &result.bp_coords[0];
        assert!((bp[0] - (1.0 - 1.0 / 3f64.sqrt())).abs() < 1e-3);
        assert!(bp[1].abs() < 1e-3);
    }

    #[test]
    fn fermat_point_alpha_one_collapses_to_source() {
        let (p, t) = fork_problem(1.0);
        let config = SolverConfig::default().with_eta(1e-10).with_max_iters(20000);
        let result = optimize_branching_points(&t, &p, BpInit::Random(3), &config).unwrap();
        assert!((result.cost - 2f64.sqrt()).abs() < 1e-5);
        assert!(dist(&result.bp_coords[0], &[0.0, 0.0]) < 1e-4);
    }

    #[test]
    fn fermat_point_alpha_half_realizes_right_angle() {
        let (p, t) = fork_problem(0.5);
        let config = SolverConfig::default().with_eta(1e-10).with_max_iters(20000);
        let result = optimize_branching_points(&t, &p, BpInit::Random(5), &config).unwrap();
        let bp = &result.bp_coords[0];
        let angle = crate::angles::angle_at(bp, &[1.0, 1.0], &[1.0, -1.0]).unwrap();
        assert!(
            (angle - std::f64::consts::FRAC_PI_2).abs() < 1e-3,
            "sink edges enclose {angle}"
        );
    }

    #[test]
    fn gradient_matches_finite_differences() {
        for seed in 0..10 {
            let p = generate_random_problem(6, 2, seed).unwrap();
            let top = enumerate_full_topologies(6).unwrap().nth(11).unwrap();
            let flows = compute_edge_flows(&top, &p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
            let bps: Vec<Vec<f64>> = (0..top.n_bps)
                .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
                .collect();
            let coords = assemble_coords(&p, &bps);
            let grads = bp_gradient(&top, &coords, &flows, p.alpha, 1e-7);
            let h = 1e-6;
            for (i, grad) in grads.iter().enumerate() {
                let grad = grad.as_ref().expect("random coords are non-degenerate");
                for d in 0..2 {
                    let mut plus = coords.clone();
                    plus[top.n_terminals + i][d] += h;
                    let mut minus = coords.clone();
                    minus[top.n_terminals + i][d] -= h;
                    let fd = (bot_cost(&top, &plus, &flows, p.alpha, 1.0)
                        - bot_cost(&top, &minus, &flows, p.alpha, 1.0))
                        / (2.0 * h);
                    assert!(
                        (grad[d] - fd).abs() < 1e-5,
                        "seed {seed} bp {i} dim {d}: {} vs {fd}",
                        grad[d]
                    );
                }
            }
        }
    }

    #[test]
    fn gradient_flags_degenerate_bp() {
        let (p, t) = fork_problem(0.5);
        let flows = compute_edge_flows(&t, &p).unwrap();
        let coords = assemble_coords(&p, &[vec![0.0, 0.0]]); // on the source
        let grads = bp_gradient(&t, &coords, &flows, p.alpha, 1e-7);
        assert!(grads[0].is_none());
    }

    #[test]
    fn quadratic_cost_solves_in_one_iteration() {
        // beta = 2 weights do not depend on the coordinates, so the very
        // first step lands on the exact quadratic minimum.
        let p = generate_random_problem(6, 3, 42).unwrap();
        let top = enumerate_full_topologies(6).unwrap().nth(50).unwrap();
        let flows = compute_edge_flows(&top, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let bps: Vec<Vec<f64>> = (0..top.n_bps)
            .map(|_| (0..3).map(|_| rng.gen::<f64>()).collect())
            .collect();
        let coords = assemble_coords(&p, &bps);
        let step1 = irls_iteration(&top, &coords, &flows, p.alpha, 1e-7, 2.0);
        let coords1 = assemble_coords(&p, &step1);
        let step2 = irls_iteration(&top, &coords1, &flows, p.alpha, 1e-7, 2.0);
        for (a, b) in step1.iter().zip(&step2) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
        let c0 = bot_cost(&top, &coords, &flows, p.alpha, 2.0);
        let c1 = bot_cost(&top, &coords1, &flows, p.alpha, 2.0);
        assert!(c1 < c0);
    }

    #[test]
    fn per_dimension_solves_are_independent() {
        // Solving with coordinates permuted across dimensions permutes
        // the result identically: dimensions never mix.
        let p = generate_random_problem(5, 3, 17).unwrap();
        let top = enumerate_full_topologies(5).unwrap().nth(4).unwrap();
        let flows = compute_edge_flows(&top, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let bps: Vec<Vec<f64>> = (0..top.n_bps)
            .map(|_| (0..3).map(|_| rng.gen::<f64>()).collect())
            .collect();
        let coords = assemble_coords(&p, &bps);
        let baseline = irls_iteration(&top, &coords, &flows, p.alpha, 1e-7, 1.0);

        let swap = |v: &[f64]| vec![v[2], v[0], v[1]];
        let swapped: Vec<Vec<f64>> = coords.iter().map(|c| swap(c)).collect();
        let swapped_result = irls_iteration(&top, &swapped, &flows, p.alpha, 1e-7, 1.0);
        for (b, s) in baseline.iter().zip(&swapped_result) {
            let back = swap(b);
            for (x, y) in back.iter().zip(s) {
                assert!((x - y).abs() < 1e-14);
            }
        }
    }
}
