//! Combinatorial optimization of the tree topology: a greedy randomized
//! local search and an exact brute-force solver over all full tree
//! topologies.
//!
//! One search move removes a uniformly sampled edge, reconnects the node
//! that fell into the smaller component to an edge of the larger
//! component through a fresh branching point (edges sampled with a
//! Gaussian kernel on point-to-edge distance), reoptimizes the geometry
//! and accepts only strict cost improvements. Candidate edges are drawn
//! without replacement and the list resets on acceptance; the search
//! terminates once every current edge failed to improve.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::iter::{IntoParallelIterator, ParallelBridge, ParallelIterator};
use serde::{Deserialize, Serialize};

use crate::error::BotError;
use crate::geometry::{
    assemble_coords, bot_cost, optimize_with_flows, BpInit, SolverConfig,
};
use crate::problem::BotProblem;
use crate::topology::{
    compute_edge_flows, enumerate_full_topologies, mst_topology, star_topology, FlowAssignment,
    Topology,
};

/// Which tree the greedy search starts from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InitTopology {
    Star,
    Mst,
    Given(Topology),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeuristicConfig {
    /// Width factor of the reconnection kernel `exp(-d^2/(omega*dmin)^2)`.
    pub omega: f64,
    pub seed: u64,
    pub geometry: SolverConfig,
    pub init: InitTopology,
    /// Start candidate geometry from the surviving branching points
    /// instead of a fresh seeded random init. Off by default: warm
    /// starts keep descending the current optimum, so re-proposals of
    /// an equivalent topology come back a hair cheaper and the strict
    /// acceptance churns on no-op moves near termination.
    pub warm_start: bool,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig {
            omega: 1.0,
            seed: 0,
            geometry: SolverConfig::default(),
            init: InitTopology::Mst,
            warm_start: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionMeta {
    /// Moves tried, i.e. geometry optimizations run by the search.
    pub iterations_tried: usize,
    pub iterations_accepted: usize,
    pub wall_time_s: f64,
    pub alpha: f64,
    pub seed: u64,
}

/// A solved instance: topology, branching point geometry, flows and cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub topology: Topology,
    pub bp_coords: Vec<Vec<f64>>,
    pub flows: FlowAssignment,
    pub cost: f64,
    pub meta: SolutionMeta,
}

/// On-disk solution format: the problem plus the solution fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub problem: BotProblem,
    pub topology: Topology,
    pub bp_coords: Vec<Vec<f64>>,
    pub flows: Vec<f64>,
    pub cost: f64,
    pub meta: SolutionMeta,
}

impl SolutionFile {
    pub fn new(problem: &BotProblem, solution: &Solution) -> Self {
        SolutionFile {
            problem: problem.clone(),
            topology: solution.topology.clone(),
            bp_coords: solution.bp_coords.clone(),
            flows: solution.flows.flow.clone(),
            cost: solution.cost,
            meta: solution.meta.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, BotError> {
        serde_json::from_str(text).map_err(|e| BotError::Parse(e.to_string()))
    }
}

/// Distance between the segment `(xi, xj)` and the point `p`:
/// `min over t in [0,1] of |xi + t (xj - xi) - p|`.
pub fn edge_node_distance(xi: &[f64], xj: &[f64], p: &[f64]) -> f64 {
    let mut seg2 = 0.0;
    let mut dot = 0.0;
    for d in 0..xi.len() {
        let e = xj[d] - xi[d];
        seg2 += e * e;
        dot += (p[d] - xi[d]) * e;
    }
    let t = if seg2 == 0.0 {
        0.0
    } else {
        (dot / seg2).clamp(0.0, 1.0)
    };
    (0..xi.len())
        .map(|d| {
            let c = xi[d] + t * (xj[d] - xi[d]) - p[d];
            c * c
        })
        .sum::<f64>()
        .sqrt()
}

/// Unnormalized kernel weights `exp(-(d / (omega * dmin))^2)`. A zero
/// minimum distance concentrates all weight on the touching edges.
pub fn kernel_weights(distances: &[f64], omega: f64) -> Vec<f64> {
    let dmin = distances.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if dmin == 0.0 {
        return distances
            .iter()
            .map(|&d| if d == 0.0 { 1.0 } else { 0.0 })
            .collect();
    }
    let scale = omega * dmin;
    distances
        .iter()
        .map(|&d| (-(d / scale) * (d / scale)).exp())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Accepted,
    Rejected,
    Exhausted,
}

struct SearchState {
    topology: Topology,
    bp_coords: Vec<Vec<f64>>,
    cost: f64,
}

/// Greedy randomized topology search, driving one move per [`step`]
/// call. All randomness flows from the config seed.
///
/// [`step`]: GreedySearch::step
pub struct GreedySearch<'a> {
    problem: &'a BotProblem,
    omega: f64,
    geometry: SolverConfig,
    seed: u64,
    warm_start: bool,
    rng: ChaCha8Rng,
    state: SearchState,
    candidates: Vec<(usize, usize)>,
    tried: usize,
    accepted: usize,
    started: Instant,
}

impl<'a> GreedySearch<'a> {
    pub fn new(problem: &'a BotProblem, config: &HeuristicConfig) -> Result<Self, BotError> {
        config.geometry.validate()?;
        if !(config.omega > 0.0) {
            return Err(BotError::InvalidArgument(format!(
                "kernel width factor must be positive, got {}",
                config.omega
            )));
        }
        let violations = problem.validate();
        if !violations.is_empty() {
            return Err(BotError::InvalidProblem(violations));
        }
        let topology = match &config.init {
            InitTopology::Star => star_topology(problem),
            InitTopology::Mst => mst_topology(problem),
            InitTopology::Given(t) => {
                t.validate()?;
                t.clone()
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let init_seed = rng.gen::<u64>();
        let flows = compute_edge_flows(&topology, problem)?;
        let result = optimize_with_flows(
            &topology,
            problem,
            &flows,
            BpInit::Random(init_seed),
            &config.geometry,
        )?;
        let candidates = topology.edges.clone();
        Ok(GreedySearch {
            problem,
            omega: config.omega,
            geometry: config.geometry,
            seed: config.seed,
            warm_start: config.warm_start,
            rng,
            state: SearchState {
                topology,
                bp_coords: result.bp_coords,
                cost: result.cost,
            },
            candidates,
            tried: 0,
            accepted: 0,
            started: Instant::now(),
        })
    }

    pub fn cost(&self) -> f64 {
        self.state.cost
    }

    /// Samples one edge without replacement and tries the corresponding
    /// move; acceptance requires a strictly cheaper solution and resets
    /// the candidate list.
    pub fn step(&mut self) -> Result<StepOutcome, BotError> {
        if self.candidates.is_empty() {
            return Ok(StepOutcome::Exhausted);
        }
        let pick = self.rng.gen_range(0..self.candidates.len());
        let removed = self.candidates.swap_remove(pick);
        self.tried += 1;
        let Some((topology, bp_init)) = self.propose(removed) else {
            return Ok(StepOutcome::Rejected);
        };
        let flows = compute_edge_flows(&topology, self.problem)?;
        let init_seed = self.rng.gen::<u64>();
        let init = if self.warm_start {
            BpInit::Given(&bp_init)
        } else {
            BpInit::Random(init_seed)
        };
        let result = optimize_with_flows(&topology, self.problem, &flows, init, &self.geometry)?;
        if result.cost < self.state.cost {
            self.accepted += 1;
            self.candidates = topology.edges.clone();
            self.state = SearchState {
                topology,
                bp_coords: result.bp_coords,
                cost: result.cost,
            };
            Ok(StepOutcome::Accepted)
        } else {
            Ok(StepOutcome::Rejected)
        }
    }

    /// Builds the candidate topology for removing `e_hat`, or `None`
    /// when the move is structurally impossible.
    fn propose(&mut self, e_hat: (usize, usize)) -> Option<(Topology, Vec<Vec<f64>>)> {
        let top = &self.state.topology;
        let n = top.n_terminals;
        let removed_idx = top
            .edges
            .iter()
            .position(|&e| e == e_hat)
            .expect("candidate edges come from the current topology");

        // Component of each node once e_hat is gone.
        let adj = top.adjacency();
        let mut comp = vec![usize::MAX; top.node_count()];
        for (label, start) in [(0, e_hat.0), (1, e_hat.1)] {
            let mut stack = vec![start];
            comp[start] = label;
            while let Some(v) = stack.pop() {
                for &(u, e) in &adj[v] {
                    if e != removed_idx && comp[u] == usize::MAX {
                        comp[u] = label;
                        stack.push(u);
                    }
                }
            }
        }
        let size0 = comp.iter().filter(|&&c| c == 0).count();
        let size1 = comp.len() - size0;
        // Smaller component; ties go to the one holding the lowest node id.
        let small = match size0.cmp(&size1) {
            std::cmp::Ordering::Less => 0,
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Equal => comp[0],
        };
        let (reconnect, anchor) = if comp[e_hat.0] == small {
            (e_hat.0, e_hat.1)
        } else {
            (e_hat.1, e_hat.0)
        };

        // Remove the edge, then drop the anchor if it became a degree-2
        // branching point.
        let mut edges: Vec<(usize, usize)> = top
            .edges
            .iter()
            .enumerate()
            .filter(|&(e, _)| e != removed_idx)
            .map(|(_, &e)| e)
            .collect();
        let mut dropped_bp: Option<usize> = None;
        if top.is_bp(anchor) {
            let incident: Vec<usize> = edges
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == anchor || b == anchor)
                .map(|(e, _)| e)
                .collect();
            if incident.len() == 2 {
                let other = |e: usize| {
                    let (a, b) = edges[e];
                    if a == anchor {
                        b
                    } else {
                        a
                    }
                };
                let merged = (other(incident[0]), other(incident[1]));
                edges.remove(incident[1]);
                edges.remove(incident[0]);
                edges.push((merged.0.min(merged.1), merged.0.max(merged.1)));
                dropped_bp = Some(anchor);
            }
        }

        // Reconnection candidates: edges of the larger component (the
        // dropped branching point no longer appears as an endpoint).
        let other_side = 1 - small;
        let candidate_edges: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(a, b)| comp[a] == other_side && comp[b] == other_side)
            .collect();
        if candidate_edges.is_empty() {
            return None;
        }

        let coords = assemble_coords(self.problem, &self.state.bp_coords);
        let point = coords[reconnect].clone();
        let distances: Vec<f64> = candidate_edges
            .iter()
            .map(|&(a, b)| edge_node_distance(&coords[a], &coords[b], &point))
            .collect();
        let weights = kernel_weights(&distances, self.omega);
        let total: f64 = weights.iter().sum();
        let mut draw = self.rng.gen::<f64>() * total;
        let mut chosen = candidate_edges.len() - 1;
        for (i, &w) in weights.iter().enumerate() {
            draw -= w;
            if draw <= 0.0 {
                chosen = i;
                break;
            }
        }
        let target = candidate_edges[chosen];

        // Renumber branching points: survivors keep their order, the
        // fresh one goes last.
        let mut survivors: Vec<usize> = (n..top.node_count())
            .filter(|&v| Some(v) != dropped_bp)
            .collect();
        survivors.sort_unstable();
        let mut map = vec![usize::MAX; top.node_count()];
        for t in 0..n {
            map[t] = t;
        }
        for (i, &v) in survivors.iter().enumerate() {
            map[v] = n + i;
        }
        let new_bp = n + survivors.len();
        let mut new_edges: Vec<(usize, usize)> = edges
            .iter()
            .filter(|&&e| e != target)
            .map(|&(a, b)| (map[a], map[b]))
            .collect();
        new_edges.push((map[reconnect], new_bp));
        new_edges.push((new_bp, map[target.0]));
        new_edges.push((new_bp, map[target.1]));

        let (lo, hi) = self.problem.bounding_box();
        let fresh: Vec<f64> = (0..self.problem.dim)
            .map(|d| {
                if lo[d] == hi[d] {
                    lo[d]
                } else {
                    self.rng.gen_range(lo[d]..hi[d])
                }
            })
            .collect();
        let mut bp_coords: Vec<Vec<f64>> = survivors
            .iter()
            .map(|&v| self.state.bp_coords[v - n].clone())
            .collect();
        bp_coords.push(fresh);

        Some((
            Topology {
                n_terminals: n,
                n_bps: survivors.len() + 1,
                edges: new_edges,
            },
            bp_coords,
        ))
    }

    /// Runs moves until the candidate list is exhausted.
    pub fn run(mut self) -> Result<Solution, BotError> {
        loop {
            if let StepOutcome::Exhausted = self.step()? {
                return self.into_solution();
            }
        }
    }

    pub fn into_solution(self) -> Result<Solution, BotError> {
        let flows = compute_edge_flows(&self.state.topology, self.problem)?;
        let coords = assemble_coords(self.problem, &self.state.bp_coords);
        let cost = bot_cost(&self.state.topology, &coords, &flows, self.problem.alpha, 1.0);
        Ok(Solution {
            topology: self.state.topology,
            bp_coords: self.state.bp_coords,
            flows,
            cost,
            meta: SolutionMeta {
                iterations_tried: self.tried,
                iterations_accepted: self.accepted,
                wall_time_s: self.started.elapsed().as_secs_f64(),
                alpha: self.problem.alpha,
                seed: self.seed,
            },
        })
    }
}

/// Runs the greedy randomized search to termination.
pub fn greedy_heuristic(
    problem: &BotProblem,
    config: &HeuristicConfig,
) -> Result<Solution, BotError> {
    GreedySearch::new(problem, config)?.run()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteForceConfig {
    /// Largest accepted terminal count; `(2n-5)!!` topologies are solved.
    pub cap: usize,
    pub geometry: SolverConfig,
    pub seed: u64,
}

impl Default for BruteForceConfig {
    fn default() -> Self {
        BruteForceConfig {
            cap: 10,
            // Tighter than the heuristic default so that brute-force
            // costs stay a reliable lower reference.
            geometry: SolverConfig {
                eta: 1e-9,
                max_iters: 5000,
                ..SolverConfig::default()
            },
            seed: 0,
        }
    }
}

/// Exact solver: optimizes the geometry of every full tree topology
/// (fresh seeded random init per topology) and returns the cheapest
/// solution; cost ties break toward the earlier enumeration index.
pub fn brute_force(problem: &BotProblem, config: &BruteForceConfig) -> Result<Solution, BotError> {
    let n = problem.n_terminals();
    if n < 3 || n > config.cap {
        return Err(BotError::InvalidArgument(format!(
            "brute force handles 3 <= n <= {}, got {n}",
            config.cap
        )));
    }
    let violations = problem.validate();
    if !violations.is_empty() {
        return Err(BotError::InvalidProblem(violations));
    }
    let started = Instant::now();
    let seed = config.seed;
    let geometry = config.geometry;
    let best = enumerate_full_topologies(n)?
        .enumerate()
        .par_bridge()
        .map(|(idx, topology)| {
            let topo_seed = seed.wrapping_add((idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let result = crate::geometry::optimize_branching_points(
                &topology,
                problem,
                BpInit::Random(topo_seed),
                &geometry,
            )
            .expect("enumerated topologies are valid");
            (result.cost, idx, topology, result.bp_coords)
        })
        .reduce_with(|a, b| {
            if (b.0, b.1) < (a.0, a.1) {
                b
            } else {
                a
            }
        })
        .expect("at least one topology");
    let (_, _, topology, bp_coords) = best;
    let optimized = crate::topology::full_topology_count(n) as usize;
    let flows = compute_edge_flows(&topology, problem)?;
    let coords = assemble_coords(problem, &bp_coords);
    let cost = bot_cost(&topology, &coords, &flows, problem.alpha, 1.0);
    Ok(Solution {
        topology,
        bp_coords,
        flows,
        cost,
        meta: SolutionMeta {
            iterations_tried: optimized,
            iterations_accepted: 0,
            wall_time_s: started.elapsed().as_secs_f64(),
            alpha: problem.alpha,
            seed,
        },
    })
}

/// Mean/max statistics of `greedy cost / brute-force cost` over a batch
/// of random problems, the comparison harness behind the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub n: usize,
    pub dim: usize,
    pub problems: usize,
    pub mean_ratio: f64,
    pub median_ratio: f64,
    pub max_ratio: f64,
    pub mean_iterations: f64,
    pub mean_heuristic_cost: f64,
    pub mean_brute_cost: f64,
}

/// Runs heuristic and brute force on `problems` random instances of
/// size `n` and aggregates the cost ratios. Problems are generated from
/// `seed + index`; instances run in parallel.
pub fn compare_batch(
    n: usize,
    dim: usize,
    problems: usize,
    seed: u64,
    heuristic: &HeuristicConfig,
    brute: &BruteForceConfig,
) -> Result<CompareRow, BotError> {
    let rows: Vec<(f64, f64, f64, usize)> = (0..problems)
        .into_par_iter()
        .map(|i| {
            let problem = crate::problem::generate_random_problem(n, dim, seed + i as u64)
                .expect("generator arguments are valid");
            let mut h_config = heuristic.clone();
            h_config.seed = seed ^ (i as u64).wrapping_mul(0xD129_0C77);
            let mut b_config = brute.clone();
            b_config.seed = h_config.seed.wrapping_add(1);
            let h = greedy_heuristic(&problem, &h_config).expect("heuristic cannot fail");
            let b = brute_force(&problem, &b_config).expect("instance size is within the cap");
            (h.cost, b.cost, h.cost / b.cost, h.meta.iterations_tried)
        })
        .collect();
    let mut ratios: Vec<f64> = rows.iter().map(|r| r.2).collect();
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = ratios.len() / 2;
    let median = if ratios.len() % 2 == 1 {
        ratios[mid]
    } else {
        0.5 * (ratios[mid - 1] + ratios[mid])
    };
    Ok(CompareRow {
        n,
        dim,
        problems,
        mean_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
        median_ratio: median,
        max_ratio: ratios.iter().fold(0.0f64, |a, &b| a.max(b)),
        mean_iterations: rows.iter().map(|r| r.3 as f64).sum::<f64>() / rows.len() as f64,
        mean_heuristic_cost: rows.iter().map(|r| r.0).sum::<f64>() / rows.len() as f64,
        mean_brute_cost: rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{generate_random_problem, Terminal};

    #[test]
    fn point_segment_distance_cases() {
        let a = [-1.0, 0.0];
        let b = [1.0, 0.0];
        assert!(edge_node_distance(&a, &b, &[0.3, 0.0]) < 1e-15);
        assert_eq!(edge_node_distance(&a, &b, &[0.0, 1.0]), 1.0);
        // Beyond the endpoint the parameter clamps to 1.
        assert!((edge_node_distance(&a, &b, &[2.0, 1.0]) - 2f64.sqrt()).abs() < 1e-15);
        // Zero-length segment degenerates to point distance.
        assert!((edge_node_distance(&a, &a, &[0.0, 1.0]) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn kernel_ratio_at_twice_the_minimum() {
        let w = kernel_weights(&[1.0, 2.0], 1.0);
        let ratio = w[0] / w[1];
        assert!((ratio - 3f64.exp()).abs() < 1e-12, "ratio {ratio}");
        // Normalized, that is roughly 20.09 : 1.
        assert!((ratio - 20.0855).abs() < 1e-3);
    }

    #[test]
    fn kernel_with_zero_distance_targets_touching_edges() {
        let w = kernel_weights(&[0.4, 0.0, 0.1], 1.0);
        assert_eq!(w, vec![0.0, 1.0, 0.0]);
    }

    fn quad_problem(alpha: f64) -> BotProblem {
        BotProblem::new(
            alpha,
            2,
            vec![
                Terminal {
                    pos: vec![0.0, 1.0],
                    mu: 0.5,
                },
                Terminal {
                    pos: vec![1.0, 1.0],
                    mu: 0.5,
                },
                Terminal {
                    pos: vec![0.0, 0.0],
                    mu: -0.5,
                },
                Terminal {
                    pos: vec![1.0, 0.0],
                    mu: -0.5,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn three_terminal_search_terminates_at_the_unique_optimum() {
        let p = BotProblem::new(
            0.5,
            2,
            vec![
                Terminal {
                    pos: vec![0.0, 0.0],
                    mu: 1.0,
                },
                Terminal {
                    pos: vec![1.0, 0.6],
                    mu: -0.45,
                },
                Terminal {
                    pos: vec![1.0, -0.6],
                    mu: -0.55,
                },
            ],
        )
        .unwrap();
        let config = HeuristicConfig {
            init: InitTopology::Star,
            ..Default::default()
        };
        let solution = greedy_heuristic(&p, &config).unwrap();
        let brute = brute_force(&p, &BruteForceConfig::default()).unwrap();
        // Both converge to the same unique-topology optimum, the
        // heuristic at its default eta = 1e-6.
        let gap = (solution.cost - brute.cost).abs() / brute.cost;
        assert!(gap < 1e-4, "gap {gap}");
        // There is a single topology class: almost every move is a
        // rejected reconstruction of the same tree.
        assert!(solution.meta.iterations_accepted <= 3);
        assert!(solution.meta.iterations_tried >= 3);
    }

    #[test]
    fn search_is_deterministic_given_seed() {
        let p = generate_random_problem(7, 2, 501).unwrap();
        let config = HeuristicConfig {
            seed: 99,
            ..Default::default()
        };
        let a = greedy_heuristic(&p, &config).unwrap();
        let b = greedy_heuristic(&p, &config).unwrap();
        assert_eq!(a.cost, b.cost);
        assert_eq!(a.topology, b.topology);
        assert_eq!(a.meta.iterations_tried, b.meta.iterations_tried);
    }

    #[test]
    fn quad_search_matches_brute_force_on_most_seeds() {
        let p = quad_problem(0.5);
        let brute = brute_force(&p, &BruteForceConfig::default()).unwrap();
        let mut hits = 0;
        let total = 40;
        for seed in 0..total {
            let config = HeuristicConfig {
                seed,
                ..Default::default()
            };
            let solution = greedy_heuristic(&p, &config).unwrap();
            assert!(solution.cost > brute.cost - 1e-9);
            if solution.cost / brute.cost < 1.0 + 1e-4 {
                hits += 1;
            }
        }
        assert!(hits * 100 >= total * 95, "only {hits}/{total} optimal");
    }

    #[test]
    fn accepted_costs_strictly_decrease() {
        let p = generate_random_problem(8, 2, 77).unwrap();
        let config = HeuristicConfig {
            seed: 7,
            init: InitTopology::Star,
            ..Default::default()
        };
        let mut search = GreedySearch::new(&p, &config).unwrap();
        let mut last = search.cost();
        loop {
            match search.step().unwrap() {
                StepOutcome::Accepted => {
                    assert!(search.cost() < last);
                    last = search.cost();
                }
                StepOutcome::Rejected => {}
                StepOutcome::Exhausted => break,
            }
        }
    }

    #[test]
    fn brute_force_three_terminals_is_single_topology() {
        let p = generate_random_problem(3, 2, 3).unwrap();
        let solution = brute_force(&p, &BruteForceConfig::default()).unwrap();
        assert_eq!(solution.meta.iterations_tried, 1);
        assert!(solution.topology.is_full());
    }

    #[test]
    fn brute_force_rejects_out_of_range_sizes() {
        let p = generate_random_problem(11, 2, 0).unwrap();
        assert!(brute_force(&p, &BruteForceConfig::default()).is_err());
        let p2 = generate_random_problem(2, 2, 0).unwrap();
        assert!(brute_force(&p2, &BruteForceConfig::default()).is_err());
    }

    #[test]
    fn brute_force_bounds_heuristic_from_below() {
        for seed in [11u64, 23, 35] {
            let p = generate_random_problem(6, 2, seed).unwrap();
            let brute = brute_force(&p, &BruteForceConfig::default()).unwrap();
            for h_seed in [0u64, 1] {
                let config = HeuristicConfig {
                    seed: h_seed,
                    ..Default::default()
                };
                let h = greedy_heuristic(&p, &config).unwrap();
                assert!(
                    brute.cost <= h.cost + 1e-9,
                    "brute {} vs heuristic {} (seed {seed}/{h_seed})",
                    brute.cost,
                    h.cost
                );
            }
        }
    }

    #[test]
    fn solution_cost_is_consistent_with_parts() {
        let p = generate_random_problem(6, 3, 8).unwrap();
        let solution = greedy_heuristic(&p, &HeuristicConfig::default()).unwrap();
        let coords = assemble_coords(&p, &solution.bp_coords);
        let recomputed = bot_cost(&solution.topology, &coords, &solution.flows, p.alpha, 1.0);
        assert!((recomputed - solution.cost).abs() <= 1e-12 * solution.cost);
        assert!(solution.flows.max_residual(&solution.topology, &p) < 1e-9);
    }

    #[test]
    fn solution_file_round_trip() {
        let p = generate_random_problem(5, 2, 21).unwrap();
        let solution = greedy_heuristic(&p, &HeuristicConfig::default()).unwrap();
        let file = SolutionFile::new(&p, &solution);
        let text = file.to_json();
        assert_eq!(SolutionFile::from_json(&text).unwrap(), file);
    }
}
