//! Problem instances: terminals with signed masses, validation, random
//! generation and JSON serialization.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::BotError;

/// Absolute tolerance on the signed mass balance of a problem.
pub const MASS_BALANCE_TOL: f64 = 1e-9;

/// A source (`mu > 0`) or sink (`mu < 0`) at a fixed position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Terminal {
    pub pos: Vec<f64>,
    pub mu: f64,
}

/// A branched-transport instance: terminals, cost exponent and dimension.
///
/// Transported mass `m` on an edge of length `l` costs `|m|^alpha * l`,
/// so `alpha = 1` is plain optimal transport and `alpha = 0` the Euclidean
/// Steiner tree problem. Instances are immutable once constructed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BotProblem {
    pub alpha: f64,
    pub dim: usize,
    pub terminals: Vec<Terminal>,
}

impl BotProblem {
    /// Builds a problem, rejecting instances that violate any invariant.
    pub fn new(alpha: f64, dim: usize, terminals: Vec<Terminal>) -> Result<Self, BotError> {
        let problem = BotProblem {
            alpha,
            dim,
            terminals,
        };
        let violations = problem.validate();
        if violations.is_empty() {
            Ok(problem)
        } else {
            Err(BotError::InvalidProblem(violations))
        }
    }

    pub fn n_terminals(&self) -> usize {
        self.terminals.len()
    }

    /// Checks every invariant and returns human-readable violations.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        if !(0.0..=1.0).contains(&self.alpha) || !self.alpha.is_finite() {
            violations.push(format!("alpha {} outside [0, 1]", self.alpha));
        }
        if self.dim < 2 {
            violations.push(format!("dimension {} below 2", self.dim));
        }
        if self.terminals.len() < 2 {
            violations.push(format!("only {} terminals", self.terminals.len()));
        }
        let balance: f64 = self.terminals.iter().map(|t| t.mu).sum();
        if balance.abs() > MASS_BALANCE_TOL {
            violations.push(format!("mass imbalance: mu sums to {balance:e}"));
        }
        if !self.terminals.iter().any(|t| t.mu > 0.0) {
            violations.push("no source (terminal with mu > 0)".to_string());
        }
        if !self.terminals.iter().any(|t| t.mu < 0.0) {
            violations.push("no sink (terminal with mu < 0)".to_string());
        }
        for (i, t) in self.terminals.iter().enumerate() {
            if t.mu == 0.0 || !t.mu.is_finite() {
                violations.push(format!("terminal {i} has mu {}", t.mu));
            }
            if t.pos.len() != self.dim {
                violations.push(format!(
                    "terminal {i} has {} coordinates, expected {}",
                    t.pos.len(),
                    self.dim
                ));
            }
            if t.pos.iter().any(|c| !c.is_finite()) {
                violations.push(format!("terminal {i} has non-finite coordinates"));
            }
        }
        for i in 0..self.terminals.len() {
            for j in i + 1..self.terminals.len() {
                if self.terminals[i].pos == self.terminals[j].pos {
                    violations.push(format!("coincident terminals {i} and {j}"));
                }
            }
        }
        violations
    }

    /// Axis-aligned bounding box of the terminal positions.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for t in &self.terminals {
            for (d, &c) in t.pos.iter().enumerate() {
                lo[d] = lo[d].min(c);
                hi[d] = hi[d].max(c);
            }
        }
        (lo, hi)
    }

    /// Serializes to the problem file format.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serialization cannot fail")
    }

    /// Parses a problem file. Mass imbalances within [`MASS_BALANCE_TOL`]
    /// are renormalized; larger ones are rejected.
    pub fn from_json(text: &str) -> Result<Self, BotError> {
        let mut problem: BotProblem =
            serde_json::from_str(text).map_err(|e| BotError::Parse(e.to_string()))?;
        problem.renormalize_masses()?;
        let violations = problem.validate();
        if violations.is_empty() {
            Ok(problem)
        } else {
            Err(BotError::InvalidProblem(violations))
        }
    }

    /// Rescales supplies and demands so that they cancel exactly, keeping
    /// the total throughput at the mean of the two sides. Imbalances at
    /// machine level (<= 1e-12) are left untouched so that freshly
    /// written files round-trip bit-exactly.
    fn renormalize_masses(&mut self) -> Result<(), BotError> {
        let supply: f64 = self.terminals.iter().map(|t| t.mu.max(0.0)).sum();
        let demand: f64 = -self.terminals.iter().map(|t| t.mu.min(0.0)).sum::<f64>();
        let balance = supply - demand;
        if balance.abs() > MASS_BALANCE_TOL {
            return Err(BotError::InvalidProblem(vec![format!(
                "mass imbalance: mu sums to {balance:e}"
            )]));
        }
        if balance.abs() <= 1e-12 || supply == 0.0 || demand == 0.0 {
            return Ok(());
        }
        let target = 0.5 * (supply + demand);
        for t in &mut self.terminals {
            if t.mu > 0.0 {
                t.mu *= target / supply;
            } else {
                t.mu *= target / demand;
            }
        }
        Ok(())
    }
}

/// Generates a random problem with unit total supply and demand: alpha
/// uniform in [0,1], a uniform number of sources, masses drawn uniformly
/// and normalized per side, coordinates uniform in the unit cube.
/// Deterministic for a fixed `(n, dim, seed)`.
pub fn generate_random_problem(n: usize, dim: usize, seed: u64) -> Result<BotProblem, BotError> {
    if n < 2 {
        return Err(BotError::InvalidArgument(format!(
            "need at least 2 terminals, got {n}"
        )));
    }
    if dim < 2 {
        return Err(BotError::InvalidArgument(format!(
            "need dimension >= 2, got {dim}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha: f64 = rng.gen_range(0.0..=1.0);
    let n_sources = rng.gen_range(1..n);
    let n_sinks = n - n_sources;
    let supplies: Vec<f64> = (0..n_sources).map(|_| rng.gen::<f64>()).collect();
    let demands: Vec<f64> = (0..n_sinks).map(|_| rng.gen::<f64>()).collect();
    let supply_total: f64 = supplies.iter().sum();
    let demand_total: f64 = demands.iter().sum();
    let mut terminals = Vec::with_capacity(n);
    for i in 0..n {
        let pos: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
        let mu = if i < n_sources {
            supplies[i] / supply_total
        } else {
            -demands[i - n_sources] / demand_total
        };
        terminals.push(Terminal { pos, mu });
    }
    BotProblem::new(alpha, dim, terminals)
}
