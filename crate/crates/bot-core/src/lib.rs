//! Branched optimal transport solver.
//!
//! Finds transport networks connecting sources and sinks where moving
//! mass `m` along an edge of length `l` costs `|m|^alpha * l`. The
//! library splits the problem the usual way: convex geometry
//! optimization of the branching points for a fixed tree topology, and
//! combinatorial search over topologies on top of it.
//!
//! Modules:
//! - [`problem`]: instances, validation, random generation, JSON,
//! - [`topology`]: trees, edge flows, full-topology enumeration,
//! - [`angles`]: closed-form optimal branching angles and V/L/Y tests,
//! - [`geometry`]: iteratively reweighted branching-point optimization,
//! - [`construction`]: exact 2D construction via pivot circles,
//! - [`search`]: greedy randomized topology search and brute force,
//! - [`verifier`]: certified non-optimality of degree-4 branchings.

pub mod angles;
pub mod construction;
pub mod error;
pub mod geometry;
pub mod problem;
pub mod search;
pub mod verifier;
pub mod topology;

pub use error::BotError;
pub use problem::{generate_random_problem, BotProblem, Terminal};
pub use topology::{
    compute_edge_flows, detect_coupled_bps, enumerate_full_topologies, full_topology_count,
    mst_topology, star_topology, FlowAssignment, Topology,
};
