//! Exact 2D construction of relatively optimal solutions for full tree
//! topologies via pivot points and pivot circles.
//!
//! Bottom-up, every branching point summarizes its two children (terminal
//! positions or child pivots) into a pivot circle whose central angle is
//! twice the total optimal branching angle and a pivot point splitting
//! that arc in the ratio of the two per-child angles. Top-down, each
//! branching point is then placed where the segment from its parent to
//! its pivot crosses the opposite circle arc, which realizes both optimal
//! angles at once.
//!
//! The pivot for a chord has two possible half-planes; for inner
//! branching points the correct one is not known in advance, so the
//! caller supplies one side choice per branching point and
//! [`construct_ros_exhaustive`] tries all `2^(n-2)` combinations. The
//! construction only represents non-degenerate (all-Y) solutions; runs
//! that need a V- or L-branching fail and are reported as such.

use serde::{Deserialize, Serialize};

use crate::angles::{
    classify_branching, optimal_angle_pair, BranchKind, BranchingClass, BranchingMode,
};
use crate::error::BotError;
use crate::geometry::{assemble_coords, bot_cost, SolverConfig};
use crate::problem::BotProblem;
use crate::topology::{compute_edge_flows, Topology};

/// Largest exhaustive side-choice search accepted by default
/// (`2^(12-2)` = 1024 combinations).
pub const EXHAUSTIVE_TERMINAL_CAP: usize = 12;

/// Pivot circle and point summarizing one branching point's children.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PivotRecord {
    /// Branching point this record belongs to.
    pub bp: usize,
    /// Child node ids `(c1, c2)` in ascending order.
    pub child_pair: (usize, usize),
    /// Effective child positions forming the chord (terminal positions
    /// or child pivot points).
    pub chord: (Vec<f64>, Vec<f64>),
    pub pivot: Vec<f64>,
    pub center: Vec<f64>,
    pub radius: f64,
    /// Half-plane of the pivot relative to the chord, the sign of
    /// `cross(c2 - c1, pivot - c1)`.
    pub side: i8,
    /// Optimal angles `(theta1, theta2)` the circle encodes.
    pub angles: (f64, f64),
    /// Rotation orientation (+1 counter-clockwise) sweeping the pivot
    /// arc from `c1` to `c2`.
    pub sweep: f64,
}

/// Outcome of one construction attempt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionResult {
    /// Placed branching points, or `None` if the attempt failed.
    pub bp_coords: Option<Vec<Vec<f64>>>,
    /// Classification per branching point (single-branching runs may
    /// return V/L; multi-branching constructions are all Y).
    pub classes: Vec<Option<BranchingClass>>,
    pub side_choices: Vec<i8>,
    pub cost: Option<f64>,
    /// Human-readable reason when the attempt failed.
    pub failure: Option<String>,
    /// Pivot geometry, kept for diagnostics and rendering.
    pub pivots: Vec<PivotRecord>,
}

impl ConstructionResult {
    pub fn succeeded(&self) -> bool {
        self.bp_coords.is_some()
    }

    fn failed(side_choices: Vec<i8>, pivots: Vec<PivotRecord>, m: usize, why: String) -> Self {
        ConstructionResult {
            bp_coords: None,
            classes: vec![None; m],
            side_choices,
            cost: None,
            failure: Some(why),
            pivots,
        }
    }
}

fn cross(a: &[f64], b: &[f64]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: &[f64], b: &[f64]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm(a: &[f64]) -> f64 {
    a[0].hypot(a[1])
}

fn rotate(v: &[f64], angle: f64) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

struct Pivot {
    center: [f64; 2],
    radius: f64,
    pivot: [f64; 2],
    sweep: f64,
}

/// Pivot circle through `c1`, `c2` with inscribed angle `a1 + a2` on the
/// arc opposite the pivot; the pivot sits at central angle `2 a1` from
/// `c1` in the half-plane selected by `side`.
fn build_pivot(c1: &[f64], c2: &[f64], a1: f64, a2: f64, side: i8) -> Result<Pivot, BotError> {
    let theta = a1 + a2;
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(BotError::DegenerateGeometry(format!(
            "total branching angle {theta} outside (0, pi)"
        )));
    }
    let chord = sub(c2, c1);
    let len = norm(&chord);
    if len == 0.0 {
        return Err(BotError::DegenerateGeometry(
            "chord endpoints coincide".into(),
        ));
    }
    let normal = [
        -chord[1] / len * side as f64,
        chord[0] / len * side as f64,
    ];
    let radius = len / (2.0 * theta.sin());
    let mid = [0.5 * (c1[0] + c2[0]), 0.5 * (c1[1] + c2[1])];
    let center = [
        mid[0] - normal[0] * radius * theta.cos(),
        mid[1] - normal[1] * radius * theta.cos(),
    ];
    // Rotating c1 about the center must reach the normal direction after
    // theta; the cross product sign picks the orientation.
    let c1_rel = sub(c1, &center);
    let sweep = cross(&c1_rel, &normal).signum();
    let pivot_rel = rotate(&c1_rel, sweep * 2.0 * a1);
    Ok(Pivot {
        center,
        radius,
        pivot: [center[0] + pivot_rel[0], center[1] + pivot_rel[1]],
        sweep,
    })
}

/// Intersection of the segment from `q` to the pivot with the circle arc
/// opposite the pivot. `None` when the segment misses that arc, i.e. the
/// relatively optimal solution is degenerate for this branching.
fn place_on_arc(q: &[f64], rec: &PivotRecord) -> Option<[f64; 2]> {
    let p = &rec.pivot;
    let o = &rec.center;
    let dir = sub(p, q);
    let len2 = dir[0] * dir[0] + dir[1] * dir[1];
    if len2 == 0.0 {
        return None;
    }
    // t = 1 hits the pivot; the product of the quadratic's roots gives
    // the second circle intersection directly.
    let qo = sub(q, o);
    let t = (qo[0] * qo[0] + qo[1] * qo[1] - rec.radius * rec.radius) / len2;
    if !(t > 1e-12 && t < 1.0 - 1e-12) {
        return None;
    }
    let bp = [q[0] + t * dir[0], q[1] + t * dir[1]];
    // Must land on the arc opposite the pivot.
    let chord = sub(&rec.chord.1, &rec.chord.0);
    if cross(&chord, &sub(&bp, &rec.chord.0)) * rec.side as f64 >= 0.0 {
        return None;
    }
    Some(bp)
}

/// Optimal single branching between a parent `a0` and children `a1`,
/// `a2` with absolute child flows `m1`, `m2`. Returns the branching
/// point position together with its classification: the corner
/// conditions first (V/L place the point on a terminal), otherwise the
/// Y-point from the pivot construction. A numerically tangent
/// segment/arc intersection falls back to the nearest circle point and
/// flags the branching transient.
pub fn optimal_bp_single(
    a0: &[f64],
    a1: &[f64],
    a2: &[f64],
    m1: f64,
    m2: f64,
    alpha: f64,
    mode: BranchingMode,
) -> Result<(Vec<f64>, BranchingClass), BotError> {
    if a0.len() != 2 || a1.len() != 2 || a2.len() != 2 {
        return Err(BotError::InvalidArgument(
            "pivot construction is 2D only".into(),
        ));
    }
    let class = classify_branching(a0, a1, a2, m1, m2, alpha, mode)?;
    match class.kind {
        BranchKind::V => return Ok((a0.to_vec(), class)),
        BranchKind::L1 => return Ok((a1.to_vec(), class)),
        BranchKind::L2 => return Ok((a2.to_vec(), class)),
        BranchKind::Y => {}
    }
    let (t1, t2) = class.optimal_angles;
    // The pivot goes to the half-plane not containing a0.
    let orientation = cross(&sub(a2, a1), &sub(a0, a1));
    if orientation == 0.0 {
        return Err(BotError::DegenerateGeometry(
            "parent is collinear with the children".into(),
        ));
    }
    let side = if orientation > 0.0 { -1 } else { 1 };
    let pivot = build_pivot(a1, a2, t1, t2, side)?;
    let rec = PivotRecord {
        bp: 0,
        child_pair: (1, 2),
        chord: (a1.to_vec(), a2.to_vec()),
        pivot: pivot.pivot.to_vec(),
        center: pivot.center.to_vec(),
        radius: pivot.radius,
        side,
        angles: (t1, t2),
        sweep: pivot.sweep,
    };
    if let Some(bp) = place_on_arc(a0, &rec) {
        Ok((bp.to_vec(), class))
    } else {
        // Tangent within float noise of a regime boundary: take the
        // circle point nearest the parent-pivot segment.
        let qo = sub(a0, &pivot.center);
        let d = norm(&qo);
        let bp = if d == 0.0 {
            rec.chord.0.clone()
        } else {
            vec![
                pivot.center[0] + qo[0] / d * pivot.radius,
                pivot.center[1] + qo[1] / d * pivot.radius,
            ]
        };
        Ok((
            bp,
            BranchingClass {
                transient: true,
                ..class
            },
        ))
    }
}

struct RootedTree {
    /// Parent node per node (root maps to itself).
    parent: Vec<usize>,
    /// Nodes in breadth-first order from the root, ties by ascending id.
    bfs_order: Vec<usize>,
}

fn root_tree(topology: &Topology, root: usize) -> RootedTree {
    let mut adj = topology.adjacency();
    for l in adj.iter_mut() {
        l.sort_unstable();
    }
    let nodes = topology.node_count();
    let mut parent = vec![usize::MAX; nodes];
    parent[root] = root;
    let mut order = Vec::with_capacity(nodes);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(u, _) in &adj[v] {
            if parent[u] == usize::MAX {
                parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    RootedTree {
        parent,
        bfs_order: order,
    }
}

/// Constructs the relatively optimal solution of a full tree topology
/// for a 2D problem, one pivot side choice per branching point. Fails
/// (as a value, not an error) when any branching of the optimum is
/// degenerate, which the pivot construction cannot represent; the
/// single-branching case `n = 3` instead resolves V/L corners exactly.
pub fn construct_ros(
    topology: &Topology,
    problem: &BotProblem,
    root: usize,
    side_choices: &[i8],
) -> Result<ConstructionResult, BotError> {
    if problem.dim != 2 {
        return Err(BotError::InvalidArgument(
            "pivot construction is 2D only".into(),
        ));
    }
    if !topology.is_full() {
        return Err(BotError::InvalidArgument(
            "construction requires a full tree topology".into(),
        ));
    }
    if root >= topology.n_terminals {
        return Err(BotError::InvalidArgument(format!(
            "root {root} is not a terminal"
        )));
    }
    let m = topology.n_bps;
    if side_choices.len() != m {
        return Err(BotError::InvalidArgument(format!(
            "expected {m} side choices, got {}",
            side_choices.len()
        )));
    }
    let n = topology.n_terminals;
    let flows = compute_edge_flows(topology, problem)?;
    let tree = root_tree(topology, root);
    let adj = topology.adjacency();

    // Signed flow out of `node` along the edge to `neighbor`.
    let flow_out = |node: usize, neighbor: usize| -> f64 {
        let &(_, e) = adj[node].iter().find(|&&(u, _)| u == neighbor).unwrap();
        if topology.edges[e].0 == node {
            flows.flow[e]
        } else {
            -flows.flow[e]
        }
    };

    let children: Vec<Option<(usize, usize)>> = (0..topology.node_count())
        .map(|v| {
            if !topology.is_bp(v) {
                return None;
            }
            let mut kids: Vec<usize> = adj[v]
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| u != tree.parent[v])
                .collect();
            kids.sort_unstable();
            Some((kids[0], kids[1]))
        })
        .collect();

    if m == 1 {
        let bp = n;
        let (c1, c2) = children[bp].unwrap();
        let (f1, f2) = (flow_out(bp, c1), flow_out(bp, c2));
        if f1 == 0.0 || f2 == 0.0 {
            return Ok(ConstructionResult::failed(
                side_choices.to_vec(),
                Vec::new(),
                m,
                format!("zero flow on a child edge of branching point {bp}"),
            ));
        }
        let mode = if f1 * f2 > 0.0 {
            BranchingMode::Symmetric
        } else {
            BranchingMode::Asymmetric
        };
        let (pos, class) = optimal_bp_single(
            &problem.terminals[root].pos,
            &problem.terminals[c1].pos,
            &problem.terminals[c2].pos,
            f1.abs(),
            f2.abs(),
            problem.alpha,
            mode,
        )?;
        let coords = assemble_coords(problem, std::slice::from_ref(&pos));
        let cost = bot_cost(topology, &coords, &flows, problem.alpha, 1.0);
        return Ok(ConstructionResult {
            bp_coords: Some(vec![pos]),
            classes: vec![Some(class)],
            side_choices: side_choices.to_vec(),
            cost: Some(cost),
            failure: None,
            pivots: Vec::new(),
        });
    }

    // Bottom-up: summarize children into pivots, furthest nodes first.
    let mut pivots: Vec<Option<PivotRecord>> = vec![None; m];
    let mut classes: Vec<Option<BranchingClass>> = vec![None; m];
    for &v in tree.bfs_order.iter().rev() {
        if !topology.is_bp(v) {
            continue;
        }
        let (c1, c2) = children[v].unwrap();
        let effective = |c: usize| -> Vec<f64> {
            if topology.is_bp(c) {
                pivots[c - n].as_ref().unwrap().pivot.clone()
            } else {
                problem.terminals[c].pos.clone()
            }
        };
        let (p1, p2) = (effective(c1), effective(c2));
        let (f1, f2) = (flow_out(v, c1), flow_out(v, c2));
        if f1 == 0.0 || f2 == 0.0 {
            return Ok(ConstructionResult::failed(
                side_choices.to_vec(),
                collect_pivots(&pivots),
                m,
                format!("zero flow on a child edge of branching point {v}"),
            ));
        }
        let mode = if f1 * f2 > 0.0 {
            BranchingMode::Symmetric
        } else {
            BranchingMode::Asymmetric
        };
        let (t1, t2, degenerate) = optimal_angle_pair(problem.alpha, f1.abs(), f2.abs(), mode)?;
        if degenerate || t1 + t2 <= 0.0 || t1 + t2 >= std::f64::consts::PI {
            return Ok(ConstructionResult::failed(
                side_choices.to_vec(),
                collect_pivots(&pivots),
                m,
                format!("degenerate branching angles at branching point {v}"),
            ));
        }
        let side = side_choices[v - n];
        let pivot = match build_pivot(&p1, &p2, t1, t2, side) {
            Ok(p) => p,
            Err(e) => {
                return Ok(ConstructionResult::failed(
                    side_choices.to_vec(),
                    collect_pivots(&pivots),
                    m,
                    format!("pivot for branching point {v}: {e}"),
                ))
            }
        };
        classes[v - n] = Some(BranchingClass {
            kind: BranchKind::Y,
            optimal_angles: (t1, t2),
            transient: false,
        });
        pivots[v - n] = Some(PivotRecord {
            bp: v,
            child_pair: (c1, c2),
            chord: (p1, p2),
            pivot: pivot.pivot.to_vec(),
            center: pivot.center.to_vec(),
            radius: pivot.radius,
            side,
            angles: (t1, t2),
            sweep: pivot.sweep,
        });
    }

    // Top-down: place each branching point on its arc.
    let mut placed: Vec<Option<[f64; 2]>> = vec![None; topology.node_count()];
    for t in 0..n {
        placed[t] = Some([problem.terminals[t].pos[0], problem.terminals[t].pos[1]]);
    }
    for &v in &tree.bfs_order {
        if !topology.is_bp(v) {
            continue;
        }
        let q = placed[tree.parent[v]].expect("parents are placed first");
        let rec = pivots[v - n].as_ref().unwrap();
        match place_on_arc(&q, rec) {
            Some(bp) => placed[v] = Some(bp),
            None => {
                return Ok(ConstructionResult::failed(
                    side_choices.to_vec(),
                    collect_pivots(&pivots),
                    m,
                    format!("segment to pivot misses the arc of branching point {v}"),
                ))
            }
        }
    }

    let bp_coords: Vec<Vec<f64>> = (n..topology.node_count())
        .map(|v| placed[v].unwrap().to_vec())
        .collect();

    // Verify the realized angles; a failure here means the side choices
    // produced a stationary-looking but invalid embedding.
    for &v in &tree.bfs_order {
        if !topology.is_bp(v) {
            continue;
        }
        let b = placed[v].unwrap();
        let q = placed[tree.parent[v]].unwrap();
        let (c1, c2) = children[v].unwrap();
        let ext = [2.0 * b[0] - q[0], 2.0 * b[1] - q[1]];
        let (t1, t2) = pivots[v - n].as_ref().unwrap().angles;
        let a1 = crate::angles::angle_at(&b, &placed[c1].unwrap(), &ext)?;
        let a2 = crate::angles::angle_at(&b, &placed[c2].unwrap(), &ext)?;
        if (a1 - t1).abs() > 1e-6 || (a2 - t2).abs() > 1e-6 {
            return Ok(ConstructionResult::failed(
                side_choices.to_vec(),
                collect_pivots(&pivots),
                m,
                format!(
                    "realized angles ({a1:.6}, {a2:.6}) at branching point {v} \
                     deviate from optimal ({t1:.6}, {t2:.6})"
                ),
            ));
        }
    }

    let coords = assemble_coords(problem, &bp_coords);
    let cost = bot_cost(topology, &coords, &flows, problem.alpha, 1.0);
    Ok(ConstructionResult {
        bp_coords: Some(bp_coords),
        classes,
        side_choices: side_choices.to_vec(),
        cost: Some(cost),
        failure: None,
        pivots: collect_pivots(&pivots),
    })
}

fn collect_pivots(pivots: &[Option<PivotRecord>]) -> Vec<PivotRecord> {
    pivots.iter().flatten().cloned().collect()
}

/// Outcome of trying every side-choice combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhaustiveConstruction {
    /// Cheapest successful construction, if any succeeded.
    pub best: Option<ConstructionResult>,
    pub attempts: usize,
    pub successes: usize,
}

/// Tries all `2^(n-2)` pivot side combinations (root fixed at terminal
/// 0) and returns the cheapest successful construction.
pub fn construct_ros_exhaustive(
    topology: &Topology,
    problem: &BotProblem,
) -> Result<ExhaustiveConstruction, BotError> {
    let n = topology.n_terminals;
    if n > EXHAUSTIVE_TERMINAL_CAP {
        return Err(BotError::InvalidArgument(format!(
            "exhaustive side search capped at {EXHAUSTIVE_TERMINAL_CAP} terminals, got {n}"
        )));
    }
    let m = topology.n_bps;
    let combos = 1usize << m;
    let mut best: Option<ConstructionResult> = None;
    let mut successes = 0;
    for mask in 0..combos {
        let sides: Vec<i8> = (0..m)
            .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
            .collect();
        let result = construct_ros(topology, problem, 0, &sides)?;
        if result.succeeded() {
            successes += 1;
            let better = match &best {
                None => true,
                Some(b) => result.cost.unwrap() < b.cost.unwrap(),
            };
            if better {
                best = Some(result);
            }
        }
    }
    Ok(ExhaustiveConstruction {
        best,
        attempts: combos,
        successes,
    })
}

/// Convenience wrapper used in tests and cross-validation: the optimizer
/// solution for the same topology at tight tolerance.
pub fn irls_reference_cost(
    topology: &Topology,
    problem: &BotProblem,
    seed: u64,
) -> Result<f64, BotError> {
    let config = SolverConfig::default()
        .with_eta(1e-12)
        .with_max_iters(50_000);
    let result = crate::geometry::optimize_branching_points(
        topology,
        problem,
        crate::geometry::BpInit::Random(seed),
        &config,
    )?;
    Ok(result.cost)
}
