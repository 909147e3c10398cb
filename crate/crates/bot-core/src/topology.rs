//! Tree topologies over terminals and branching points, edge flows by
//! leaf elimination, and exhaustive enumeration of full tree topologies.
//!
//! Node ids are global: terminals `0..n`, branching points `n..n+m`.

use serde::{Deserialize, Serialize};

use crate::error::BotError;
use crate::problem::BotProblem;

/// A tree over `n_terminals + n_bps` nodes with undirected edges.
///
/// Flow direction is carried by the sign of a [`FlowAssignment`] entry
/// relative to the stored pair orientation, so topology edits never have
/// to reorient edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub n_terminals: usize,
    pub n_bps: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Topology {
    pub fn node_count(&self) -> usize {
        self.n_terminals + self.n_bps
    }

    /// True when the node id denotes a branching point.
    pub fn is_bp(&self, node: usize) -> bool {
        node >= self.n_terminals
    }

    /// Adjacency list carrying `(neighbor, edge index)` pairs.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.node_count()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Verifies the tree invariants: connected, `nodes - 1` edges, every
    /// terminal of degree >= 1 and every branching point of degree >= 3.
    pub fn validate(&self) -> Result<(), BotError> {
        let nodes = self.node_count();
        if nodes == 0 {
            return Err(BotError::InvalidTopology("no nodes".into()));
        }
        if self.edges.len() + 1 != nodes {
            return Err(BotError::InvalidTopology(format!(
                "{} edges for {} nodes, expected {}",
                self.edges.len(),
                nodes,
                nodes - 1
            )));
        }
        for &(a, b) in &self.edges {
            if a >= nodes || b >= nodes {
                return Err(BotError::InvalidTopology(format!(
                    "edge ({a}, {b}) out of range"
                )));
            }
            if a == b {
                return Err(BotError::InvalidTopology(format!("self loop at {a}")));
            }
        }
        // Edge count + connectivity imply acyclicity.
        let adj = self.adjacency();
        let mut seen = vec![false; nodes];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut visited = 1;
        while let Some(v) = stack.pop() {
            for &(u, _) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    visited += 1;
                    stack.push(u);
                }
            }
        }
        if visited != nodes {
            return Err(BotError::InvalidTopology("not connected".into()));
        }
        for (v, &d) in self.degrees().iter().enumerate() {
            if self.is_bp(v) && d < 3 {
                return Err(BotError::InvalidTopology(format!(
                    "branching point {v} has degree {d}"
                )));
            }
            if !self.is_bp(v) && d == 0 {
                return Err(BotError::InvalidTopology(format!(
                    "terminal {v} is isolated"
                )));
            }
        }
        Ok(())
    }

    /// True for a full tree topology: all terminals of degree 1, all
    /// `n - 2` branching points of degree 3.
    pub fn is_full(&self) -> bool {
        if self.n_terminals < 3 || self.n_bps != self.n_terminals - 2 {
            return false;
        }
        if self.validate().is_err() {
            return false;
        }
        self.degrees()
            .iter()
            .enumerate()
            .all(|(v, &d)| if self.is_bp(v) { d == 3 } else { d == 1 })
    }

    /// Canonical labeled form: branching points relabeled in BFS order
    /// from terminal 0 (neighbors scanned by ascending id), edges sorted.
    /// Only used to deduplicate topologies in tests.
    pub fn canonical_form(&self) -> Vec<(usize, usize)> {
        let mut adj = self.adjacency();
        for l in adj.iter_mut() {
            l.sort_unstable();
        }
        let mut relabel = vec![usize::MAX; self.node_count()];
        for t in 0..self.n_terminals {
            relabel[t] = t;
        }
        let mut next_bp = self.n_terminals;
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut seen = vec![false; self.node_count()];
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            if self.is_bp(v) && relabel[v] == usize::MAX {
                relabel[v] = next_bp;
                next_bp += 1;
            }
            for &(u, _) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (relabel[a], relabel[b]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("topology serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, BotError> {
        serde_json::from_str(text).map_err(|e| BotError::Parse(e.to_string()))
    }
}

/// Signed flow per edge; the sign is relative to the stored orientation,
/// positive meaning transport from the first to the second endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowAssignment {
    pub flow: Vec<f64>,
}

impl FlowAssignment {
    /// Largest conservation residual over all nodes.
    pub fn max_residual(&self, topology: &Topology, problem: &BotProblem) -> f64 {
        let mut residual: Vec<f64> = (0..topology.node_count())
            .map(|v| {
                if v < topology.n_terminals {
                    problem.terminals[v].mu
                } else {
                    0.0
                }
            })
            .collect();
        for (e, &(a, b)) in topology.edges.iter().enumerate() {
            residual[a] -= self.flow[e];
            residual[b] += self.flow[e];
        }
        residual.iter().fold(0.0, |acc, r| acc.max(r.abs()))
    }
}

/// Solves the flow conservation system on a tree by leaf elimination in
/// O(nodes). The solution is unique because the topology is a tree.
pub fn compute_edge_flows(
    topology: &Topology,
    problem: &BotProblem,
) -> Result<FlowAssignment, BotError> {
    if topology.n_terminals != problem.n_terminals() {
        return Err(BotError::InvalidTopology(format!(
            "topology has {} terminals, problem has {}",
            topology.n_terminals,
            problem.n_terminals()
        )));
    }
    topology.validate()?;
    let nodes = topology.node_count();
    let adj = topology.adjacency();
    let mut degree = topology.degrees();
    let mut acc: Vec<f64> = (0..nodes)
        .map(|v| {
            if v < topology.n_terminals {
                problem.terminals[v].mu
            } else {
                0.0
            }
        })
        .collect();
    let mut flow = vec![0.0; topology.edges.len()];
    let mut edge_done = vec![false; topology.edges.len()];
    let mut done = vec![false; nodes];
    let mut leaves: Vec<usize> = (0..nodes).filter(|&v| degree[v] == 1).collect();
    while let Some(v) = leaves.pop() {
        if done[v] {
            continue;
        }
        let Some(&(u, e)) = adj[v].iter().find(|&&(_, e)| !edge_done[e]) else {
            continue; // last remaining node
        };
        let (a, _) = topology.edges[e];
        flow[e] = if v == a { acc[v] } else { -acc[v] };
        edge_done[e] = true;
        done[v] = true;
        acc[u] += acc[v];
        degree[u] -= 1;
        if degree[u] == 1 {
            leaves.push(u);
        }
    }
    Ok(FlowAssignment { flow })
}

/// `(2n - 5)!!`, the number of full tree topologies on `n` terminals.
pub fn full_topology_count(n: usize) -> u128 {
    if n < 3 {
        return 0;
    }
    let mut count: u128 = 1;
    let mut k = 3i64;
    while k <= 2 * n as i64 - 5 {
        count *= k as u128;
        k += 2;
    }
    count
}

/// Enumerates every full tree topology on `n` terminals exactly once.
///
/// Generation is by sequential insertion: terminal `k` attaches via a
/// fresh branching point onto any of the `2k - 3` edges of a topology
/// over the first `k` terminals.
pub fn enumerate_full_topologies(n: usize) -> Result<FullTopologyIter, BotError> {
    if n < 3 {
        return Err(BotError::InvalidArgument(format!(
            "full tree topologies need n >= 3, got {n}"
        )));
    }
    let radices: Vec<usize> = (3..n).map(|t| 2 * t - 3).collect();
    Ok(FullTopologyIter {
        n,
        digits: vec![0; radices.len()],
        radices,
        done: false,
    })
}

/// Odometer over insertion choices; see [`enumerate_full_topologies`].
pub struct FullTopologyIter {
    n: usize,
    digits: Vec<usize>,
    radices: Vec<usize>,
    done: bool,
}

impl FullTopologyIter {
    fn build(&self) -> Topology {
        let n = self.n;
        let mut edges: Vec<(usize, usize)> = vec![(0, n), (1, n), (2, n)];
        for (step, &choice) in self.digits.iter().enumerate() {
            let terminal = 3 + step;
            let bp = n + step + 1;
            let (a, b) = edges[choice];
            edges[choice] = (a, bp);
            edges.push((bp, b));
            edges.push((bp, terminal));
        }
        Topology {
            n_terminals: n,
            n_bps: n - 2,
            edges,
        }
    }
}

impl Iterator for FullTopologyIter {
    type Item = Topology;

    fn next(&mut self) -> Option<Topology> {
        if self.done {
            return None;
        }
        let topology = self.build();
        self.done = true;
        for i in (0..self.digits.len()).rev() {
            self.digits[i] += 1;
            if self.digits[i] < self.radices[i] {
                self.done = false;
                break;
            }
            self.digits[i] = 0;
        }
        Some(topology)
    }
}

/// Star topology: a single branching point joined to every terminal.
/// For `n = 2` the two terminals are joined directly, since a degree-2
/// branching point would be removed by cleanup anyway.
pub fn star_topology(problem: &BotProblem) -> Topology {
    let n = problem.n_terminals();
    if n == 2 {
        return Topology {
            n_terminals: 2,
            n_bps: 0,
            edges: vec![(0, 1)],
        };
    }
    Topology {
        n_terminals: n,
        n_bps: 1,
        edges: (0..n).map(|t| (t, n)).collect(),
    }
}

/// Euclidean minimum spanning tree over the terminals (no branching
/// points), built by Kruskal with ties broken by lexicographic edge index.
pub fn mst_topology(problem: &BotProblem) -> Topology {
    let n = problem.n_terminals();
    let mut candidates: Vec<(f64, usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let d = dist(&problem.terminals[i].pos, &problem.terminals[j].pos);
            candidates.push((d, i, j));
        }
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, v: usize) -> usize {
        let mut root = v;
        while parent[root] != root {
            root = parent[root];
        }
        let mut v = v;
        while parent[v] != root {
            let next = parent[v];
            parent[v] = root;
            v = next;
        }
        root
    }
    let mut edges = Vec::with_capacity(n - 1);
    for (_, i, j) in candidates {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            edges.push((i, j));
            if edges.len() == n - 1 {
                break;
            }
        }
    }
    Topology {
        n_terminals: n,
        n_bps: 0,
        edges,
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A group of branching points occupying (numerically) one position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BpCluster {
    /// Member branching point ids, ascending.
    pub members: Vec<usize>,
    /// Neighbors outside the cluster, ascending; terminals included.
    pub effective_neighbors: Vec<usize>,
    pub effective_degree: usize,
    /// Terminal id within `cluster_tol` of a member, if any.
    pub coincident_terminal: Option<usize>,
}

/// Single-linkage clustering of branching point positions at distance
/// <= `cluster_tol`. `coords` must hold positions for all nodes,
/// terminals first.
pub fn detect_coupled_bps(
    topology: &Topology,
    coords: &[Vec<f64>],
    cluster_tol: f64,
) -> Vec<BpCluster> {
    let n = topology.n_terminals;
    let m = topology.n_bps;
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut Vec<usize>, v: usize) -> usize {
        let mut root = v;
        while parent[root] != root {
            root = parent[root];
        }
        let mut v = v;
        while parent[v] != root {
            let next = parent[v];
            parent[v] = root;
            v = next;
        }
        root
    }
    for i in 0..m {
        for j in i + 1..m {
            if dist(&coords[n + i], &coords[n + j]) <= cluster_tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let adj = topology.adjacency();
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..m {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(n + i);
    }
    groups
        .into_values()
        .map(|members| {
            let member_set: std::collections::BTreeSet<usize> = members.iter().copied().collect();
            let mut neighbors: std::collections::BTreeSet<usize> = Default::default();
            for &bp in &members {
                for &(u, _) in &adj[bp] {
                    if !member_set.contains(&u) {
                        neighbors.insert(u);
                    }
                }
            }
            let coincident_terminal = (0..n).find(|&t| {
                members
                    .iter()
                    .any(|&bp| dist(&coords[t], &coords[bp]) <= cluster_tol)
            });
            let effective_neighbors: Vec<usize> = neighbors.into_iter().collect();
            BpCluster {
                effective_degree: effective_neighbors.len(),
                members,
                effective_neighbors,
                coincident_terminal,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{generate_random_problem, Terminal};

    fn star_problem() -> BotProblem {
        BotProblem::new(
            0.5,
            2,
            vec![
                Terminal {
                    pos: vec![0.0, 0.0],
                    mu: 1.0,
                },
                Terminal {
                    pos: vec![1.0, 1.0],
                    mu: -0.4,
                },
                Terminal {
                    pos: vec![1.0, -1.0],
                    mu: -0.6,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn star_flows_follow_conservation() {
        let p = star_problem();
        let t = star_topology(&p);
        let flows = compute_edge_flows(&t, &p).unwrap();
        // Edges are (0,3), (1,3), (2,3): mass flows toward the sinks.
        assert!((flows.flow[0] - 1.0).abs() < 1e-12);
        assert!((flows.flow[1] + 0.4).abs() < 1e-12);
        assert!((flows.flow[2] + 0.6).abs() < 1e-12);
        assert!(flows.max_residual(&t, &p) < 1e-9);
    }

    #[test]
    fn flows_have_zero_residual_on_random_trees() {
        for seed in 0..20 {
            let p = generate_random_problem(7, 2, seed).unwrap();
            for top in enumerate_full_topologies(7).unwrap().take(40) {
                let flows = compute_edge_flows(&top, &p).unwrap();
                assert!(flows.max_residual(&top, &p) < 1e-9);
            }
        }
    }

    /// Dense oracle: solve the conservation system with Gaussian
    /// elimination over all edges and compare.
    fn dense_flow_oracle(topology: &Topology, problem: &BotProblem) -> Vec<f64> {
        let nodes = topology.node_count();
        let m = topology.edges.len();
        // One conservation row per node (one row is redundant).
        let mut a = vec![vec![0.0f64; m]; nodes];
        let mut rhs = vec![0.0f64; nodes];
        for (e, &(u, v)) in topology.edges.iter().enumerate() {
            a[u][e] = 1.0;
            a[v][e] = -1.0;
        }
        for v in 0..topology.n_terminals {
            rhs[v] = problem.terminals[v].mu;
        }
        // Least squares via normal equations would be overkill: drop the
        // last row and solve the square system with partial pivoting.
        let rows = nodes - 1;
        let mut mat: Vec<Vec<f64>> = (0..rows)
            .map(|r| {
                let mut row = a[r].clone();
                row.push(rhs[r]);
                row
            })
            .collect();
        for col in 0..m {
            let pivot = (col..rows)
                .max_by(|&r1, &r2| {
                    mat[r1][col]
                        .abs()
                        .partial_cmp(&mat[r2][col].abs())
                        .unwrap()
                })
                .unwrap();
            mat.swap(col, pivot);
            let p = mat[col][col];
            assert!(p.abs() > 1e-12, "singular conservation system");
            for r in 0..rows {
                if r != col && mat[r][col] != 0.0 {
                    let factor = mat[r][col] / p;
                    for c in col..=m {
                        mat[r][c] -= factor * mat[col][c];
                    }
                }
            }
        }
        (0..m).map(|e| mat[e][m] / mat[e][e]).collect()
    }

    #[test]
    fn internal_flow_matches_dense_solve_on_four_terminal_pairings() {
        // Two sources (+0.7, +0.3) and two sinks (-0.5, -0.5); check the
        // internal BP-BP edge flow on all three full topologies against
        // the dense linear-solve oracle.
        let p = BotProblem::new(
            0.6,
            2,
            vec![
                Terminal {
                    pos: vec![0.0, 0.0],
                    mu: 0.7,
                },
                Terminal {
                    pos: vec![0.0, 1.0],
                    mu: 0.3,
                },
                Terminal {
                    pos: vec![1.0, 0.0],
                    mu: -0.5,
                },
                Terminal {
                    pos: vec![1.0, 1.0],
                    mu: -0.5,
                },
            ],
        )
        .unwrap();
        let mut internal_magnitudes = Vec::new();
        for top in enumerate_full_topologies(4).unwrap() {
            let flows = compute_edge_flows(&top, &p).unwrap();
            let oracle = dense_flow_oracle(&top, &p);
            for (e, &f) in flows.flow.iter().enumerate() {
                assert!(
                    (f - oracle[e]).abs() < 1e-9,
                    "edge {e} flow {f} vs oracle {}",
                    oracle[e]
                );
            }
            let internal = top
                .edges
                .iter()
                .position(|&(a, b)| top.is_bp(a) && top.is_bp(b))
                .unwrap();
            internal_magnitudes.push(flows.flow[internal].abs());
        }
        internal_magnitudes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Pairing both sources on one BP carries 1.0; the two
        // source/sink pairings carry 0.2.
        assert!((internal_magnitudes[0] - 0.2).abs() < 1e-12);
        assert!((internal_magnitudes[1] - 0.2).abs() < 1e-12);
        assert!((internal_magnitudes[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn enumeration_counts_match_double_factorial() {
        let expected = [(3usize, 1u128), (4, 3), (5, 15), (6, 105), (7, 945), (8, 10395)];
        for (n, count) in expected {
            assert_eq!(full_topology_count(n), count);
            assert_eq!(
                enumerate_full_topologies(n).unwrap().count() as u128,
                count,
                "n = {n}"
            );
        }
    }

    #[test]
    fn enumeration_yields_valid_distinct_full_topologies() {
        for n in 3..=6 {
            let mut seen = std::collections::HashSet::new();
            for top in enumerate_full_topologies(n).unwrap() {
                assert!(top.is_full(), "n = {n}");
                assert!(
                    seen.insert(top.canonical_form()),
                    "duplicate topology for n = {n}"
                );
            }
            assert_eq!(seen.len() as u128, full_topology_count(n));
        }
    }

    #[test]
    fn enumeration_rejects_small_n() {
        assert!(enumerate_full_topologies(2).is_err());
    }

    #[test]
    fn star_topology_shape() {
        let p = star_problem();
        let t = star_topology(&p);
        assert_eq!(t.degrees()[3], 3);
        t.validate().unwrap();

        let big = generate_random_problem(100, 2, 5).unwrap();
        let t = star_topology(&big);
        assert_eq!(t.edges.len(), 100);
        assert_eq!(t.degrees()[100], 100);
        let flows = compute_edge_flows(&t, &big).unwrap();
        for (e, &(a, _)) in t.edges.iter().enumerate() {
            assert!((flows.flow[e].abs() - big.terminals[a].mu.abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn mst_two_terminals_is_single_edge() {
        let p = BotProblem::new(
            1.0,
            2,
            vec![
                Terminal {
                    pos: vec![0.0, 0.0],
                    mu: 1.0,
                },
                Terminal {
                    pos: vec![2.0, 0.0],
                    mu: -1.0,
                },
            ],
        )
        .unwrap();
        let t = mst_topology(&p);
        assert_eq!(t.edges, vec![(0, 1)]);
    }

    #[test]
    fn mst_collinear_points_form_path() {
        let p = BotProblem::new(
            0.0,
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
                    pos: vec![2.0, 0.0],
                    mu: -0.5,
                },
            ],
        )
        .unwrap();
        let mut edges = mst_topology(&p).edges;
        edges.sort_unstable();
        assert_eq!(edges, vec![(0, 1), (1, 2)]);
    }

    /// Prim oracle for the Euclidean MST total length.
    fn prim_total_length(problem: &BotProblem) -> f64 {
        let n = problem.n_terminals();
        let mut in_tree = vec![false; n];
        let mut best = vec![f64::INFINITY; n];
        best[0] = 0.0;
        let mut total = 0.0;
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !in_tree[v])
                .min_by(|&a, &b| best[a].partial_cmp(&best[b]).unwrap())
                .unwrap();
            in_tree[v] = true;
            total += best[v];
            for u in 0..n {
                if !in_tree[u] {
                    let d = dist(&problem.terminals[v].pos, &problem.terminals[u].pos);
                    if d < best[u] {
                        best[u] = d;
                    }
                }
            }
        }
        total
    }

    #[test]
    fn mst_length_matches_prim_oracle() {
        for seed in 0..10 {
            let p = generate_random_problem(10, 2, seed).unwrap();
            let t = mst_topology(&p);
            t.validate().unwrap();
            let total: f64 = t
                .edges
                .iter()
                .map(|&(a, b)| dist(&p.terminals[a].pos, &p.terminals[b].pos))
                .sum();
            assert!((total - prim_total_length(&p)).abs() < 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn coupled_bp_detection() {
        // Two BPs at the same position sharing an edge: one cluster of
        // effective degree 4.
        let top = Topology {
            n_terminals: 4,
            n_bps: 2,
            edges: vec![(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)],
        };
        let coords = vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.5, 0.5],
            vec![0.5, 0.5],
        ];
        let clusters = detect_coupled_bps(&top, &coords, 1e-6);
        assert_eq!(clusters.len(), 1);
        assert_eq!(clusters[0].members, vec![4, 5]);
        assert_eq!(clusters[0].effective_degree, 4);
        assert_eq!(clusters[0].coincident_terminal, None);

        // Well separated BPs: singleton clusters.
        let coords_apart = {
            let mut c = coords.clone();
            c[4] = vec![0.2, 0.5];
            c[5] = vec![0.8, 0.5];
            c
        };
        let clusters = detect_coupled_bps(&top, &coords_apart, 1e-6);
        assert_eq!(clusters.len(), 2);
        assert!(clusters.iter().all(|c| c.effective_degree == 3));

        // BP on top of a terminal: flagged coincident.
        let coords_on_terminal = {
            let mut c = coords_apart;
            c[4] = vec![0.0, 0.0];
            c
        };
        let clusters = detect_coupled_bps(&top, &coords_on_terminal, 1e-6);
        assert_eq!(clusters[0].coincident_terminal, Some(0));
    }

    #[test]
    fn topology_json_round_trip() {
        let top = enumerate_full_topologies(5).unwrap().nth(7).unwrap();
        let text = top.to_json();
        assert_eq!(Topology::from_json(&text).unwrap(), top);
    }
}
