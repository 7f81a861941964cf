//! Interaction-graph features.
//!
//! Hop-count metrics (shortest paths, betweenness, cliques, clustering,
//! coreness, connectivity) run on the unweighted skeleton. Degree, adjacency
//! spread and pagerank use the edge weights. All standard deviations are
//! population standard deviations.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::InteractionGraph;

pub const PAGERANK_DAMPING: f64 = 0.85;
pub const PAGERANK_TOLERANCE: f64 = 1e-9;
pub const PAGERANK_MAX_ITER: usize = 10_000;
/// Default cap on the number of maximal cliques enumerated.
pub const CLIQUE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IgFeatureSet {
    /// `None` when the graph has no edges.
    pub avg_shortest_path: Option<f64>,
    pub adjacency_std: f64,
    pub diameter: Option<usize>,
    pub central_point_of_dominance: f64,
    pub avg_degree: f64,
    pub n_maximal_cliques: usize,
    pub max_clique_size: usize,
    /// True when enumeration hit the budget; the count is then a lower bound.
    pub cliques_capped: bool,
    pub clustering_coefficient: f64,
    pub vertex_connectivity: usize,
    pub edge_connectivity: usize,
    pub coreness_max: usize,
    pub coreness_mean: f64,
    pub pagerank_std: f64,
    /// Distance metrics were taken over the largest component only.
    pub disconnected: bool,
}

pub fn ig_features(ig: &InteractionGraph) -> Result<IgFeatureSet> {
    let distance = distance_metrics(ig).ok();
    let degree = degree_metrics(ig);
    let centrality = centrality_metrics(ig)?;
    let cohesion = cohesion_metrics(ig, CLIQUE_BUDGET);
    let connectivity = connectivity_metrics(ig);
    Ok(IgFeatureSet {
        avg_shortest_path: distance.map(|d| d.avg_shortest_path),
        adjacency_std: degree.adjacency_std,
        diameter: distance.map(|d| d.diameter),
        central_point_of_dominance: centrality.central_point_of_dominance,
        avg_degree: degree.avg_degree,
        n_maximal_cliques: cohesion.n_maximal_cliques,
        max_clique_size: cohesion.max_clique_size,
        cliques_capped: cohesion.capped,
        clustering_coefficient: cohesion.clustering_coefficient,
        vertex_connectivity: connectivity.vertex_connectivity,
        edge_connectivity: connectivity.edge_connectivity,
        coreness_max: cohesion.coreness_max,
        coreness_mean: cohesion.coreness_mean,
        pagerank_std: centrality.pagerank_std,
        disconnected: !ig.is_connected(),
    })
}

// ---------------------------------------------------------------------------
// Distances

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceMetrics {
    pub avg_shortest_path: f64,
    pub diameter: usize,
}

fn bfs(ig: &InteractionGraph, s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; ig.n_nodes()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap_or(0);
        for &v in ig.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Mean hop count over unordered pairs and diameter, both over the largest component.
pub fn distance_metrics(ig: &InteractionGraph) -> Result<DistanceMetrics> {
    let comp = ig.largest_component();
    if comp.len() < 2 {
        return Err(Error::UndefinedMetric("avg_shortest_path"));
    }
    let (mut total, mut pairs, mut diameter) = (0usize, 0usize, 0usize);
    for &s in &comp {
        let dist = bfs(ig, s);
        for &t in &comp {
            if t > s {
                let d = dist[t].unwrap_or(0);
                total += d;
                pairs += 1;
                diameter = diameter.max(d);
            }
        }
    }
    Ok(DistanceMetrics {
        avg_shortest_path: total as f64 / pairs as f64,
        diameter,
    })
}

// ---------------------------------------------------------------------------
// Degree

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeMetrics {
    pub avg_degree: f64,
    pub adjacency_std: f64,
}

pub fn degree_metrics(ig: &InteractionGraph) -> DegreeMetrics {
    let n = ig.n_nodes();
    if n == 0 {
        return DegreeMetrics {
            avg_degree: 0.0,
            adjacency_std: 0.0,
        };
    }
    let avg_degree = 2.0 * ig.total_weight() as f64 / n as f64;
    let entries = n * (n - 1) / 2;
    let adjacency_std = if entries == 0 {
        0.0
    } else {
        // zeros contribute nothing to the sums
        let (sum, sum_sq) = ig
            .edges()
            .fold((0.0, 0.0), |(s, s2), (_, _, w)| (s + w as f64, s2 + (w * w) as f64));
        let mean = sum / entries as f64;
        (sum_sq / entries as f64 - mean * mean).max(0.0).sqrt()
    };
    DegreeMetrics {
        avg_degree,
        adjacency_std,
    }
}

// ---------------------------------------------------------------------------
// Centrality

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CentralityMetrics {
    pub central_point_of_dominance: f64,
    pub pagerank_std: f64,
}

/// Unnormalized betweenness on the skeleton (Brandes), counting each unordered pair once.
pub fn betweenness(ig: &InteractionGraph) -> Vec<f64> {
    let n = ig.n_nodes();
    let mut bc = vec![0.0; n];
    for s in 0..n {
        let mut stack = Vec::with_capacity(n);
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![usize::MAX; n];
        sigma[s] = 1.0;
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in ig.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        let mut delta = vec![0.0; n];
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                bc[w] += delta[w];
            }
        }
    }
    for b in &mut bc {
        *b /= 2.0;
    }
    bc
}

/// Weighted pagerank by power iteration. Dangling nodes spread uniformly.
pub fn pagerank(ig: &InteractionGraph) -> Result<Vec<f64>> {
    let n = ig.n_nodes();
    if n == 0 {
        return Ok(Vec::new());
    }
    let nf = n as f64;
    let out_weight: Vec<f64> = (0..n).map(|v| ig.weighted_degree(v) as f64).collect();
    let mut rank = vec![1.0 / nf; n];
    let mut residual = f64::INFINITY;
    for _ in 0..PAGERANK_MAX_ITER {
        let dangling: f64 = (0..n).filter(|&v| out_weight[v] == 0.0).map(|v| rank[v]).sum();
        let base = (1.0 - PAGERANK_DAMPING) / nf + PAGERANK_DAMPING * dangling / nf;
        let mut next = vec![base; n];
        for (u, v, w) in ig.edges() {
            let w = w as f64;
            next[v] += PAGERANK_DAMPING * rank[u] * w / out_weight[u];
            next[u] += PAGERANK_DAMPING * rank[v] * w / out_weight[v];
        }
        residual = next.iter().zip(&rank).map(|(a, b)| (a - b).abs()).sum();
        rank = next;
        if residual < PAGERANK_TOLERANCE {
            return Ok(rank);
        }
    }
    Err(Error::PagerankNotConverged {
        iterations: PAGERANK_MAX_ITER,
        residual,
    })
}

pub fn population_std(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Central point of dominance: the largest betweenness in the largest
/// component, normalized by the number of node pairs excluding the node.
pub fn central_point_of_dominance(ig: &InteractionGraph) -> f64 {
    let comp = ig.largest_component();
    let n = comp.len();
    if n < 3 {
        return 0.0;
    }
    let bc = betweenness(ig);
    let pairs = ((n - 1) * (n - 2) / 2) as f64;
    comp.iter().map(|&v| bc[v] / pairs).fold(0.0, f64::max)
}

pub fn centrality_metrics(ig: &InteractionGraph) -> Result<CentralityMetrics> {
    Ok(CentralityMetrics {
        central_point_of_dominance: central_point_of_dominance(ig),
        pagerank_std: population_std(&pagerank(ig)?),
    })
}

// ---------------------------------------------------------------------------
// Cohesion: cliques, clustering, coreness

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohesionMetrics {
    pub n_maximal_cliques: usize,
    pub max_clique_size: usize,
    pub capped: bool,
    pub clustering_coefficient: f64,
    pub coreness_max: usize,
    pub coreness_mean: f64,
}

pub fn cohesion_metrics(ig: &InteractionGraph, clique_budget: usize) -> CohesionMetrics {
    let mut count = 0usize;
    let mut max_size = 0usize;
    let capped = !for_each_maximal_clique(ig, clique_budget, |c| {
        count += 1;
        max_size = max_size.max(c.len());
    });
    let core = core_numbers(ig);
    let n = ig.n_nodes();
    CohesionMetrics {
        n_maximal_cliques: count,
        max_clique_size: max_size,
        capped,
        clustering_coefficient: clustering_coefficient(ig),
        coreness_max: core.iter().copied().max().unwrap_or(0),
        coreness_mean: if n == 0 {
            0.0
        } else {
            core.iter().sum::<usize>() as f64 / n as f64
        },
    }
}

/// All maximal cliques (isolated nodes are singleton cliques), each sorted.
pub fn maximal_cliques(ig: &InteractionGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_maximal_clique(ig, usize::MAX, |c| {
        let mut c = c.to_vec();
        c.sort_unstable();
        out.push(c);
    });
    out.sort();
    out
}

/// Bron–Kerbosch with Tomita pivoting. Returns false when stopped by the budget.
pub fn for_each_maximal_clique(ig: &InteractionGraph, budget: usize, mut visit: impl FnMut(&[usize])) -> bool {
    let n = ig.n_nodes();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|v| {
            let mut row = vec![false; n];
            for &u in ig.neighbors(v) {
                row[u] = true;
            }
            row
        })
        .collect();
    let mut found = 0usize;
    let mut r = Vec::new();
    let p: Vec<usize> = (0..n).collect();
    bron_kerbosch(&adj, &mut r, p, Vec::new(), &mut found, budget, &mut visit)
}

fn bron_kerbosch(
    adj: &[Vec<bool>],
    r: &mut Vec<usize>,
    mut p: Vec<usize>,
    mut x: Vec<usize>,
    found: &mut usize,
    budget: usize,
    visit: &mut impl FnMut(&[usize]),
) -> bool {
    if p.is_empty() {
        if x.is_empty() && !r.is_empty() {
            if *found >= budget {
                return false;
            }
            *found += 1;
            visit(r);
        }
        return true;
    }
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| (p.iter().filter(|&&v| adj[u][v]).count(), std::cmp::Reverse(u)))
        .unwrap_or(p[0]);
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    for v in candidates {
        let np: Vec<usize> = p.iter().copied().filter(|&u| adj[v][u]).collect();
        let nx: Vec<usize> = x.iter().copied().filter(|&u| adj[v][u]).collect();
        r.push(v);
        let ok = bron_kerbosch(adj, r, np, nx, found, budget, visit);
        r.pop();
        if !ok {
            return false;
        }
        p.retain(|&u| u != v);
        x.push(v);
    }
    true
}

/// Mean of local clustering coefficients; nodes with degree < 2 count as 0.
pub fn clustering_coefficient(ig: &InteractionGraph) -> f64 {
    let n = ig.n_nodes();
    if n == 0 {
        return 0.0;
    }
    let total: f64 = (0..n)
        .map(|v| {
            let nb = ig.neighbors(v);
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if ig.neighbors(a).binary_search(&b).is_ok() {
                        links += 1;
                    }
                }
            }
            links as f64 / (k * (k - 1) / 2) as f64
        })
        .sum();
    total / n as f64
}

/// Core number of each node by repeated minimum-degree peeling.
pub fn core_numbers(ig: &InteractionGraph) -> Vec<usize> {
    let n = ig.n_nodes();
    let mut degree: Vec<usize> = (0..n).map(|v| ig.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut core = vec![0; n];
    let mut k = 0;
    for _ in 0..n {
        let Some(v) = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (degree[v], v)) else {
            break;
        };
        k = k.max(degree[v]);
        core[v] = k;
        removed[v] = true;
        for &u in ig.neighbors(v) {
            if !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    core
}

// ---------------------------------------------------------------------------
// Connectivity

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConnectivityMetrics {
    pub vertex_connectivity: usize,
    pub edge_connectivity: usize,
}

struct FlowNetwork {
    // (to, capacity, index of reverse arc)
    arcs: Vec<Vec<(usize, usize, usize)>>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        FlowNetwork {
            arcs: vec![Vec::new(); n],
        }
    }

    fn add_arc(&mut self, u: usize, v: usize, cap: usize) {
        let ru = self.arcs[v].len();
        let rv = self.arcs[u].len();
        self.arcs[u].push((v, cap, ru));
        self.arcs[v].push((u, 0, rv));
    }

    /// Edmonds–Karp; stops early once `limit` units are pushed.
    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let n = self.arcs.len();
        let mut flow = 0;
        while flow < limit {
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
            let mut queue = VecDeque::from([s]);
            let mut reached = false;
            while let Some(u) = queue.pop_front() {
                for (i, &(v, cap, _)) in self.arcs[u].iter().enumerate() {
                    if cap > 0 && v != s && prev[v].is_none() {
                        prev[v] = Some((u, i));
                        if v == t {
                            reached = true;
                            break;
                        }
                        queue.push_back(v);
                    }
                }
                if reached {
                    break;
                }
            }
            if !reached {
                break;
            }
            let mut bottleneck = usize::MAX;
            let mut v = t;
            while let Some((u, i)) = prev[v] {
                bottleneck = bottleneck.min(self.arcs[u][i].1);
                v = u;
            }
            let mut v = t;
            while let Some((u, i)) = prev[v] {
                let (_, _, rev) = self.arcs[u][i];
                self.arcs[u][i].1 -= bottleneck;
                self.arcs[v][rev].1 += bottleneck;
                v = u;
            }
            flow += bottleneck;
        }
        flow
    }
}

/// Maximum number of edge-disjoint paths between `s` and `t`.
pub fn local_edge_connectivity(ig: &InteractionGraph, s: usize, t: usize) -> usize {
    let mut net = FlowNetwork::new(ig.n_nodes());
    for (a, b, _) in ig.edges() {
        net.add_arc(a, b, 1);
        net.add_arc(b, a, 1);
    }
    net.max_flow(s, t, usize::MAX)
}

/// Maximum number of internally vertex-disjoint paths between non-adjacent `s` and `t`.
pub fn local_vertex_connectivity(ig: &InteractionGraph, s: usize, t: usize) -> usize {
    let n = ig.n_nodes();
    // node v splits into v (in) and v + n (out)
    let mut net = FlowNetwork::new(2 * n);
    let inf = n;
    for v in 0..n {
        let cap = if v == s || v == t { inf } else { 1 };
        net.add_arc(v, v + n, cap);
    }
    for (a, b, _) in ig.edges() {
        net.add_arc(a + n, b, inf);
        net.add_arc(b + n, a, inf);
    }
    net.max_flow(s + n, t, inf)
}

pub fn edge_connectivity(ig: &InteractionGraph) -> usize {
    let n = ig.n_nodes();
    if n < 2 || !ig.is_connected() {
        return 0;
    }
    (1..n)
        .map(|t| local_edge_connectivity(ig, 0, t))
        .min()
        .unwrap_or(0)
}

pub fn vertex_connectivity(ig: &InteractionGraph) -> usize {
    let n = ig.n_nodes();
    if n < 2 || !ig.is_connected() {
        return 0;
    }
    let mut best = (0..n).map(|v| ig.degree(v)).min().unwrap_or(0).min(n - 1);
    // Checking sources v_0..=v_best against every later node suffices.
    let mut i = 0;
    while i <= best && i < n {
        for j in i + 1..n {
            if ig.weight(i, j) == 0 {
                best = best.min(local_vertex_connectivity(ig, i, j));
            }
        }
        i += 1;
    }
    best
}

pub fn connectivity_metrics(ig: &InteractionGraph) -> ConnectivityMetrics {
    ConnectivityMetrics {
        vertex_connectivity: vertex_connectivity(ig),
        edge_connectivity: edge_connectivity(ig),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> InteractionGraph {
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                e.push((a, b));
            }
        }
        InteractionGraph::from_edges(n, &e)
    }

    fn path(n: usize) -> InteractionGraph {
        let e: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        InteractionGraph::from_edges(n, &e)
    }

    fn star(leaves: usize) -> InteractionGraph {
        let e: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        InteractionGraph::from_edges(leaves + 1, &e)
    }

    #[test]
    fn distances_path_and_complete() {
        let d = distance_metrics(&path(3)).unwrap();
        assert!((d.avg_shortest_path - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.diameter, 2);
        let d = distance_metrics(&complete(3)).unwrap();
        assert_eq!(d.avg_shortest_path, 1.0);
        assert_eq!(d.diameter, 1);
    }

    #[test]
    fn distances_undefined_without_edges() {
        let ig = InteractionGraph::from_edges(3, &[]);
        assert!(matches!(distance_metrics(&ig), Err(Error::UndefinedMetric(_))));
    }

    #[test]
    fn distances_use_largest_component() {
        // component {0,1,2} as a path plus an isolated edge {3,4}
        let ig = InteractionGraph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]);
        let d = distance_metrics(&ig).unwrap();
        assert_eq!(d.diameter, 2);
        assert!((d.avg_shortest_path - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn degree_examples() {
        let d = degree_metrics(&complete(3));
        assert_eq!(d.avg_degree, 2.0);
        assert_eq!(d.adjacency_std, 0.0);

        let ig = InteractionGraph::from_weighted_edges(2, [(0, 1, 2)]);
        let d = degree_metrics(&ig);
        assert_eq!(d.avg_degree, 2.0);
        assert_eq!(d.adjacency_std, 0.0);

        let ig = InteractionGraph::from_weighted_edges(3, [(0, 1, 3), (1, 2, 1)]);
        let d = degree_metrics(&ig);
        // population std of {3, 1, 0}
        let expected = (10.0f64 / 3.0 - (4.0f64 / 3.0).powi(2)).sqrt();
        assert!((d.adjacency_std - expected).abs() < 1e-12);
        assert!((d.adjacency_std - 1.247219128924647).abs() < 1e-12);
    }

    #[test]
    fn cpd_anchors() {
        assert!((central_point_of_dominance(&star(3)) - 1.0).abs() < 1e-12);
        assert_eq!(central_point_of_dominance(&complete(4)), 0.0);
        assert_eq!(central_point_of_dominance(&path(2)), 0.0);
    }

    #[test]
    fn pagerank_symmetric_graph() {
        let pr = pagerank(&complete(3)).unwrap();
        for p in &pr {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!(population_std(&pr) < 1e-12);
    }

    #[test]
    fn pagerank_sums_to_one_with_dangling_nodes() {
        let ig = InteractionGraph::from_weighted_edges(5, [(0, 1, 3), (1, 2, 1)]);
        let pr = pagerank(&ig).unwrap();
        assert!((pr.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(pr[1] > pr[0] && pr[0] > pr[2] && pr[2] > pr[3]);
    }

    #[test]
    fn cohesion_complete_and_star() {
        let c = cohesion_metrics(&complete(3), CLIQUE_BUDGET);
        assert_eq!((c.n_maximal_cliques, c.max_clique_size), (1, 3));
        assert_eq!(c.clustering_coefficient, 1.0);
        assert_eq!(core_numbers(&complete(3)), vec![2, 2, 2]);

        let c = cohesion_metrics(&star(3), CLIQUE_BUDGET);
        assert_eq!((c.n_maximal_cliques, c.max_clique_size), (3, 2));
        assert_eq!(c.clustering_coefficient, 0.0);
        assert_eq!(core_numbers(&star(3)), vec![1, 1, 1, 1]);
    }

    #[test]
    fn clique_budget_caps() {
        let c = cohesion_metrics(&star(5), 2);
        assert!(c.capped);
        assert_eq!(c.n_maximal_cliques, 2);
    }

    #[test]
    fn connectivity_examples() {
        let c = connectivity_metrics(&complete(3));
        assert_eq!((c.vertex_connectivity, c.edge_connectivity), (2, 2));
        let c = connectivity_metrics(&path(3));
        assert_eq!((c.vertex_connectivity, c.edge_connectivity), (1, 1));
        let ig = InteractionGraph::from_edges(4, &[(0, 1), (2, 3)]);
        let c = connectivity_metrics(&ig);
        assert_eq!((c.vertex_connectivity, c.edge_connectivity), (0, 0));
        // two triangles sharing a vertex: vertex 1, edge 2
        let ig = InteractionGraph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]);
        let c = connectivity_metrics(&ig);
        assert_eq!((c.vertex_connectivity, c.edge_connectivity), (1, 2));
    }

    #[test]
    fn complete_graph_anchors() {
        for n in 3..=8 {
            let f = ig_features(&complete(n)).unwrap();
            assert_eq!(f.central_point_of_dominance, 0.0);
            assert_eq!(f.clustering_coefficient, 1.0);
            assert_eq!(f.diameter, Some(1));
            assert_eq!(f.vertex_connectivity, n - 1);
            assert_eq!(f.edge_connectivity, n - 1);
        }
    }
}
