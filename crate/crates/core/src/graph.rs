//! Qubit interaction graph and gate-dependency DAG.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::circuit::Circuit;
use crate::error::{Error, Result};

/// Weighted undirected graph over qubits; edge weight counts two-qubit gates on the pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    n_nodes: usize,
    /// Keyed by `(min, max)`.
    weights: BTreeMap<(usize, usize), u64>,
    neighbors: Vec<Vec<usize>>,
}

impl InteractionGraph {
    /// Builds a graph from explicit weighted edges. Parallel entries accumulate.
    pub fn from_weighted_edges(n_nodes: usize, edges: impl IntoIterator<Item = (usize, usize, u64)>) -> Self {
        let mut weights = BTreeMap::new();
        for (a, b, w) in edges {
            assert!(a != b && a < n_nodes && b < n_nodes, "invalid edge ({a},{b})");
            if w > 0 {
                *weights.entry((a.min(b), a.max(b))).or_insert(0) += w;
            }
        }
        let mut neighbors = vec![Vec::new(); n_nodes];
        for &(a, b) in weights.keys() {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for n in &mut neighbors {
            n.sort_unstable();
        }
        InteractionGraph {
            n_nodes,
            weights,
            neighbors,
        }
    }

    pub fn from_edges(n_nodes: usize, edges: &[(usize, usize)]) -> Self {
        Self::from_weighted_edges(n_nodes, edges.iter().map(|&(a, b)| (a, b, 1)))
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, a: usize, b: usize) -> u64 {
        self.weights.get(&(a.min(b), a.max(b))).copied().unwrap_or(0)
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.values().sum()
    }

    /// Edges as `(a, b, weight)` with `a < b`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.weights.iter().map(|(&(a, b), &w)| (a, b, w))
    }

    /// Neighbors in the unweighted skeleton, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn weighted_degree(&self, v: usize) -> u64 {
        self.neighbors[v].iter().map(|&u| self.weight(u, v)).sum()
    }

    pub fn adjacency_matrix(&self) -> Vec<Vec<u64>> {
        let mut a = vec![vec![0; self.n_nodes]; self.n_nodes];
        for (u, v, w) in self.edges() {
            a[u][v] = w;
            a[v][u] = w;
        }
        a
    }

    /// Connected components of the skeleton, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n_nodes];
        let mut out = Vec::new();
        for s in 0..self.n_nodes {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.neighbors[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The largest component; ties go to the one with the smallest member.
    pub fn largest_component(&self) -> Vec<usize> {
        let mut best: Vec<usize> = Vec::new();
        for c in self.components() {
            if c.len() > best.len() {
                best = c;
            }
        }
        best
    }

    pub fn is_connected(&self) -> bool {
        self.n_nodes <= 1 || self.components().len() == 1
    }

    /// Plain `a b weight` lines.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (a, b, w) in self.edges() {
            let _ = writeln!(s, "{a} {b} {w}");
        }
        s
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph interaction {\n");
        for v in 0..self.n_nodes {
            let _ = writeln!(s, "  q{v};");
        }
        for (a, b, w) in self.edges() {
            let _ = writeln!(s, "  q{a} -- q{b} [label=\"{w}\", weight={w}];");
        }
        s.push_str("}\n");
        s
    }
}

pub fn build_interaction_graph(c: &Circuit) -> InteractionGraph {
    InteractionGraph::from_weighted_edges(
        c.n_qubits(),
        c.gates()
            .iter()
            .filter(|g| g.is_two_qubit())
            .map(|g| (g.qubits[0], g.qubits[1], 1)),
    )
}

/// Node kinds in the gate-dependency graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GdgNode {
    Source,
    /// Gate index into the circuit.
    Gate(usize),
    Sink,
}

/// DAG over gates bounded by `source` (node 0) and `sink` (node `n_gates + 1`).
///
/// Gate `i` of the circuit is node `i + 1`. Parallel edges are collapsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateDependencyGraph {
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
    two_qubit: Vec<bool>,
    order: Vec<usize>,
}

impl GateDependencyGraph {
    pub const SOURCE: usize = 0;

    /// Builds a graph from raw parts: `n_gates` gate nodes, arity flags and
    /// edges between node ids (0 = source, `n_gates + 1` = sink). The stored
    /// ordering is computed with [`topological_order`].
    pub fn from_edges(two_qubit: Vec<bool>, edges: &[(usize, usize)]) -> Result<Self> {
        let n_nodes = two_qubit.len() + 2;
        let mut children = vec![Vec::new(); n_nodes];
        let mut parents = vec![Vec::new(); n_nodes];
        for &(u, v) in edges {
            if u >= n_nodes || v >= n_nodes {
                return Err(Error::InvalidCircuit(format!("edge ({u},{v}) out of range")));
            }
            if !children[u].contains(&v) {
                children[u].push(v);
                parents[v].push(u);
            }
        }
        let mut flags = vec![false];
        flags.extend(two_qubit);
        flags.push(false);
        let mut g = GateDependencyGraph {
            children,
            parents,
            two_qubit: flags,
            order: Vec::new(),
        };
        g.order = topological_order(&g)?;
        Ok(g)
    }

    pub fn n_nodes(&self) -> usize {
        self.children.len()
    }

    pub fn n_gates(&self) -> usize {
        self.children.len() - 2
    }

    pub fn sink(&self) -> usize {
        self.children.len() - 1
    }

    pub fn node(&self, id: usize) -> GdgNode {
        if id == Self::SOURCE {
            GdgNode::Source
        } else if id == self.sink() {
            GdgNode::Sink
        } else {
            GdgNode::Gate(id - 1)
        }
    }

    pub fn is_gate(&self, id: usize) -> bool {
        id != Self::SOURCE && id != self.sink()
    }

    pub fn is_two_qubit(&self, id: usize) -> bool {
        self.two_qubit[id]
    }

    pub fn children(&self, id: usize) -> &[usize] {
        &self.children[id]
    }

    pub fn parents(&self, id: usize) -> &[usize] {
        &self.parents[id]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(u, cs)| cs.iter().map(move |&v| (u, v)))
    }

    pub fn n_edges(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    /// Stored topological ordering: source first, sink last.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{} {}", self.label(u), self.label(v));
        }
        s
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph dependencies {\n");
        for id in 0..self.n_nodes() {
            let shape = if self.is_gate(id) { "ellipse" } else { "box" };
            let _ = writeln!(s, "  {} [shape={shape}];", self.label(id));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "  {} -> {};", self.label(u), self.label(v));
        }
        s.push_str("}\n");
        s
    }

    fn label(&self, id: usize) -> String {
        match self.node(id) {
            GdgNode::Source => "source".to_string(),
            GdgNode::Sink => "sink".to_string(),
            GdgNode::Gate(g) => format!("g{g}"),
        }
    }
}

/// Linear scan: each gate gets an edge from the last gate on each of its
/// qubits (or from source), and childless gates link to sink.
pub fn build_gdg(c: &Circuit) -> GateDependencyGraph {
    let n_gates = c.n_gates();
    let sink = n_gates + 1;
    let mut children = vec![Vec::new(); n_gates + 2];
    let mut parents = vec![Vec::new(); n_gates + 2];
    let mut last = vec![GateDependencyGraph::SOURCE; c.n_qubits()];
    let mut flags = Vec::with_capacity(n_gates + 2);
    flags.push(false);
    for (i, g) in c.gates().iter().enumerate() {
        let w = i + 1;
        for &q in &g.qubits {
            let v = last[q];
            if !children[v].contains(&w) {
                children[v].push(w);
                parents[w].push(v);
            }
            last[q] = w;
        }
        flags.push(g.is_two_qubit());
    }
    flags.push(false);
    for w in 1..=n_gates {
        if children[w].is_empty() {
            children[w].push(sink);
            parents[sink].push(w);
        }
    }
    if n_gates == 0 {
        children[0].push(sink);
        parents[sink].push(0);
    }
    GateDependencyGraph {
        children,
        parents,
        two_qubit: flags,
        // program order is topological by construction
        order: (0..n_gates + 2).collect(),
    }
}

/// Kahn's algorithm; ties resolved by smallest node id. Source first, sink last.
pub fn topological_order(g: &GateDependencyGraph) -> Result<Vec<usize>> {
    let n = g.n_nodes();
    let mut indeg: Vec<usize> = (0..n).map(|v| g.parents(v).len()).collect();
    let mut ready = std::collections::BinaryHeap::new();
    for (v, &d) in indeg.iter().enumerate() {
        if d == 0 {
            ready.push(std::cmp::Reverse(v));
        }
    }
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(u)) = ready.pop() {
        order.push(u);
        for &v in g.children(u) {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(std::cmp::Reverse(v));
            }
        }
    }
    if order.len() != n {
        return Err(Error::CycleDetected);
    }
    if order.first() != Some(&GateDependencyGraph::SOURCE) || order.last() != Some(&g.sink()) {
        return Err(Error::InvalidCircuit(
            "source must be the unique first node and sink the unique last".into(),
        ));
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ig_accumulates_multiplicity() {
        let mut c = Circuit::new("c", 2);
        c.add("cx", &[0, 1]).add("cx", &[1, 0]);
        let ig = build_interaction_graph(&c);
        assert_eq!(ig.n_edges(), 1);
        assert_eq!(ig.weight(0, 1), 2);
        assert_eq!(ig.total_weight(), 2);
    }

    #[test]
    fn ig_keeps_isolated_qubits() {
        let mut c = Circuit::new("c", 4);
        c.add("h", &[0]).add("cx", &[0, 1]).add("cx", &[1, 2]).add("cx", &[2, 3]);
        let ig = build_interaction_graph(&c);
        assert_eq!(ig.n_nodes(), 4);
        let edges: Vec<_> = ig.edges().collect();
        assert_eq!(edges, vec![(0, 1, 1), (1, 2, 1), (2, 3, 1)]);

        let mut c = Circuit::new("c", 3);
        c.add("x", &[2]).add("cx", &[0, 1]);
        let ig = build_interaction_graph(&c);
        assert_eq!(ig.components(), vec![vec![0, 1], vec![2]]);
        assert!(!ig.is_connected());
    }

    #[test]
    fn gdg_small_example() {
        let mut c = Circuit::new("c", 2);
        c.add("h", &[0]).add("cx", &[0, 1]).add("x", &[1]);
        let g = build_gdg(&c);
        let mut edges: Vec<_> = g.edges().collect();
        edges.sort();
        // source=0, h=1, cx=2, x=3, sink=4
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn gdg_collapses_parallel_edges() {
        let mut c = Circuit::new("c", 2);
        c.add("cx", &[0, 1]).add("cz", &[0, 1]);
        let g = build_gdg(&c);
        assert_eq!(g.children(0), &[1]);
        assert_eq!(g.children(1), &[2]);
        assert_eq!(g.parents(2), &[1]);
    }

    #[test]
    fn gdg_empty_circuit() {
        let g = build_gdg(&Circuit::new("e", 2));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(topological_order(&g).unwrap(), vec![0, 1]);
    }

    #[test]
    fn topo_chain_and_diamond() {
        let chain = GateDependencyGraph::from_edges(vec![false; 2], &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(topological_order(&chain).unwrap(), vec![0, 1, 2, 3]);

        // source -> {a, b} -> c -> sink
        let diamond = GateDependencyGraph::from_edges(
            vec![false; 3],
            &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)],
        )
        .unwrap();
        let order = topological_order(&diamond).unwrap();
        assert_eq!(order[0], 0);
        assert_eq!(order[3], 3);
        assert_eq!(order[4], 4);
    }

    #[test]
    fn topo_detects_cycle() {
        let err = GateDependencyGraph::from_edges(vec![false; 2], &[(0, 1), (1, 2), (2, 1), (2, 3)]).unwrap_err();
        assert!(matches!(err, Error::CycleDetected));
    }

    #[test]
    fn dot_output_mentions_every_edge() {
        let mut c = Circuit::new("c", 2);
        c.add("cx", &[0, 1]);
        let dot = build_gdg(&c).to_dot();
        assert!(dot.contains("source -> g0;"));
        assert!(dot.contains("g0 -> sink;"));
        assert!(build_interaction_graph(&c).to_dot().contains("q0 -- q1"));
    }
}
