//! Device descriptions: single-core coupling graphs and multi-core layouts.
//!
//! Single-core JSON: `{"n": 5, "edges": [[0,1], ...]}`.
//! Multi-core JSON: `{"cores": 4, "capacity": 10, "core_edges": [[0,1], ...]}`.
//! Both accept an optional `"name"`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SURFACE17: &str = include_str!("../data/topologies/surface17.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CouplingTopology {
    pub name: String,
    n_physical: usize,
    edges: BTreeSet<(usize, usize)>,
    #[serde(skip)]
    adjacency: Vec<Vec<usize>>,
    #[serde(skip)]
    distance: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct CouplingJson {
    name: Option<String>,
    n: usize,
    edges: Vec<[usize; 2]>,
}

#[derive(Deserialize)]
struct MultiCoreJson {
    name: Option<String>,
    cores: usize,
    capacity: usize,
    core_edges: Vec<[usize; 2]>,
}

/// Validates an undirected edge list and returns it normalized.
fn validate_edges(n: usize, edges: &[[usize; 2]]) -> Result<BTreeSet<(usize, usize)>> {
    let mut set = BTreeSet::new();
    for &[a, b] in edges {
        if a >= n || b >= n {
            return Err(Error::Topology(format!("edge ({a},{b}) outside 0..{n}")));
        }
        if a == b {
            return Err(Error::Topology(format!("self-loop on node {a}")));
        }
        if !set.insert((a.min(b), a.max(b))) {
            return Err(Error::Topology(format!("duplicate edge ({a},{b})")));
        }
    }
    Ok(set)
}

fn adjacency_of(n: usize, edges: &BTreeSet<(usize, usize)>) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

/// Hop distances from `src`; `usize::MAX` when unreachable.
fn bfs(adj: &[Vec<usize>], src: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn all_pairs(adj: &[Vec<usize>], what: &str) -> Result<Vec<Vec<usize>>> {
    let dist: Vec<Vec<usize>> = (0..adj.len()).map(|s| bfs(adj, s)).collect();
    if dist.first().is_some_and(|d| d.contains(&usize::MAX)) {
        return Err(Error::Topology(format!("{what} is disconnected")));
    }
    Ok(dist)
}

impl CouplingTopology {
    pub fn new(name: impl Into<String>, n_physical: usize, edges: &[[usize; 2]]) -> Result<Self> {
        if n_physical == 0 {
            return Err(Error::Topology("topology needs at least one qubit".into()));
        }
        let edges = validate_edges(n_physical, edges)?;
        let adjacency = adjacency_of(n_physical, &edges);
        let distance = all_pairs(&adjacency, "coupling graph")?;
        Ok(CouplingTopology {
            name: name.into(),
            n_physical,
            edges,
            adjacency,
            distance,
        })
    }

    pub fn linear(n: usize) -> Result<Self> {
        let edges: Vec<[usize; 2]> = (1..n).map(|i| [i - 1, i]).collect();
        Self::new(format!("linear_{n}"), n, &edges)
    }

    /// `rows × cols` lattice, row-major numbering.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        Self::new(format!("grid_{rows}x{cols}"), rows * cols, &grid_edges(rows, cols))
    }

    pub fn all_to_all(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push([a, b]);
            }
        }
        Self::new(format!("all_to_all_{n}"), n, &edges)
    }

    pub fn surface17() -> Self {
        Self::from_json_str(SURFACE17).expect("bundled surface-17 layout is valid")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: CouplingJson =
            serde_json::from_str(text).map_err(|e| Error::Topology(format!("malformed topology: {e}")))?;
        Self::new(raw.name.unwrap_or_else(|| "custom".into()), raw.n, &raw.edges)
    }

    pub fn n_physical(&self) -> usize {
        self.n_physical
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn are_coupled(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, p: usize) -> &[usize] {
        &self.adjacency[p]
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.distance[a][b]
    }

    /// Breadth-first visiting order from physical qubit 0, neighbors ascending.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n_physical];
        let mut order = Vec::with_capacity(self.n_physical);
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        order
    }
}

fn grid_edges(rows: usize, cols: usize) -> Vec<[usize; 2]> {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            if c + 1 < cols {
                edges.push([i, i + 1]);
            }
            if r + 1 < rows {
                edges.push([i, i + cols]);
            }
        }
    }
    edges
}

/// Cores with all-to-all internal connectivity joined by a core graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiCoreTopology {
    pub name: String,
    n_cores: usize,
    capacity: usize,
    core_edges: BTreeSet<(usize, usize)>,
    #[serde(skip)]
    distance: Vec<Vec<usize>>,
}

impl MultiCoreTopology {
    pub fn new(name: impl Into<String>, n_cores: usize, capacity: usize, core_edges: &[[usize; 2]]) -> Result<Self> {
        if n_cores == 0 || capacity == 0 {
            return Err(Error::Topology("need at least one core with nonzero capacity".into()));
        }
        let core_edges = validate_edges(n_cores, core_edges)?;
        let distance = all_pairs(&adjacency_of(n_cores, &core_edges), "core graph")?;
        Ok(MultiCoreTopology {
            name: name.into(),
            n_cores,
            capacity,
            core_edges,
            distance,
        })
    }

    pub fn all_to_all(n_cores: usize, capacity: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for a in 0..n_cores {
            for b in a + 1..n_cores {
                edges.push([a, b]);
            }
        }
        Self::new(format!("cores_all_{n_cores}x{capacity}"), n_cores, capacity, &edges)
    }

    pub fn grid(rows: usize, cols: usize, capacity: usize) -> Result<Self> {
        Self::new(
            format!("cores_grid_{rows}x{cols}x{capacity}"),
            rows * cols,
            capacity,
            &grid_edges(rows, cols),
        )
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: MultiCoreJson =
            serde_json::from_str(text).map_err(|e| Error::Topology(format!("malformed topology: {e}")))?;
        Self::new(
            raw.name.unwrap_or_else(|| "custom".into()),
            raw.cores,
            raw.capacity,
            &raw.core_edges,
        )
    }

    pub fn n_cores(&self) -> usize {
        self.n_cores
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn core_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.core_edges.iter().copied()
    }

    /// Hops between two cores in the core graph.
    pub fn hops(&self, a: usize, b: usize) -> usize {
        self.distance[a][b]
    }
}

/// Either kind of device.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Device {
    SingleCore(CouplingTopology),
    MultiCore(MultiCoreTopology),
}

impl Device {
    pub fn name(&self) -> &str {
        match self {
            Device::SingleCore(t) => &t.name,
            Device::MultiCore(t) => &t.name,
        }
    }
}

/// Textual device selector used on the command line.
///
/// | form                       | device                                  |
/// |----------------------------|-----------------------------------------|
/// | `linear:N`                 | path of N qubits                        |
/// | `grid:RxC`                 | R×C lattice                             |
/// | `all_to_all:N`             | complete graph                          |
/// | `surface17`                | bundled surface-17 layout               |
/// | `cores:all:K:C`            | K all-to-all cores of capacity C        |
/// | `cores:grid:RxC:C`         | R×C grid of cores of capacity C         |
/// | anything ending in `.json` | file; the keys decide the device kind  |
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologySpec(pub String);

impl FromStr for TopologySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let spec = TopologySpec(s.trim().to_string());
        if !spec.0.ends_with(".json") {
            spec.load()?;
        }
        Ok(spec)
    }
}

impl fmt::Display for TopologySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn parse_num(s: &str, spec: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Topology(format!("bad number {s:?} in topology spec {spec:?}")))
}

fn parse_dims(s: &str, spec: &str) -> Result<(usize, usize)> {
    let (r, c) = s
        .split_once('x')
        .ok_or_else(|| Error::Topology(format!("expected RxC in topology spec {spec:?}")))?;
    Ok((parse_num(r, spec)?, parse_num(c, spec)?))
}

impl TopologySpec {
    pub fn load(&self) -> Result<Device> {
        let s = self.0.as_str();
        if s.ends_with(".json") {
            return load_topology_file(Path::new(s));
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["linear", n] => CouplingTopology::linear(parse_num(n, s)?).map(Device::SingleCore),
            ["grid", dims] => {
                let (r, c) = parse_dims(dims, s)?;
                CouplingTopology::grid(r, c).map(Device::SingleCore)
            }
            ["all_to_all", n] => CouplingTopology::all_to_all(parse_num(n, s)?).map(Device::SingleCore),
            ["surface17"] => Ok(Device::SingleCore(CouplingTopology::surface17())),
            ["cores", "all", k, c] => {
                MultiCoreTopology::all_to_all(parse_num(k, s)?, parse_num(c, s)?).map(Device::MultiCore)
            }
            ["cores", "grid", dims, c] => {
                let (r, cols) = parse_dims(dims, s)?;
                MultiCoreTopology::grid(r, cols, parse_num(c, s)?).map(Device::MultiCore)
            }
            _ => Err(Error::Topology(format!("unrecognized topology spec {s:?}"))),
        }
    }
}

pub fn load_topology_file(path: &Path) -> Result<Device> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Topology(format!("{}: {e}", path.display())))?;
    if value.get("cores").is_some() {
        MultiCoreTopology::from_json_str(&text).map(Device::MultiCore)
    } else {
        CouplingTopology::from_json_str(&text).map(Device::SingleCore)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_sizes() {
        let g = CouplingTopology::grid(2, 3).unwrap();
        assert_eq!((g.n_physical(), g.n_edges()), (6, 7));
        assert_eq!(CouplingTopology::all_to_all(4).unwrap().n_edges(), 6);
        assert_eq!(CouplingTopology::linear(5).unwrap().n_edges(), 4);
        let s = CouplingTopology::surface17();
        assert_eq!((s.n_physical(), s.n_edges()), (17, 24));
    }

    #[test]
    fn grid_distances() {
        let g = CouplingTopology::grid(4, 4).unwrap();
        assert_eq!(g.distance(0, 15), 6);
        assert_eq!(g.neighbors(5), &[1, 4, 6, 9]);
        assert_eq!(g.bfs_order()[..5], [0, 1, 4, 2, 5]);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(CouplingTopology::new("x", 3, &[[0, 1]]).is_err());
        assert!(CouplingTopology::new("x", 2, &[[0, 1], [1, 0]]).is_err());
        assert!(CouplingTopology::new("x", 2, &[[0, 0]]).is_err());
        assert!(CouplingTopology::from_json_str("{\"n\": 2}").is_err());
        assert!(MultiCoreTopology::new("x", 3, 2, &[[0, 1]]).is_err());
    }

    #[test]
    fn spec_strings() {
        let d: TopologySpec = "grid:4x4".parse().unwrap();
        assert!(matches!(d.load().unwrap(), Device::SingleCore(t) if t.n_physical() == 16));
        let d: TopologySpec = "cores:grid:2x2:10".parse().unwrap();
        match d.load().unwrap() {
            Device::MultiCore(t) => {
                assert_eq!((t.n_cores(), t.capacity()), (4, 10));
                assert_eq!(t.hops(0, 3), 2);
            }
            _ => panic!("expected multi-core"),
        }
        assert!("triangle:3".parse::<TopologySpec>().is_err());
    }
}
