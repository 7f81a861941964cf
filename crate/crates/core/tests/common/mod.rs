//! Brute-force reference implementations used only by the test suites.
//! Nothing here calls into the corresponding library algorithm.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_complex::Complex64;
use qprof::circuit::Gate;
use qprof::Circuit;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random simple graph as an edge list.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    edges
}

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    adj
}

// ---------------------------------------------------------------------------
// Distances: Floyd–Warshall on the largest component

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = x;
    while parent[x] != r {
        let next = parent[x];
        parent[x] = r;
        x = next;
    }
    r
}

/// Components by union–find; the largest one, ties to the one holding the smallest node.
pub fn largest_component(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups
        .into_values()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
        .unwrap_or_default()
}

/// (avg shortest path, diameter) over the largest component.
pub fn distance_oracle(n: usize, edges: &[(usize, usize)]) -> Option<(f64, usize)> {
    let comp = largest_component(n, edges);
    if comp.len() < 2 {
        return None;
    }
    const INF: usize = usize::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for &(a, b) in edges {
        d[a][b] = 1;
        d[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let (mut sum, mut pairs, mut diam) = (0, 0, 0);
    for (x, &i) in comp.iter().enumerate() {
        for &j in &comp[x + 1..] {
            sum += d[i][j];
            pairs += 1;
            diam = diam.max(d[i][j]);
        }
    }
    Some((sum as f64 / pairs as f64, diam))
}

// ---------------------------------------------------------------------------
// Cliques by subset enumeration

pub fn maximal_cliques_oracle(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let adj = adjacency(n, edges);
    let is_clique = |mask: u32| {
        (0..n).all(|a| mask >> a & 1 == 0 || (a + 1..n).all(|b| mask >> b & 1 == 0 || adj[a][b]))
    };
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if !is_clique(mask) {
            continue;
        }
        let extendable = (0..n).any(|v| mask >> v & 1 == 0 && is_clique(mask | 1 << v));
        if !extendable {
            out.push((0..n).filter(|&v| mask >> v & 1 == 1).collect());
        }
    }
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// Connectivity by removal enumeration

fn connected_without(n: usize, edges: &[(usize, usize)], removed_nodes: u32, removed_edges: &[bool]) -> bool {
    let alive: Vec<usize> = (0..n).filter(|&v| removed_nodes >> v & 1 == 0).collect();
    if alive.len() <= 1 {
        return true;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for (i, &(a, b)) in edges.iter().enumerate() {
        if removed_edges.get(i).copied().unwrap_or(false) || removed_nodes >> a & 1 == 1 || removed_nodes >> b & 1 == 1 {
            continue;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let r = find(&mut parent, alive[0]);
    alive.iter().all(|&v| find(&mut parent, v) == r)
}

/// Smallest number of nodes whose removal disconnects the graph; n − 1 when
/// no removal does (complete graphs); 0 when already disconnected.
pub fn vertex_connectivity_oracle(n: usize, edges: &[(usize, usize)]) -> usize {
    if !connected_without(n, edges, 0, &[]) {
        return 0;
    }
    for k in 1..n.saturating_sub(1) {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k && !connected_without(n, edges, mask, &[]) {
                return k;
            }
        }
    }
    n.saturating_sub(1)
}

/// Smallest number of edges whose removal disconnects the graph.
pub fn edge_connectivity_oracle(n: usize, edges: &[(usize, usize)]) -> usize {
    if n < 2 || !connected_without(n, edges, 0, &[]) {
        return 0;
    }
    let m = edges.len();
    for k in 1..=m {
        let mut chosen: Vec<usize> = (0..k).collect();
        loop {
            let mut removed = vec![false; m];
            for &i in &chosen {
                removed[i] = true;
            }
            if !connected_without(n, edges, 0, &removed) {
                return k;
            }
            // next k-combination of 0..m
            let mut i = k;
            while i > 0 && chosen[i - 1] == m - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            chosen[i - 1] += 1;
            for j in i..k {
                chosen[j] = chosen[j - 1] + 1;
            }
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Gate-dependency paths by explicit enumeration

#[derive(Debug, Clone, PartialEq)]
pub struct PathStats {
    pub longest: usize,
    pub n_paths: u64,
    pub n_critical: u64,
    pub max_2q: usize,
    pub n_critical_max_2q: u64,
    pub mean: f64,
    pub variance: f64,
    /// Per circuit gate: lies on some longest path.
    pub critical: Vec<bool>,
}

/// Enumerates every source→sink dependency path. Successors are derived
/// straight from the gate list: the next gate on each operand qubit, or the
/// sink when the gate is the last on all of them.
pub fn enumerate_paths(c: &Circuit) -> PathStats {
    let gates = c.gates();
    let next_on = |i: usize, q: usize| (i + 1..gates.len()).find(|&j| gates[j].qubits.contains(&q));
    let succ: Vec<BTreeSet<Option<usize>>> = (0..gates.len())
        .map(|i| gates[i].qubits.iter().map(|&q| next_on(i, q)).collect::<BTreeSet<_>>())
        .map(|s| {
            let real: BTreeSet<Option<usize>> = s.iter().copied().filter(Option::is_some).collect();
            if real.is_empty() {
                BTreeSet::from([None])
            } else {
                real
            }
        })
        .collect();
    let starts: BTreeSet<usize> = (0..c.n_qubits())
        .filter_map(|q| gates.iter().position(|g| g.qubits.contains(&q)))
        .collect();
    let mut paths: Vec<Vec<usize>> = Vec::new();
    fn walk(v: usize, succ: &[BTreeSet<Option<usize>>], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        cur.push(v);
        for s in &succ[v] {
            match s {
                Some(w) => walk(*w, succ, cur, out),
                None => out.push(cur.clone()),
            }
        }
        cur.pop();
    }
    for &s in &starts {
        walk(s, &succ, &mut Vec::new(), &mut paths);
    }
    if paths.is_empty() {
        paths.push(Vec::new());
    }
    let longest = paths.iter().map(Vec::len).max().unwrap();
    let critical_paths: Vec<&Vec<usize>> = paths.iter().filter(|p| p.len() == longest).collect();
    let twoq = |p: &Vec<usize>| p.iter().filter(|&&g| gates[g].qubits.len() == 2).count();
    let max_2q = critical_paths.iter().map(|p| twoq(p)).max().unwrap();
    let n = paths.len() as f64;
    let mean = paths.iter().map(|p| p.len() as f64).sum::<f64>() / n;
    let variance = paths.iter().map(|p| (p.len() as f64 - mean).powi(2)).sum::<f64>() / n;
    let mut critical = vec![false; gates.len()];
    for p in &critical_paths {
        for &g in p.iter() {
            critical[g] = true;
        }
    }
    PathStats {
        longest,
        n_paths: paths.len() as u64,
        n_critical: critical_paths.len() as u64,
        max_2q,
        n_critical_max_2q: critical_paths.iter().filter(|p| twoq(p) == max_2q).count() as u64,
        mean,
        variance,
        critical,
    }
}

// ---------------------------------------------------------------------------
// Repetition: quadratic longest-common-prefix table

/// (length, occurrence count, first start) of the longest substring occurring
/// at least twice, overlaps allowed; ties to the earliest start.
pub fn repeat_oracle<T: PartialEq>(s: &[T]) -> (usize, usize, Option<usize>) {
    let n = s.len();
    let mut lcp = vec![vec![0usize; n + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..n).rev() {
            if i != j && s[i] == s[j] {
                lcp[i][j] = lcp[i + 1][j + 1] + 1;
            }
        }
    }
    let best = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| lcp[i][j])
        .max()
        .unwrap_or(0);
    if best == 0 {
        return (0, 0, None);
    }
    let start = (0..n)
        .find(|&i| (0..n).any(|j| j != i && lcp[i][j] >= best))
        .unwrap();
    let count = 1 + (0..n).filter(|&j| j != start && lcp[start][j] >= best).count();
    (best, count, Some(start))
}

// ---------------------------------------------------------------------------
// Dense state-vector simulation

pub type State = Vec<Complex64>;

fn apply_1q(state: &mut State, q: usize, m: [[Complex64; 2]; 2]) {
    let bit = 1 << q;
    for i in 0..state.len() {
        if i & bit == 0 {
            let (a, b) = (state[i], state[i | bit]);
            state[i] = m[0][0] * a + m[0][1] * b;
            state[i | bit] = m[1][0] * a + m[1][1] * b;
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn apply_gate(state: &mut State, g: &Gate) {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let h = c(FRAC_1_SQRT_2, 0.0);
    let p = |i: usize| g.params.get(i).copied().unwrap_or(0.0);
    match (g.name.as_str(), &g.qubits[..]) {
        ("h", [q]) => apply_1q(state, *q, [[h, h], [h, -h]]),
        ("x", [q]) => apply_1q(state, *q, [[zero, one], [one, zero]]),
        ("y", [q]) => apply_1q(state, *q, [[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]]),
        ("z", [q]) => apply_1q(state, *q, [[one, zero], [zero, -one]]),
        ("s", [q]) => apply_1q(state, *q, [[one, zero], [zero, c(0.0, 1.0)]]),
        ("sdg", [q]) => apply_1q(state, *q, [[one, zero], [zero, c(0.0, -1.0)]]),
        ("t", [q]) => apply_1q(state, *q, [[one, zero], [zero, phase(FRAC_PI_4)]]),
        ("tdg", [q]) => apply_1q(state, *q, [[one, zero], [zero, phase(-FRAC_PI_4)]]),
        ("rz", [q]) => apply_1q(state, *q, [[phase(-p(0) / 2.0), zero], [zero, phase(p(0) / 2.0)]]),
        ("p" | "u1", [q]) => apply_1q(state, *q, [[one, zero], [zero, phase(p(0))]]),
        ("cx", [a, b]) => {
            let (ca, tb) = (1 << a, 1 << b);
            for i in 0..state.len() {
                if i & ca != 0 && i & tb == 0 {
                    state.swap(i, i | tb);
                }
            }
        }
        ("cz", [a, b]) => {
            for (i, amp) in state.iter_mut().enumerate() {
                if i >> a & 1 == 1 && i >> b & 1 == 1 {
                    *amp = -*amp;
                }
            }
        }
        ("cp", [a, b]) => {
            let ph = phase(p(0));
            for (i, amp) in state.iter_mut().enumerate() {
                if i >> a & 1 == 1 && i >> b & 1 == 1 {
                    *amp *= ph;
                }
            }
        }
        ("swap", [a, b]) => {
            for i in 0..state.len() {
                if i >> a & 1 == 1 && i >> b & 1 == 0 {
                    state.swap(i, i ^ (1 << a) ^ (1 << b));
                }
            }
        }
        (name, qs) => panic!("simulator lacks gate {name} on {qs:?}"),
    }
}

pub fn simulate(gates: &[Gate], n_qubits: usize, basis: usize) -> State {
    let mut state = vec![c(0.0, 0.0); 1 << n_qubits];
    state[basis] = c(1.0, 0.0);
    for g in gates {
        apply_gate(&mut state, g);
    }
    state
}

/// Physical basis index of logical basis `x` under `layout` (logical → physical).
pub fn embed(x: usize, layout: &[usize]) -> usize {
    layout
        .iter()
        .enumerate()
        .filter(|&(l, _)| x >> l & 1 == 1)
        .map(|(_, &p)| 1 << p)
        .sum()
}

/// Checks `mapped ∘ embed(initial) = embed(final) ∘ original` on every
/// logical basis state, which fixes the whole unitary including phases.
pub fn equivalent_up_to_layout(
    original: &Circuit,
    mapped: &Circuit,
    initial: &[usize],
    final_layout: &[usize],
    tol: f64,
) -> bool {
    let nl = original.n_qubits();
    let np = mapped.n_qubits();
    for x in 0..1usize << nl {
        let want_logical = simulate(original.gates(), nl, x);
        let got = simulate(mapped.gates(), np, embed(x, initial));
        let mut want = vec![c(0.0, 0.0); 1 << np];
        for (y, amp) in want_logical.iter().enumerate() {
            want[embed(y, final_layout)] = *amp;
        }
        if got.iter().zip(&want).any(|(a, b)| (a - b).norm() > tol) {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Multi-core replay

/// ASAP layers recomputed from scratch: pairs per layer.
pub fn layer_pairs(c: &Circuit) -> Vec<BTreeSet<(usize, usize)>> {
    let mut ready = vec![0usize; c.n_qubits()];
    let mut layers: Vec<BTreeSet<(usize, usize)>> = Vec::new();
    for g in c.gates() {
        let layer = g.qubits.iter().map(|&q| ready[q]).max().unwrap();
        for &q in &g.qubits {
            ready[q] = layer + 1;
        }
        if layers.len() <= layer {
            layers.resize(layer + 1, BTreeSet::new());
        }
        if let [a, b] = g.qubits[..] {
            layers[layer].insert((a.min(b), a.max(b)));
        }
    }
    layers
}

pub fn hop_table(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let adj = adjacency(n, edges);
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for v in 0..n {
                    if adj[u][v] && d[v] == usize::MAX {
                        d[v] = d[u] + 1;
                        q.push_back(v);
                    }
                }
            }
            d
        })
        .collect()
}
