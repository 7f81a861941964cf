//! Path statistics of the gate-dependency graph.
//!
//! Every quantity is computed bottom-up over the reversed topological order
//! with one recurrence per node:
//!
//! | quantity | sink | node `w` with children `v_i` |
//! |---|---|---|
//! | `L` longest gate count to sink | 0 | `g(w) + max L(v_i)` |
//! | `n` number of paths | 1 | `Σ n(v_i)` |
//! | `N` number of critical paths | 1 | `Σ N(v_i)` over critical edges |
//! | `M` max two-qubit gates on a critical path | 0 | `t(w) + max M(v_i)` over critical edges |
//! | `K` critical paths attaining `M` | 1 | `Σ K(v_i)` over critical edges with `M(v_i) + t(w) = M(w)` |
//! | `m` mean path length | 0 | `Σ n(v_i)/n(w) · (m(v_i) + g(w))` |
//! | `v` path length variance | 0 | `Σ n(v_i)/n(w) · (v(v_i) + (m(v_i) + g(w) − m(w))²)` |
//!
//! `g(w)` is 1 for gate nodes and 0 for the source sentinel, `t(w)` is 1 for
//! two-qubit gates, and an edge `(w, v_i)` is critical when `L(w) = g(w) + L(v_i)`.
//! Counts are arbitrary precision since they can grow exponentially.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::graph::GateDependencyGraph;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GdgFeatureSet {
    pub critical_path_length: usize,
    #[serde(serialize_with = "ser_big")]
    pub n_critical_paths: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub n_paths: BigUint,
    pub path_length_mean: f64,
    pub path_length_std: f64,
    /// `None` for circuits without gates.
    pub pct_gates_in_critical_path: Option<f64>,
    pub max_2q_in_critical: usize,
    #[serde(serialize_with = "ser_big")]
    pub n_critical_with_max_2q: BigUint,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl GdgFeatureSet {
    pub fn path_length_variance(&self) -> f64 {
        self.path_length_std * self.path_length_std
    }

    pub fn log10_n_paths(&self) -> f64 {
        log10_big(&self.n_paths)
    }

    pub fn log10_n_critical_paths(&self) -> f64 {
        log10_big(&self.n_critical_paths)
    }
}

/// Per-node recurrence values, indexed by GDG node id.
#[derive(Debug, Clone)]
pub struct PathTables {
    pub longest: Vec<usize>,
    pub n_paths: Vec<BigUint>,
    pub n_critical: Vec<BigUint>,
    pub max_2q: Vec<usize>,
    pub n_critical_max_2q: Vec<BigUint>,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    /// Longest gate count from source to the node, excluding the node itself.
    pub forward: Vec<usize>,
}

pub fn path_tables(g: &GateDependencyGraph) -> PathTables {
    let n = g.n_nodes();
    let sink = g.sink();
    let mut t = PathTables {
        longest: vec![0; n],
        n_paths: vec![BigUint::zero(); n],
        n_critical: vec![BigUint::zero(); n],
        max_2q: vec![0; n],
        n_critical_max_2q: vec![BigUint::zero(); n],
        mean: vec![0.0; n],
        variance: vec![0.0; n],
        forward: vec![0; n],
    };
    t.n_paths[sink] = BigUint::one();
    t.n_critical[sink] = BigUint::one();
    t.n_critical_max_2q[sink] = BigUint::one();

    for &w in g.order().iter().rev() {
        if w == sink {
            continue;
        }
        let own = usize::from(g.is_gate(w));
        let two_q = usize::from(g.is_two_qubit(w));
        let children = g.children(w);

        let longest = own + children.iter().map(|&v| t.longest[v]).max().unwrap_or(0);
        let critical = |v: usize| own + t.longest[v] == longest;
        let max_2q = two_q
            + children
                .iter()
                .filter(|&&v| critical(v))
                .map(|&v| t.max_2q[v])
                .max()
                .unwrap_or(0);

        let mut n_paths = BigUint::zero();
        let mut n_critical = BigUint::zero();
        let mut n_crit_max = BigUint::zero();
        for &v in children {
            n_paths += &t.n_paths[v];
            if critical(v) {
                n_critical += &t.n_critical[v];
                if t.max_2q[v] + two_q == max_2q {
                    n_crit_max += &t.n_critical_max_2q[v];
                }
            }
        }

        let weights: Vec<f64> = children.iter().map(|&v| ratio(&t.n_paths[v], &n_paths)).collect();
        let shift = own as f64;
        let mean: f64 = children
            .iter()
            .zip(&weights)
            .map(|(&v, p)| p * (t.mean[v] + shift))
            .sum();
        let variance: f64 = children
            .iter()
            .zip(&weights)
            .map(|(&v, p)| p * (t.variance[v] + (t.mean[v] + shift - mean).powi(2)))
            .sum();

        t.longest[w] = longest;
        t.max_2q[w] = max_2q;
        t.n_paths[w] = n_paths;
        t.n_critical[w] = n_critical;
        t.n_critical_max_2q[w] = n_crit_max;
        t.mean[w] = mean;
        t.variance[w] = variance.max(0.0);
    }

    for &w in g.order() {
        let own = usize::from(g.is_gate(w));
        for &v in g.children(w) {
            t.forward[v] = t.forward[v].max(t.forward[w] + own);
        }
    }
    t
}

/// Gate nodes lying on at least one critical path, indexed by circuit gate index.
pub fn critical_gates(g: &GateDependencyGraph) -> Vec<bool> {
    let t = path_tables(g);
    critical_membership(g, &t)
}

fn critical_membership(g: &GateDependencyGraph, t: &PathTables) -> Vec<bool> {
    let total = t.longest[GateDependencyGraph::SOURCE];
    (1..=g.n_gates())
        .map(|w| t.forward[w] + t.longest[w] == total)
        .collect()
}

pub fn pct_gates_in_critical_path(g: &GateDependencyGraph) -> Option<f64> {
    let members = critical_gates(g);
    if members.is_empty() {
        return None;
    }
    Some(members.iter().filter(|&&c| c).count() as f64 / members.len() as f64)
}

pub fn gdg_path_features(g: &GateDependencyGraph) -> GdgFeatureSet {
    let t = path_tables(g);
    let s = GateDependencyGraph::SOURCE;
    let members = critical_membership(g, &t);
    let pct = if members.is_empty() {
        None
    } else {
        Some(members.iter().filter(|&&c| c).count() as f64 / members.len() as f64)
    };
    GdgFeatureSet {
        critical_path_length: t.longest[s],
        n_critical_paths: t.n_critical[s].clone(),
        n_paths: t.n_paths[s].clone(),
        path_length_mean: t.mean[s],
        path_length_std: t.variance[s].sqrt(),
        pct_gates_in_critical_path: pct,
        max_2q_in_critical: t.max_2q[s],
        n_critical_with_max_2q: t.n_critical_max_2q[s].clone(),
    }
}

/// `a / b` as f64 without overflowing on huge operands.
fn ratio(a: &BigUint, b: &BigUint) -> f64 {
    let shift = b.bits().max(a.bits()).saturating_sub(64);
    let a = (a >> shift).to_f64().unwrap_or(f64::INFINITY);
    let b = (b >> shift).to_f64().unwrap_or(f64::INFINITY);
    a / b
}

pub fn log10_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v.to_f64().unwrap_or(0.0).log10();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().unwrap_or(f64::INFINITY).log10() + shift as f64 * std::f64::consts::LOG10_2
}
