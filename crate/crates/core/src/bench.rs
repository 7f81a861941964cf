//! Synthetic circuit families: textbook circuits and seeded random circuits
//! with a controllable interaction-graph density.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate, OriginLabel};

const ONE_QUBIT_GATES: [&str; 4] = ["h", "x", "t", "s"];

pub fn ghz(n: usize) -> Circuit {
    let mut c = Circuit::new(format!("ghz_{n}"), n);
    if n > 0 {
        c.add("h", &[0]);
    }
    for q in 1..n {
        c.add("cx", &[q - 1, q]);
    }
    c
}

/// QFT without the final qubit reversal, controlled phases as `cp`.
pub fn qft(n: usize) -> Circuit {
    let mut c = Circuit::new(format!("qft_{n}"), n);
    for i in 0..n {
        c.add("h", &[i]);
        for j in i + 1..n {
            let angle = std::f64::consts::PI / f64::from(1u32 << (j - i).min(31));
            c.push(Gate::with_params("cp", &[j, i], &[angle]))
                .expect("distinct in-range operands");
        }
    }
    c
}

/// Nearest-neighbour brick pattern: `layers` rounds of cx on alternating pairs.
pub fn brickwork(n: usize, layers: usize) -> Circuit {
    let mut c = Circuit::new(format!("brick_{n}_{layers}"), n);
    for l in 0..layers {
        for q in 0..n {
            c.add("h", &[q]);
        }
        let mut a = l % 2;
        while a + 1 < n {
            c.add("cx", &[a, a + 1]);
            a += 2;
        }
    }
    c
}

/// Uniformly random gates: each gate is two-qubit with probability `p_2q`.
pub fn random_circuit(seed: u64, n_qubits: usize, n_gates: usize, p_2q: f64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(format!("random_{seed}"), n_qubits);
    c.origin = Some(OriginLabel::Random);
    for _ in 0..n_gates {
        if n_qubits >= 2 && rng.gen_bool(p_2q) {
            let a = rng.gen_range(0..n_qubits);
            let mut b = rng.gen_range(0..n_qubits - 1);
            if b >= a {
                b += 1;
            }
            c.add("cx", &[a, b]);
        } else if n_qubits >= 1 {
            let g = ONE_QUBIT_GATES[rng.gen_range(0..ONE_QUBIT_GATES.len())];
            c.add(g, &[rng.gen_range(0..n_qubits)]);
        }
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityParams {
    pub n_qubits: usize,
    /// Probability that a qubit pair interacts at all.
    pub edge_probability: f64,
    /// Each interacting pair receives between 1 and this many cx gates.
    pub max_gates_per_edge: usize,
    /// Single-qubit gates per qubit.
    pub one_qubit_per_qubit: usize,
}

/// Random circuit whose interaction graph is an Erdős–Rényi draw with the
/// given edge probability (kept connected by a random spanning path). Gates
/// are shuffled into a random program order.
pub fn random_density_circuit(seed: u64, p: &DensityParams) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.n_qubits;
    let mut c = Circuit::new(format!("density_{seed}"), n);
    c.origin = Some(OriginLabel::Random);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let on_path = labels.windows(2).any(|w| (w[0].min(w[1]), w[0].max(w[1])) == (a, b));
            if on_path || rng.gen_bool(p.edge_probability) {
                pairs.push((a, b));
            }
        }
    }
    let mut gates = Vec::new();
    for &(a, b) in &pairs {
        for _ in 0..rng.gen_range(1..=p.max_gates_per_edge.max(1)) {
            gates.push(if rng.gen_bool(0.5) { Gate::new("cx", &[a, b]) } else { Gate::new("cx", &[b, a]) });
        }
    }
    for q in 0..n {
        for _ in 0..p.one_qubit_per_qubit {
            let g = ONE_QUBIT_GATES[rng.gen_range(0..ONE_QUBIT_GATES.len())];
            gates.push(Gate::new(g, &[q]));
        }
    }
    gates.shuffle(&mut rng);
    for g in gates {
        c.push(g).expect("generated gates are valid");
    }
    c
}

/// `count` circuits with edge probabilities spread evenly over [0.05, 0.95]
/// and qubit counts cycling through 8..=16.
pub fn density_corpus(seed: u64, count: usize) -> Vec<Circuit> {
    (0..count)
        .map(|i| {
            let frac = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.5 };
            let params = DensityParams {
                n_qubits: 8 + (i * 5) % 9,
                edge_probability: 0.05 + 0.9 * frac,
                max_gates_per_edge: 3,
                one_qubit_per_qubit: 3,
            };
            let mut c = random_density_circuit(seed.wrapping_mul(1000).wrapping_add(i as u64), &params);
            c.name = format!("density_{i:03}");
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_interaction_graph;

    #[test]
    fn textbook_shapes() {
        assert_eq!(ghz(4).n_two_qubit_gates(), 3);
        assert_eq!(qft(4).n_two_qubit_gates(), 6);
        assert_eq!(brickwork(4, 2).n_two_qubit_gates(), 3);
    }

    #[test]
    fn density_extremes() {
        let sparse = DensityParams {
            n_qubits: 10,
            edge_probability: 0.0,
            max_gates_per_edge: 1,
            one_qubit_per_qubit: 0,
        };
        let ig = build_interaction_graph(&random_density_circuit(1, &sparse));
        assert_eq!(ig.n_edges(), 9);
        assert!(ig.is_connected());
        let dense = DensityParams {
            edge_probability: 1.0,
            ..sparse
        };
        assert_eq!(build_interaction_graph(&random_density_circuit(1, &dense)).n_edges(), 45);
    }

    #[test]
    fn corpus_is_reproducible() {
        assert_eq!(density_corpus(7, 5), density_corpus(7, 5));
        assert_ne!(density_corpus(7, 5), density_corpus(8, 5));
    }
}
