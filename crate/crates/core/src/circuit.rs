//! Gate-list intermediate representation, ASAP layering and size features.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single unitary gate acting on one or two qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
}

impl Gate {
    pub fn new(name: impl Into<String>, qubits: &[usize]) -> Self {
        Gate {
            name: name.into(),
            qubits: qubits.to_vec(),
            params: Vec::new(),
        }
    }

    pub fn with_params(name: impl Into<String>, qubits: &[usize], params: &[f64]) -> Self {
        Gate {
            name: name.into(),
            qubits: qubits.to_vec(),
            params: params.to_vec(),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits.len() == 2
    }

    /// Stable token identifying the gate by name and operand tuple.
    pub fn token(&self) -> String {
        let mut out = String::with_capacity(self.name.len() + 4 * self.qubits.len());
        out.push_str(&self.name);
        out.push(':');
        for (i, q) in self.qubits.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{q}");
        }
        out
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.params.is_empty() {
            f.write_str("(")?;
            for (i, p) in self.params.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                // `{:?}` keeps the shortest representation that parses back exactly.
                write!(f, "{p:?}")?;
            }
            f.write_str(")")?;
        }
        for (i, q) in self.qubits.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { "," })?;
            write!(f, "q[{q}]")?;
        }
        Ok(())
    }
}

/// Where a benchmark circuit came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OriginLabel {
    Real,
    Random,
    Queko,
    Other,
}

impl std::str::FromStr for OriginLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real" => Ok(OriginLabel::Real),
            "random" => Ok(OriginLabel::Random),
            "queko" => Ok(OriginLabel::Queko),
            "other" => Ok(OriginLabel::Other),
            _ => Err(Error::InvalidCircuit(format!("unknown origin label `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub name: String,
    n_qubits: usize,
    gates: Vec<Gate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<OriginLabel>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, n_qubits: usize) -> Self {
        Circuit {
            name: name.into(),
            n_qubits,
            gates: Vec::new(),
            origin: None,
        }
    }

    /// Builds a circuit from a gate list, validating every gate.
    pub fn from_gates(name: impl Into<String>, n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(name, n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        match gate.qubits.as_slice() {
            [a] if *a < self.n_qubits => {}
            [a, b] if *a < self.n_qubits && *b < self.n_qubits && a != b => {}
            [_, _] | [_] => {
                return Err(Error::InvalidCircuit(format!(
                    "gate `{gate}` has invalid operands for a {}-qubit circuit",
                    self.n_qubits
                )))
            }
            _ => {
                return Err(Error::InvalidCircuit(format!(
                    "gate `{}` acts on {} qubits; only 1- and 2-qubit gates are allowed",
                    gate.name,
                    gate.qubits.len()
                )))
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends a gate by name; panics on invalid operands. Meant for literals in tests and examples.
    pub fn add(&mut self, name: &str, qubits: &[usize]) -> &mut Self {
        self.push(Gate::new(name, qubits))
            .unwrap_or_else(|e| panic!("{e}"));
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn n_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn n_two_qubit_gates(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    pub fn n_single_qubit_gates(&self) -> usize {
        self.n_gates() - self.n_two_qubit_gates()
    }

    /// Serializes to the supported QASM dialect.
    pub fn to_qasm(&self) -> String {
        let mut out = String::new();
        out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        let _ = writeln!(out, "qreg q[{}];", self.n_qubits);
        for g in &self.gates {
            let _ = writeln!(out, "{g};");
        }
        out
    }
}

/// ASAP schedule: every gate takes one time step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layering {
    pub layer_of_gate: Vec<usize>,
    pub depth: usize,
}

impl Layering {
    /// Gate indices grouped per layer, in program order within a layer.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut layers = vec![Vec::new(); self.depth];
        for (g, &l) in self.layer_of_gate.iter().enumerate() {
            layers[l].push(g);
        }
        layers
    }
}

pub fn asap_layering(c: &Circuit) -> Layering {
    // next free layer per qubit
    let mut frontier = vec![0usize; c.n_qubits()];
    let mut layer_of_gate = Vec::with_capacity(c.n_gates());
    let mut depth = 0;
    for g in c.gates() {
        let layer = g.qubits.iter().map(|&q| frontier[q]).max().unwrap_or(0);
        for &q in &g.qubits {
            frontier[q] = layer + 1;
        }
        depth = depth.max(layer + 1);
        layer_of_gate.push(layer);
    }
    Layering {
        layer_of_gate,
        depth,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SizeFeatures {
    pub n_qubits: usize,
    pub n_gates: usize,
    pub two_qubit_gate_pct: f64,
    pub depth: usize,
}

pub fn size_features(c: &Circuit) -> SizeFeatures {
    let n_gates = c.n_gates();
    let two_qubit_gate_pct = if n_gates == 0 {
        0.0
    } else {
        c.n_two_qubit_gates() as f64 / n_gates as f64
    };
    SizeFeatures {
        n_qubits: c.n_qubits(),
        n_gates,
        two_qubit_gate_pct,
        depth: asap_layering(c).depth,
    }
}

pub fn gate_token_sequence(c: &Circuit) -> Vec<String> {
    c.gates().iter().map(Gate::token).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ghz(n: usize) -> Circuit {
        let mut c = Circuit::new(format!("ghz{n}"), n);
        c.add("h", &[0]);
        for q in 0..n - 1 {
            c.add("cx", &[q, q + 1]);
        }
        c
    }

    #[test]
    fn layering_sequential_chain() {
        let mut c = Circuit::new("c", 2);
        c.add("h", &[0]).add("cx", &[0, 1]).add("x", &[1]);
        let l = asap_layering(&c);
        assert_eq!(l.layer_of_gate, vec![0, 1, 2]);
        assert_eq!(l.depth, 3);
    }

    #[test]
    fn layering_disjoint_qubits_parallelize() {
        let mut c = Circuit::new("c", 2);
        c.add("x", &[0]).add("x", &[1]);
        let l = asap_layering(&c);
        assert_eq!(l.layer_of_gate, vec![0, 0]);
        assert_eq!(l.depth, 1);
    }

    #[test]
    fn ghz5_depth() {
        assert_eq!(asap_layering(&ghz(5)).depth, 5);
    }

    #[test]
    fn empty_circuit_has_depth_zero() {
        let c = Circuit::new("empty", 3);
        assert_eq!(asap_layering(&c).depth, 0);
        assert_eq!(size_features(&c).two_qubit_gate_pct, 0.0);
    }

    #[test]
    fn size_features_ghz3() {
        let s = size_features(&ghz(3));
        assert_eq!(s.n_qubits, 3);
        assert_eq!(s.n_gates, 3);
        assert!((s.two_qubit_gate_pct - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.depth, 3);
    }

    #[test]
    fn size_features_single_gate() {
        let mut c = Circuit::new("x", 1);
        c.add("x", &[0]);
        let s = size_features(&c);
        assert_eq!((s.n_qubits, s.n_gates, s.depth), (1, 1, 1));
        assert_eq!(s.two_qubit_gate_pct, 0.0);
    }

    #[test]
    fn tokens() {
        let mut c = Circuit::new("c", 2);
        c.add("h", &[0]).add("cx", &[0, 1]).add("h", &[0]);
        assert_eq!(gate_token_sequence(&c), vec!["h:0", "cx:0,1", "h:0"]);
    }

    #[test]
    fn rejects_bad_operands() {
        let mut c = Circuit::new("c", 2);
        assert!(c.push(Gate::new("cx", &[0, 0])).is_err());
        assert!(c.push(Gate::new("x", &[2])).is_err());
        assert!(c.push(Gate::new("ccx", &[0, 1, 2])).is_err());
    }

    #[test]
    fn gate_display_round_trips_params() {
        let g = Gate::with_params("rz", &[1], &[0.1 + 0.2]);
        assert_eq!(g.to_string(), "rz(0.30000000000000004) q[1]");
    }
}
