//! Parallelism and idling scores over the ASAP schedule.

use serde::Serialize;

use crate::circuit::{Circuit, Layering};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityFeatureSet {
    pub density_score: Option<f64>,
    pub idling_score: Option<f64>,
}

pub fn density_features(c: &Circuit, l: &Layering) -> DensityFeatureSet {
    DensityFeatureSet {
        density_score: density_score(c, l).ok(),
        idling_score: idling_score(c, l).ok(),
    }
}

/// `((2·n2q + n1q)/d − 1) / (n_q − 1)`: 0 for one gate per layer, 1 when
/// every layer fills every qubit.
pub fn density_score(c: &Circuit, l: &Layering) -> Result<f64> {
    let n_q = c.n_qubits();
    if n_q < 2 || l.depth == 0 {
        return Err(Error::UndefinedMetric("density_score"));
    }
    let busy = (2 * c.n_two_qubit_gates() + c.n_single_qubit_gates()) as f64;
    Ok((busy / l.depth as f64 - 1.0) / (n_q - 1) as f64)
}

/// Mean fraction of layers in which a qubit hosts no gate.
pub fn idling_score(c: &Circuit, l: &Layering) -> Result<f64> {
    let n_q = c.n_qubits();
    if l.depth == 0 || n_q == 0 {
        return Err(Error::UndefinedMetric("idling_score"));
    }
    // a qubit is used at most once per layer, so layer count = gate count
    let mut used = vec![0usize; n_q];
    for g in c.gates() {
        for &q in &g.qubits {
            used[q] += 1;
        }
    }
    let idle: usize = used.iter().map(|&u| l.depth - u).sum();
    Ok(idle as f64 / (n_q * l.depth) as f64)
}
