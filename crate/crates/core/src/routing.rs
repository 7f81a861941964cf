//! Baseline SWAP-insertion router for single-core coupling graphs.
//!
//! Logical qubit `i` starts on the `i`-th physical qubit of a breadth-first
//! walk from physical 0. Each two-qubit gate on uncoupled qubits drags its
//! first operand one hop at a time along a shortest path toward the second
//! operand, taking the lowest-index next hop, until the pair is coupled.

use serde::Serialize;

use crate::circuit::{asap_layering, Circuit, Gate};
use crate::correlation::{performance_metrics, CircuitStats, ErrorModel, MappingResult};
use crate::error::{Error, Result};
use crate::topology::CouplingTopology;

pub const SWAP: &str = "swap";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RouteConfig {
    /// Elementary two-qubit gates charged per SWAP.
    pub swap_cost: usize,
    pub error_model: ErrorModel,
}

impl Default for RouteConfig {
    fn default() -> Self {
        RouteConfig {
            swap_cost: 3,
            error_model: ErrorModel::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutedCircuit {
    /// Over `n_physical` qubits, SWAPs included as `swap` gates.
    pub mapped: Circuit,
    /// Logical → physical before the first gate.
    pub initial_layout: Vec<usize>,
    /// Logical → physical after the last gate.
    pub final_layout: Vec<usize>,
    pub swaps: usize,
    pub result: MappingResult,
}

pub fn route_single_core(c: &Circuit, t: &CouplingTopology, config: &RouteConfig) -> Result<RoutedCircuit> {
    let n_q = c.n_qubits();
    let n_p = t.n_physical();
    if n_q > n_p {
        return Err(Error::TopologyTooSmall {
            needed: n_q,
            available: n_p,
        });
    }
    let order = t.bfs_order();
    // phys_of[logical] over all physical slots; logical ids ≥ n_q are idle
    let mut phys_of: Vec<usize> = order.clone();
    let mut logical_at = vec![0; n_p];
    for (l, &p) in phys_of.iter().enumerate() {
        logical_at[p] = l;
    }
    let initial_layout = phys_of[..n_q].to_vec();
    let mut mapped = Circuit::new(c.name.clone(), n_p);
    mapped.origin = c.origin;
    let mut swaps = 0;
    for g in c.gates() {
        if let [a, b] = g.qubits[..] {
            loop {
                let (pa, pb) = (phys_of[a], phys_of[b]);
                let d = t.distance(pa, pb);
                if d <= 1 {
                    break;
                }
                let next = *t
                    .neighbors(pa)
                    .iter()
                    .find(|&&nb| t.distance(nb, pb) == d - 1)
                    .expect("connected topology has a shortest-path hop");
                mapped.push(Gate::new(SWAP, &[pa, next]))?;
                let other = logical_at[next];
                logical_at.swap(pa, next);
                phys_of[a] = next;
                phys_of[other] = pa;
                swaps += 1;
            }
        }
        let qubits: Vec<usize> = g.qubits.iter().map(|&q| phys_of[q]).collect();
        mapped.push(Gate::with_params(g.name.clone(), &qubits, &g.params))?;
    }
    let final_layout = phys_of[..n_q].to_vec();
    let before = CircuitStats::of(c);
    let after = CircuitStats {
        n_1q: before.n_1q,
        n_2q: before.n_2q + config.swap_cost * swaps,
        depth: asap_layering(&mapped).depth,
    };
    let result = performance_metrics(&before, &after, &config.error_model);
    Ok(RoutedCircuit {
        mapped,
        initial_layout,
        final_layout,
        swaps,
        result,
    })
}

/// Index of the first two-qubit gate acting on an uncoupled pair.
pub fn check_coupling(mapped: &Circuit, t: &CouplingTopology) -> std::result::Result<(), usize> {
    match mapped
        .gates()
        .iter()
        .position(|g| matches!(g.qubits[..], [a, b] if !t.are_coupled(a, b)))
    {
        Some(i) => Err(i),
        None => Ok(()),
    }
}

/// Replays the routed circuit: SWAPs update the layout and every other gate
/// must be the next original gate seen through the current layout. Checks the
/// final layout and coupling as well.
pub fn verify_routing(original: &Circuit, routed: &RoutedCircuit, t: &CouplingTopology) -> Result<()> {
    if let Err(i) = check_coupling(&routed.mapped, t) {
        return Err(Error::InvalidCircuit(format!("gate {i} acts on an uncoupled pair")));
    }
    let n_p = t.n_physical();
    let mut logical_at: Vec<Option<usize>> = vec![None; n_p];
    for (l, &p) in routed.initial_layout.iter().enumerate() {
        if p >= n_p || logical_at[p].replace(l).is_some() {
            return Err(Error::InvalidCircuit("initial layout is not injective".into()));
        }
    }
    let mut expected = original.gates().iter();
    let mut swaps = 0;
    for g in routed.mapped.gates() {
        if g.name == SWAP {
            logical_at.swap(g.qubits[0], g.qubits[1]);
            swaps += 1;
            continue;
        }
        let want = expected
            .next()
            .ok_or_else(|| Error::InvalidCircuit("mapped circuit has extra gates".into()))?;
        let seen: Option<Vec<usize>> = g.qubits.iter().map(|&p| logical_at[p]).collect();
        if g.name != want.name || g.params != want.params || seen.as_deref() != Some(&want.qubits[..]) {
            return Err(Error::InvalidCircuit(format!("gate {g} does not match {want}")));
        }
    }
    if expected.next().is_some() {
        return Err(Error::InvalidCircuit("mapped circuit drops gates".into()));
    }
    if swaps != routed.swaps {
        return Err(Error::InvalidCircuit("swap count mismatch".into()));
    }
    for (l, &p) in routed.final_layout.iter().enumerate() {
        if logical_at[p] != Some(l) {
            return Err(Error::InvalidCircuit(format!("final layout wrong for logical {l}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_three_remote_cx() {
        let mut c = Circuit::new("c", 3);
        c.add("cx", &[0, 2]);
        let t = CouplingTopology::linear(3).unwrap();
        let r = route_single_core(&c, &t, &RouteConfig::default()).unwrap();
        assert_eq!(r.swaps, 1);
        assert_eq!(r.mapped.n_gates(), 2);
        assert_eq!(r.mapped.gates()[0], Gate::new("swap", &[0, 1]));
        assert_eq!(r.mapped.gates()[1], Gate::new("cx", &[1, 2]));
        assert_eq!(r.result.gates_after, 4);
        assert_eq!(r.result.gate_overhead().unwrap(), 3.0);
        assert_eq!(r.final_layout, vec![1, 0, 2]);
        verify_routing(&c, &r, &t).unwrap();
    }

    #[test]
    fn conformant_circuit_is_untouched() {
        let mut c = Circuit::new("c", 3);
        c.add("h", &[0]).add("cx", &[0, 1]).add("cx", &[1, 2]);
        let t = CouplingTopology::linear(3).unwrap();
        let r = route_single_core(&c, &t, &RouteConfig::default()).unwrap();
        assert_eq!(r.swaps, 0);
        assert_eq!(r.result.gate_overhead().unwrap(), 0.0);
        assert_eq!(r.result.depth_overhead().unwrap(), 0.0);
        assert_eq!(r.result.fidelity_decrease().unwrap(), 0.0);
    }

    #[test]
    fn too_small() {
        let c = Circuit::new("c", 5);
        let t = CouplingTopology::linear(3).unwrap();
        assert!(matches!(
            route_single_core(&c, &t, &RouteConfig::default()),
            Err(Error::TopologyTooSmall { needed: 5, available: 3 })
        ));
    }

    #[test]
    fn verifier_catches_tampering() {
        let mut c = Circuit::new("c", 3);
        c.add("cx", &[0, 2]);
        let t = CouplingTopology::linear(3).unwrap();
        let mut r = route_single_core(&c, &t, &RouteConfig::default()).unwrap();
        r.final_layout = vec![0, 1, 2];
        assert!(verify_routing(&c, &r, &t).is_err());
    }
}
