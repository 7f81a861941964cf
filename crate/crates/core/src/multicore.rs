//! Time-sliced qubit-to-core assignment for multi-core devices.
//!
//! Cores are all-to-all inside, so only co-location matters. Each ASAP layer
//! is one slice; every two-qubit pair of a slice must share a core when the
//! slice runs. Relocations between cores are charged by core-graph hops.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::circuit::{asap_layering, Circuit, Layering};
use crate::correlation::{performance_metrics, CircuitStats, ErrorModel, MappingResult};
use crate::error::{Error, Result};
use crate::graph::build_interaction_graph;
use crate::topology::MultiCoreTopology;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Slice {
    /// Gate indices of the layer, program order.
    pub gates: Vec<usize>,
    /// Two-qubit pairs, smaller index first, in gate order.
    pub pairs: Vec<(usize, usize)>,
}

pub fn slice_circuit(c: &Circuit, l: &Layering) -> Vec<Slice> {
    l.layers()
        .into_iter()
        .map(|gates| {
            let pairs = gates
                .iter()
                .filter_map(|&g| match c.gates()[g].qubits[..] {
                    [a, b] => Some((a.min(b), a.max(b))),
                    _ => None,
                })
                .collect();
            Slice { gates, pairs }
        })
        .collect()
}

/// [`slice_circuit`] over the ASAP layering.
pub fn asap_slices(c: &Circuit) -> Vec<Slice> {
    slice_circuit(c, &asap_layering(c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Move {
    pub slice: usize,
    pub qubit: usize,
    pub from: usize,
    pub to: usize,
    pub hops: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    /// Qubit → core before the first slice.
    pub initial: Vec<usize>,
    pub moves: Vec<Move>,
    /// Qubit → core after each slice has been resolved.
    pub snapshots: Vec<Vec<usize>>,
    /// Sum of hop counts over all moves.
    pub inter_core_moves: usize,
}

/// Greedy initial placement driven by the whole-circuit interaction graph.
///
/// Repeatedly takes the unassigned qubit with the largest weight to qubits
/// already placed (ties: larger skeleton degree, then lower index) and puts it
/// on the open core holding the most weight to it (ties: lower core index).
pub fn initial_assignment(c: &Circuit, t: &MultiCoreTopology) -> Result<Vec<usize>> {
    let n = c.n_qubits();
    check_total_capacity(n, t)?;
    let ig = build_interaction_graph(c);
    let mut core_of: Vec<Option<usize>> = vec![None; n];
    let mut load = vec![0; t.n_cores()];
    // weight from each qubit to the already placed set
    let mut attached = vec![0u64; n];
    for _ in 0..n {
        let q = (0..n)
            .filter(|&q| core_of[q].is_none())
            .max_by(|&a, &b| {
                attached[a]
                    .cmp(&attached[b])
                    .then(ig.degree(a).cmp(&ig.degree(b)))
                    .then(b.cmp(&a))
            })
            .expect("an unassigned qubit remains");
        let mut affinity = vec![0u64; t.n_cores()];
        for &nb in ig.neighbors(q) {
            if let Some(core) = core_of[nb] {
                affinity[core] += ig.weight(q, nb);
            }
        }
        let core = (0..t.n_cores())
            .filter(|&k| load[k] < t.capacity())
            .max_by(|&a, &b| affinity[a].cmp(&affinity[b]).then(b.cmp(&a)))
            .expect("total capacity was checked");
        core_of[q] = Some(core);
        load[core] += 1;
        for &nb in ig.neighbors(q) {
            attached[nb] += ig.weight(q, nb);
        }
    }
    Ok(core_of.into_iter().map(|c| c.expect("all placed")).collect())
}

fn check_total_capacity(n: usize, t: &MultiCoreTopology) -> Result<()> {
    if n > t.n_cores() * t.capacity() {
        return Err(Error::CapacityInfeasible(format!(
            "{n} qubits exceed {} cores × {} capacity",
            t.n_cores(),
            t.capacity()
        )));
    }
    Ok(())
}

/// Resolves every slice in order starting from `initial`.
///
/// For a pair on different cores the candidate target cores are tried in
/// order: the core of the partner of the cheaper qubit (fewer interactions in
/// later slices, ties to the first operand), the other operand's core, then
/// every remaining core by hop distance and index. A target is usable when at
/// least two of its slots are not held by pairs already resolved in this
/// slice. Moving into a full core evicts its unlocked occupant with the fewest
/// later interactions (ties: lower index) into the slot just vacated.
pub fn partition_with_initial(slices: &[Slice], t: &MultiCoreTopology, initial: Vec<usize>) -> Result<Partition> {
    let n = initial.len();
    check_total_capacity(n, t)?;
    let cap = t.capacity();
    let mut load = vec![0; t.n_cores()];
    for (q, &k) in initial.iter().enumerate() {
        if k >= t.n_cores() {
            return Err(Error::CapacityInfeasible(format!("qubit {q} assigned to missing core {k}")));
        }
        load[k] += 1;
    }
    if load.iter().any(|&l| l > cap) {
        return Err(Error::CapacityInfeasible("initial assignment overloads a core".into()));
    }
    let pair_slots = t.n_cores() * (cap / 2);
    for (s, slice) in slices.iter().enumerate() {
        if slice.pairs.iter().any(|&(a, b)| a >= n || b >= n) {
            return Err(Error::CapacityInfeasible(format!("slice {s} names a qubit outside 0..{n}")));
        }
        if slice.pairs.len() > pair_slots {
            return Err(Error::CapacityInfeasible(format!(
                "slice {s} has {} pairs but cores hold at most {pair_slots}",
                slice.pairs.len()
            )));
        }
    }
    // future[q] = interactions of q in slices after the current one
    let mut future = vec![0usize; n];
    for slice in slices {
        for &(a, b) in &slice.pairs {
            future[a] += 1;
            future[b] += 1;
        }
    }
    let mut core_of = initial.clone();
    let mut moves = Vec::new();
    let mut snapshots = Vec::with_capacity(slices.len());
    for (s, slice) in slices.iter().enumerate() {
        for &(a, b) in &slice.pairs {
            future[a] -= 1;
            future[b] -= 1;
        }
        let mut locked = vec![false; n];
        for &(a, b) in &slice.pairs {
            if core_of[a] != core_of[b] {
                let (mover, stay) = if future[b] < future[a] { (b, a) } else { (a, b) };
                let mut candidates = vec![core_of[stay], core_of[mover]];
                let mut rest: Vec<usize> = (0..t.n_cores())
                    .filter(|&k| k != core_of[a] && k != core_of[b])
                    .collect();
                rest.sort_by_key(|&k| (t.hops(core_of[mover], k) + t.hops(core_of[stay], k), k));
                candidates.extend(rest);
                let target = candidates
                    .into_iter()
                    .find(|&k| {
                        let held = (0..n).filter(|&q| locked[q] && core_of[q] == k).count();
                        cap - held >= 2
                    })
                    .expect("slot count check guarantees a usable core");
                for q in [mover, stay] {
                    if core_of[q] != target {
                        relocate(q, target, s, &mut core_of, &locked, &[a, b], &future, t, &mut moves);
                    }
                }
            }
            locked[a] = true;
            locked[b] = true;
        }
        snapshots.push(core_of.clone());
    }
    let inter_core_moves = moves.iter().map(|m| m.hops).sum();
    Ok(Partition {
        initial,
        moves,
        snapshots,
        inter_core_moves,
    })
}

#[allow(clippy::too_many_arguments)]
fn relocate(
    q: usize,
    target: usize,
    slice: usize,
    core_of: &mut [usize],
    locked: &[bool],
    pair: &[usize; 2],
    future: &[usize],
    t: &MultiCoreTopology,
    moves: &mut Vec<Move>,
) {
    let from = core_of[q];
    let occupants: Vec<usize> = (0..core_of.len()).filter(|&x| core_of[x] == target).collect();
    if occupants.len() >= t.capacity() {
        let evicted = occupants
            .into_iter()
            .filter(|&x| !locked[x] && !pair.contains(&x))
            .min_by_key(|&x| (future[x], x))
            .expect("usable target has an evictable occupant");
        core_of[evicted] = from;
        moves.push(Move {
            slice,
            qubit: evicted,
            from: target,
            to: from,
            hops: t.hops(target, from),
        });
    }
    core_of[q] = target;
    moves.push(Move {
        slice,
        qubit: q,
        from,
        to: target,
        hops: t.hops(from, target),
    });
}

pub fn partition_multicore(slices: &[Slice], c: &Circuit, t: &MultiCoreTopology) -> Result<Partition> {
    let initial = initial_assignment(c, t)?;
    partition_with_initial(slices, t, initial)
}

/// Slices, partitions and scores a circuit. Gate and depth counts do not
/// change; the relocation total goes into `inter_core_moves`.
pub fn map_multicore(c: &Circuit, t: &MultiCoreTopology, model: &ErrorModel) -> Result<(Partition, MappingResult)> {
    let slices = asap_slices(c);
    let partition = partition_multicore(&slices, c, t)?;
    let stats = CircuitStats::of(c);
    let mut result = performance_metrics(&stats, &stats, model);
    result.inter_core_moves = Some(partition.inter_core_moves);
    Ok((partition, result))
}

/// Replays the move log against the slices and recounts the cost.
pub fn verify_partition(slices: &[Slice], t: &MultiCoreTopology, p: &Partition) -> Result<()> {
    let fail = |m: String| Err(Error::CapacityInfeasible(m));
    if p.snapshots.len() != slices.len() {
        return fail("one snapshot per slice expected".into());
    }
    let mut core_of = p.initial.clone();
    let mut next_move = p.moves.iter().peekable();
    let mut total = 0;
    for (s, slice) in slices.iter().enumerate() {
        while let Some(m) = next_move.next_if(|m| m.slice == s) {
            if core_of[m.qubit] != m.from {
                return fail(format!("slice {s}: qubit {} is not on core {}", m.qubit, m.from));
            }
            core_of[m.qubit] = m.to;
            total += t.hops(m.from, m.to);
        }
        if core_of != p.snapshots[s] {
            return fail(format!("slice {s}: snapshot disagrees with replay"));
        }
        let mut load = vec![0; t.n_cores()];
        for &k in &core_of {
            load[k] += 1;
        }
        if let Some(k) = load.iter().position(|&l| l > t.capacity()) {
            return fail(format!("slice {s}: core {k} over capacity"));
        }
        let pairs: BTreeSet<_> = slice.pairs.iter().collect();
        if let Some((a, b)) = pairs.into_iter().find(|&&(a, b)| core_of[a] != core_of[b]) {
            return fail(format!("slice {s}: pair ({a},{b}) split across cores"));
        }
    }
    if next_move.next().is_some() {
        return fail("moves recorded after the last slice".into());
    }
    if total != p.inter_core_moves {
        return fail(format!("recount {total} != reported {}", p.inter_core_moves));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slice_of(pairs: &[(usize, usize)]) -> Slice {
        Slice {
            gates: vec![],
            pairs: pairs.to_vec(),
        }
    }

    #[test]
    fn ghz3_slices() {
        let mut c = Circuit::new("ghz", 3);
        c.add("h", &[0]).add("cx", &[0, 1]).add("cx", &[1, 2]);
        let s = slice_circuit(&c, &asap_layering(&c));
        let pairs: Vec<_> = s.iter().map(|x| x.pairs.clone()).collect();
        assert_eq!(pairs, vec![vec![], vec![(0, 1)], vec![(1, 2)]]);
    }

    #[test]
    fn parallel_layer_and_empty() {
        let mut c = Circuit::new("p", 6);
        c.add("cx", &[0, 1]).add("cx", &[2, 3]).add("cx", &[4, 5]);
        let s = slice_circuit(&c, &asap_layering(&c));
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].pairs.len(), 3);
        let e = Circuit::new("e", 2);
        assert!(slice_circuit(&e, &asap_layering(&e)).is_empty());
    }

    #[test]
    fn full_cores_need_a_swap() {
        let t = MultiCoreTopology::all_to_all(2, 2).unwrap();
        let slices = [slice_of(&[(0, 1)]), slice_of(&[(2, 3)]), slice_of(&[(1, 2)])];
        let p = partition_with_initial(&slices, &t, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(p.inter_core_moves, 2);
        assert_eq!(p.moves.len(), 2);
        verify_partition(&slices, &t, &p).unwrap();
    }

    #[test]
    fn single_core_fit_has_no_moves() {
        let mut c = Circuit::new("c", 4);
        c.add("cx", &[0, 1]).add("cx", &[1, 2]).add("cx", &[2, 3]).add("cx", &[3, 0]);
        let t = MultiCoreTopology::all_to_all(2, 4).unwrap();
        let (p, r) = map_multicore(&c, &t, &ErrorModel::default()).unwrap();
        assert_eq!(p.inter_core_moves, 0);
        assert_eq!(r.inter_core_moves, Some(0));
        assert_eq!(r.gate_overhead().unwrap(), 0.0);
    }

    #[test]
    fn grid_hops_are_charged() {
        let t = MultiCoreTopology::grid(1, 3, 1).unwrap();
        // qubit 0 on core 0, qubit 1 on core 2; one must cross two hops
        let slices = [slice_of(&[(0, 1)])];
        assert!(partition_with_initial(&slices, &t, vec![0, 2]).is_err());
        let t = MultiCoreTopology::grid(1, 3, 2).unwrap();
        let p = partition_with_initial(&slices, &t, vec![0, 2]).unwrap();
        assert_eq!(p.moves.len(), 1);
        assert_eq!(p.inter_core_moves, 2);
        verify_partition(&slices, &t, &p).unwrap();
    }

    #[test]
    fn over_capacity_is_rejected() {
        let c = Circuit::new("c", 5);
        let t = MultiCoreTopology::all_to_all(2, 2).unwrap();
        assert!(matches!(initial_assignment(&c, &t), Err(Error::CapacityInfeasible(_))));
    }
}
