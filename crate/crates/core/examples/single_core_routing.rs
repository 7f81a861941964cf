//! Route circuits onto fixed coupling maps and report the overheads.

use qprof::bench::{qft, random_circuit};
use qprof::routing::{route_single_core, verify_routing, RouteConfig};
use qprof::CouplingTopology;

fn main() -> qprof::Result<()> {
    let devices = [
        ("linear:9", CouplingTopology::linear(9)?),
        ("grid:3x3", CouplingTopology::grid(3, 3)?),
        ("surface17", CouplingTopology::surface17()),
    ];
    let circuits = [qft(6), random_circuit(3, 9, 80, 0.5)];
    let config = RouteConfig::default();
    for (label, t) in &devices {
        for c in &circuits {
            let routed = route_single_core(c, t, &config)?;
            verify_routing(c, &routed, t).expect("routing is sound");
            let r = &routed.result;
            println!(
                "{label:<10} {:<8} swaps={:<3} gates {}->{} depth {}->{} fidelity {:.4}->{:.4}",
                c.name, routed.swaps, r.gates_before, r.gates_after, r.depth_before, r.depth_after,
                r.fidelity_before, r.fidelity_after
            );
        }
    }
    Ok(())
}
