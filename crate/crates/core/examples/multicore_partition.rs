//! Partition a circuit over capacity-limited cores and replay the moves.

use qprof::bench::random_circuit;
use qprof::correlation::ErrorModel;
use qprof::multicore::{asap_slices, map_multicore, verify_partition};
use qprof::MultiCoreTopology;

fn main() -> qprof::Result<()> {
    let c = random_circuit(42, 16, 120, 0.6);
    for t in [MultiCoreTopology::all_to_all(4, 4)?, MultiCoreTopology::grid(2, 2, 4)?] {
        let (p, result) = map_multicore(&c, &t, &ErrorModel::default())?;
        verify_partition(&asap_slices(&c), &t, &p)?;
        println!(
            "{} cores x{}: {} moves, initial {:?}",
            t.n_cores(),
            t.capacity(),
            p.inter_core_moves,
            p.initial
        );
        for m in p.moves.iter().take(5) {
            println!("  slice {:>3}: q{} core {} -> {} ({} hops)", m.slice, m.qubit, m.from, m.to, m.hops);
        }
        println!("  fidelity {:.4} -> {:.4}", result.fidelity_before, result.fidelity_after);
    }
    Ok(())
}
