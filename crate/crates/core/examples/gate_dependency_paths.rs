//! Path statistics of the gate dependency graph, including exact counts
//! that overflow machine integers.

use qprof::bench::brickwork;
use qprof::gdg_metrics::gdg_path_features;
use qprof::{build_gdg, parse_qasm};

fn main() -> qprof::Result<()> {
    let ghz = parse_qasm(include_str!("../data/circuits/ghz3.qasm"))?;
    let g = build_gdg(&ghz);
    println!("ghz3 dependency edges:\n{}", g.to_edge_list());
    let f = gdg_path_features(&g);
    println!(
        "critical length {}, {} source-to-sink paths, {} critical",
        f.critical_path_length, f.n_paths, f.n_critical_paths
    );

    // path counts grow exponentially with brickwork depth
    for layers in [4, 16, 64, 256] {
        let f = gdg_path_features(&build_gdg(&brickwork(8, layers)));
        println!(
            "brickwork 8x{layers:<3} L={:<4} paths~10^{:.1} critical~10^{:.1} mean={:.2} std={:.2}",
            f.critical_path_length,
            f.log10_n_paths(),
            f.log10_n_critical_paths(),
            f.path_length_mean,
            f.path_length_std
        );
    }
    Ok(())
}
