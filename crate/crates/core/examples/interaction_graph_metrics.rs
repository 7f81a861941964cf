//! Build the qubit interaction graph and print its topology metrics.

use qprof::ig_metrics::{betweenness, core_numbers, ig_features, maximal_cliques};
use qprof::{build_interaction_graph, parse_qasm};

fn main() -> qprof::Result<()> {
    let circuit = parse_qasm(include_str!("../data/circuits/interaction_example.qasm"))?;
    let ig = build_interaction_graph(&circuit);
    println!("{} qubits, {} weighted edges", ig.n_nodes(), ig.n_edges());
    for (a, b, w) in ig.edges() {
        println!("  q{a} - q{b}  x{w}");
    }
    println!("dot:\n{}", ig.to_dot());

    println!("betweenness  {:?}", betweenness(&ig));
    println!("core numbers {:?}", core_numbers(&ig));
    println!("cliques      {:?}", maximal_cliques(&ig));

    let f = ig_features(&ig)?;
    println!("{f:#?}");
    Ok(())
}
