//! Parse a QASM file and print its full feature vector.
//!
//! ```text
//! cargo run --example profile_circuit -- path/to/circuit.qasm
//! ```

use std::path::PathBuf;

use qprof::{parse_qasm, profile_circuit};

fn main() -> qprof::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/circuits/toffoli_adder.qasm"));
    let text = std::fs::read_to_string(&path).expect("readable input");
    let circuit = parse_qasm(&text)?;
    println!("{}: {} qubits, {} gates", path.display(), circuit.n_qubits(), circuit.n_gates());

    let features = profile_circuit(&circuit)?;
    for (name, value) in features.iter() {
        println!("  {name:<34} {value}");
    }
    Ok(())
}
