//! Density, idling and the longest repeated gate substring.

use qprof::bench::qft;
use qprof::circuit::gate_token_sequence;
use qprof::density::density_features;
use qprof::repetition::longest_repeated_subcircuit;
use qprof::{asap_layering, parse_qasm};

fn main() -> qprof::Result<()> {
    let text = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\n\
                h q[0]; cx q[0],q[1]; t q[2];\n\
                h q[0]; cx q[0],q[1]; t q[2];\n\
                h q[0]; cx q[0],q[1];\n";
    for circuit in [parse_qasm(text)?, qft(5)] {
        let tokens = gate_token_sequence(&circuit);
        let rep = longest_repeated_subcircuit(&tokens);
        let l = asap_layering(&circuit);
        let d = density_features(&circuit, &l);
        println!("{} gates, depth {}", circuit.n_gates(), l.depth);
        println!("  density/idling {d:?}");
        match rep.first_start {
            Some(s) => println!(
                "  longest repeat: {} gates x{} starting at {s}: {}",
                rep.largest_repeat_len,
                rep.largest_repeat_count,
                tokens[s..s + rep.largest_repeat_len].join(" ")
            ),
            None => println!("  nothing repeats"),
        }
    }
    Ok(())
}
