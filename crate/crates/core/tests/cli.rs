//! End-to-end runs of the `qprof` binary and its file formats.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use qprof::cli::{CORR_CSV, ERRORS_LOG, FEATURES_CSV, HEATMAP_SVG, RESULTS_CSV};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/circuits").join(name)
}

fn qprof(out: &Path, args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_qprof"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("QPROF_OUT_DIR")
        .output()
        .expect("binary runs");
    (
        o.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&o.stdout).into_owned(),
        String::from_utf8_lossy(&o.stderr).into_owned(),
    )
}

fn records(path: &Path) -> Vec<csv::StringRecord> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    rdr.records().map(Result::unwrap).collect()
}

fn header(path: &Path) -> csv::StringRecord {
    csv::Reader::from_path(path).unwrap().headers().unwrap().clone()
}

fn field<'a>(path: &Path, rec: &'a csv::StringRecord, column: &str) -> &'a str {
    let i = header(path).iter().position(|h| h == column).unwrap();
    &rec[i]
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

const CX02: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\ncx q[0],q[2];\n";

#[test]
fn profile_writes_one_row_per_bundled_circuit() {
    let out = TempDir::new().unwrap();
    let inputs: Vec<String> = ["ghz3.qasm", "qft4.qasm", "toffoli_adder.qasm"]
        .iter()
        .map(|n| bundled(n).display().to_string())
        .collect();
    let mut args = vec!["profile"];
    args.extend(inputs.iter().map(String::as_str));
    let (code, _, err) = qprof(out.path(), &args);
    assert_eq!(code, 0, "{err}");
    let features = out.path().join(FEATURES_CSV);
    let rows = records(&features);
    assert_eq!(rows.len(), 3);
    let names: Vec<&str> = rows.iter().map(|r| &r[0]).collect();
    assert_eq!(names, ["ghz3", "qft4", "toffoli_adder"]);
    let ghz = &rows[0];
    assert_eq!(field(&features, ghz, "n_qubits"), "3");
    assert_eq!(field(&features, ghz, "depth"), "3");
    assert!(out.path().join("circuits/ghz3.json").is_file());
    assert_eq!(fs::read_to_string(out.path().join(ERRORS_LOG)).unwrap(), "");
}

#[test]
fn malformed_inputs_are_logged_not_fatal() {
    let src = TempDir::new().unwrap();
    for i in 0..4 {
        write(src.path(), &format!("ok{i}.qasm"), CX02);
    }
    write(src.path(), "broken.qasm", "OPENQASM 2.0;\nqreg q[2];\ncx q[0] q[1];\n");
    let out = TempDir::new().unwrap();
    let (code, _, err) = qprof(out.path(), &["profile", src.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(records(&out.path().join(FEATURES_CSV)).len(), 4);
    let log = fs::read_to_string(out.path().join(ERRORS_LOG)).unwrap();
    assert_eq!(log.lines().count(), 1);
    assert!(log.contains("broken.qasm"));
    assert!(err.contains("broken.qasm"));
}

#[test]
fn exit_codes() {
    let out = TempDir::new().unwrap();
    // clap rejects unknown flags
    assert_eq!(qprof(out.path(), &["profile", "--bogus", "x"]).0, 2);
    // missing required positional
    assert_eq!(qprof(out.path(), &["map"]).0, 2);
    // map without a topology
    let cx = write(out.path(), "a.qasm", CX02);
    assert_eq!(qprof(out.path(), &["map", cx.to_str().unwrap()]).0, 2);
    // inverted k range
    let features = write(out.path(), "f.csv", "name,n_qubits\nx,1\ny,2\n");
    assert_eq!(qprof(out.path(), &["cluster", features.to_str().unwrap(), "--k-min", "4", "--k-max", "2"]).0, 2);
    // nothing parses
    let bad = TempDir::new().unwrap();
    write(bad.path(), "x.qasm", "not qasm");
    assert_eq!(qprof(out.path(), &["profile", bad.path().to_str().unwrap()]).0, 3);
    // feature and result files share no circuit names
    let results = TempDir::new().unwrap();
    let (code, _, err) = qprof(results.path(), &["map", cx.to_str().unwrap(), "--topology", "linear:3"]);
    assert_eq!(code, 0, "{err}");
    let (code, _, err) = qprof(
        out.path(),
        &["correlate", features.to_str().unwrap(), results.path().join(RESULTS_CSV).to_str().unwrap()],
    );
    assert_eq!(code, 3, "{err}");
}

#[test]
fn map_scores_identity_and_single_swap() {
    let src = TempDir::new().unwrap();
    write(src.path(), "cx02.qasm", CX02);
    fs::copy(bundled("ghz3.qasm"), src.path().join("ghz3.qasm")).unwrap();
    let out = TempDir::new().unwrap();
    let (code, _, err) =
        qprof(out.path(), &["map", src.path().to_str().unwrap(), "--topology", "linear:3", "--emit-mapped"]);
    assert_eq!(code, 0, "{err}");
    let results = out.path().join(RESULTS_CSV);
    let rows = records(&results);
    assert_eq!(rows.len(), 2);
    let row = |name: &str| rows.iter().find(|r| &r[0] == name).unwrap();
    let ghz = row("ghz3");
    assert_eq!(field(&results, ghz, "status"), "ok");
    assert_eq!(field(&results, ghz, "swaps"), "0");
    assert_eq!(field(&results, ghz, "gate_overhead").parse::<f64>().unwrap(), 0.0);
    assert_eq!(field(&results, ghz, "fidelity_decrease").parse::<f64>().unwrap(), 0.0);
    let cx = row("cx02");
    assert_eq!(field(&results, cx, "swaps"), "1");
    assert_eq!(field(&results, cx, "gate_overhead").parse::<f64>().unwrap(), 3.0);
    assert_eq!(field(&results, cx, "inter_core_moves"), "");
    let mapped = fs::read_to_string(out.path().join("mapped/cx02.qasm")).unwrap();
    assert!(mapped.contains("swap"));
}

#[test]
fn multicore_rows_report_moves() {
    let src = TempDir::new().unwrap();
    write(
        src.path(),
        "pairs.qasm",
        "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[4];\ncx q[0],q[1];\ncx q[2],q[3];\ncx q[0],q[2];\ncx q[1],q[3];\n",
    );
    let out = TempDir::new().unwrap();
    let (code, _, err) = qprof(out.path(), &["map", src.path().to_str().unwrap(), "--topology", "cores:all:2:2"]);
    assert_eq!(code, 0, "{err}");
    let results = out.path().join(RESULTS_CSV);
    let rows = records(&results);
    assert_eq!(field(&results, &rows[0], "status"), "ok");
    assert_eq!(field(&results, &rows[0], "inter_core_moves").parse::<f64>().unwrap(), 2.0);
}

#[test]
fn heatmap_has_one_cell_per_pair() {
    let out = TempDir::new().unwrap();
    let dir = bundled("").display().to_string();
    let (code, _, err) = qprof(out.path(), &["report", &dir, "--topology", "grid:3x3", "--k-size", "2", "--seed", "5"]);
    assert_eq!(code, 0, "{err}");
    let corr = records(&out.path().join(CORR_CSV));
    let svg = fs::read_to_string(out.path().join(HEATMAP_SVG)).unwrap();
    let features: std::collections::BTreeSet<&str> = corr.iter().map(|r| &r[2]).collect();
    let metrics: std::collections::BTreeSet<&str> = corr.iter().map(|r| &r[0]).collect();
    assert_eq!(corr.len(), features.len() * metrics.len());
    assert_eq!(svg.matches("<rect").count(), corr.len());
    assert_eq!(svg.matches("<rect").count(), svg.matches("</rect>").count());
    assert_eq!(svg.matches("<text").count(), svg.matches("</text>").count());
    assert!(svg.trim_start().starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

fn results_with(path: &Path, names: &[String], overhead: &[f64]) {
    let mut w = csv::Writer::from_path(path).unwrap();
    w.write_record(qprof::cli::RESULTS_HEADER).unwrap();
    for (n, g) in names.iter().zip(overhead) {
        let mut rec = vec![String::new(); qprof::cli::RESULTS_HEADER.len()];
        rec[0] = n.clone();
        rec[1] = "ok".into();
        rec[13] = g.to_string();
        rec[17] = "0.001".into();
        rec[18] = "0.01".into();
        w.write_record(&rec).unwrap();
    }
    w.flush().unwrap();
}

fn corr_r(path: &Path, feature: &str) -> f64 {
    records(path).iter().find(|r| &r[2] == feature).unwrap()[3].parse().unwrap()
}

#[test]
fn correlate_exact_copy_and_noise() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 1000;
    let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let overhead: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..5.0)).collect();
    let mut features = csv::Writer::from_path(dir.path().join("f.csv")).unwrap();
    features.write_record(["name", "copy", "noise"]).unwrap();
    for (name, g) in names.iter().zip(&overhead) {
        let noise: f64 = rng.gen_range(-1.0..1.0);
        features.write_record([name.clone(), g.to_string(), noise.to_string()]).unwrap();
    }
    features.flush().unwrap();
    results_with(&dir.path().join("r.csv"), &names, &overhead);
    let out = dir.path().join("out");
    let (code, _, err) = qprof(
        &out,
        &["correlate", dir.path().join("f.csv").to_str().unwrap(), dir.path().join("r.csv").to_str().unwrap()],
    );
    assert_eq!(code, 0, "{err}");
    let corr = out.join(CORR_CSV);
    assert!((corr_r(&corr, "copy") - 1.0).abs() < 1e-12);
    assert!(corr_r(&corr, "noise").abs() < 0.1);
    // copy ranks first
    let first = records(&corr).into_iter().find(|r| &r[1] == "1").unwrap();
    assert_eq!(&first[2], "copy");
}

#[test]
fn cluster_single_row() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.csv", "name,n_qubits,n_gates,two_qubit_gate_pct,depth,avg_degree\nonly,3,4,0.5,3,1.3\n");
    let out = dir.path().join("out");
    let (code, _, err) = qprof(&out, &["cluster", f.to_str().unwrap(), "--seed", "1"]);
    assert_eq!(code, 0, "{err}");
    let rows = records(&out.join("clusters.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][0], "only");
}

#[test]
fn out_dir_from_environment() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qprof"))
        .args(["profile", bundled("ghz3.qasm").to_str().unwrap()])
        .env("QPROF_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join(FEATURES_CSV).is_file());
}
