//! Correlate circuit features with routing overhead and write a heatmap.

use qprof::bench::density_corpus;
use qprof::features::Profile;
use qprof::correlation::ErrorModel;
use qprof::features::FeatureTable;
use qprof::routing::RouteConfig;
use qprof::{correlation_table, profile_circuit, route_single_core, CouplingTopology};

fn main() -> qprof::Result<()> {
    let corpus = density_corpus(1, 60);
    let t = CouplingTopology::grid(4, 4)?;
    let config = RouteConfig { error_model: ErrorModel::default(), ..RouteConfig::default() };

    let vectors = corpus.iter().map(profile_circuit).collect::<qprof::Result<Vec<_>>>()?;
    let features = FeatureTable::from_vectors(&vectors, &Profile::SingleCore.columns());
    let mut metrics = FeatureTable {
        names: Vec::new(),
        columns: vec!["gate_overhead".into(), "depth_overhead".into(), "fidelity_decrease".into()],
        rows: Vec::new(),
    };
    for c in &corpus {
        let r = route_single_core(c, &t, &config)?.result;
        metrics.names.push(c.name.clone());
        metrics.rows.push(vec![r.gate_overhead().ok(), r.depth_overhead().ok(), r.fidelity_decrease().ok()]);
    }

    let report = correlation_table(&features, &metrics)?;
    for (m, ranking) in report.metrics.iter().zip(&report.rankings) {
        println!("{m}:");
        for f in ranking.iter().take(5) {
            println!("  {f:<34} r={:?}", report.cell(f, m).and_then(|c| c.r));
        }
    }
    let out = std::env::temp_dir().join("qprof_heatmap.svg");
    std::fs::write(&out, report.to_svg()).expect("writable temp dir");
    println!("heatmap written to {}", out.display());
    Ok(())
}
