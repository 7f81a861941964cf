//! Two-level clustering of a synthetic benchmark suite: size first, then
//! structure inside each size cluster.

use qprof::bench::{brickwork, ghz, qft, random_circuit};
use qprof::features::Profile;
use qprof::clustering::TwoLevelConfig;
use qprof::features::FeatureTable;
use qprof::{profile_circuit, two_level_cluster};

fn main() -> qprof::Result<()> {
    let mut circuits = Vec::new();
    for n in [4, 5, 6, 8, 10, 12] {
        circuits.push(ghz(n));
        circuits.push(qft(n));
        circuits.push(brickwork(n, n));
    }
    for seed in 0..12 {
        circuits.push(random_circuit(seed, 6 + (seed as usize % 6), 60, 0.4));
    }
    let vectors = circuits.iter().map(profile_circuit).collect::<qprof::Result<Vec<_>>>()?;
    let columns = Profile::All.columns();
    let table = FeatureTable::from_vectors(&vectors, &columns);

    let config = TwoLevelConfig { k_size: 3, k_range: (2, 4), seed: 7, ..TwoLevelConfig::default() };
    let a = two_level_cluster(&table, &config)?;
    println!("size silhouette {:?}", a.size_silhouette);
    for s in &a.sub_clusters {
        println!(
            "size cluster {}: {} members, k={} silhouette {:?}",
            s.size_cluster, s.members, s.k, s.silhouette
        );
    }
    for (i, name) in a.names.iter().enumerate() {
        println!("  {name:<24} {}.{}", a.size_cluster[i], a.sub_cluster[i]);
    }
    Ok(())
}
