//! Batch commands behind the `qprof` binary.
//!
//! Every command writes into one output directory, records its resolved
//! configuration (seed included) in `run-<command>.json`, and keeps output
//! row order equal to input order whatever the worker count.
//!
//! Exit codes: 0 on success (possibly with warnings), 2 on usage errors,
//! 3 when nothing valid could be processed.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::Circuit;
use crate::clustering::{two_level_cluster, TwoLevelConfig};
use crate::correlation::{correlation_table, ErrorModel, MappingResult, METRIC_COLUMNS};
use crate::error::{Error, Result};
use crate::features::{profile_circuit, write_features_csv, FeatureTable, FeatureVector, Profile, SIZE_COLUMNS};
use crate::multicore::{asap_slices, partition_multicore, verify_partition};
use crate::qasm::{parse_qasm_with, ParseMetadata, ParseOptions};
use crate::routing::{route_single_core, verify_routing, RouteConfig};
use crate::topology::{Device, TopologySpec};

pub const SCHEMA_VERSION: u32 = 1;
pub const OUT_DIR_ENV: &str = "QPROF_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "qprof-out";

pub const FEATURES_CSV: &str = "features.csv";
pub const CLUSTERS_CSV: &str = "clusters.csv";
pub const CLUSTERS_JSON: &str = "clusters.json";
pub const RESULTS_CSV: &str = "results.csv";
pub const CORR_CSV: &str = "corr.csv";
pub const CORR_JSON: &str = "corr.json";
pub const HEATMAP_SVG: &str = "heatmap.svg";
pub const ERRORS_LOG: &str = "errors.log";

/// Resolved settings shared by all commands.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub inputs: Vec<String>,
    pub profile: Profile,
    pub k_size: usize,
    pub k_range: (usize, usize),
    pub restarts: usize,
    pub seed: u64,
    pub topology: Option<String>,
    pub swap_cost: usize,
    pub eps_1q: f64,
    pub eps_2q: f64,
    pub emit_mapped: bool,
    #[serde(skip)]
    pub out_dir: PathBuf,
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let model = ErrorModel::default();
        RunConfig {
            inputs: Vec::new(),
            profile: Profile::All,
            k_size: 5,
            k_range: (2, 10),
            restarts: 10,
            seed: 0,
            topology: None,
            swap_cost: 3,
            eps_1q: model.eps_1q,
            eps_2q: model.eps_2q,
            emit_mapped: false,
            out_dir: PathBuf::from(DEFAULT_OUT_DIR),
            jobs: None,
        }
    }
}

impl RunConfig {
    pub fn error_model(&self) -> ErrorModel {
        ErrorModel {
            eps_1q: self.eps_1q,
            eps_2q: self.eps_2q,
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.k_range;
        if self.k_size == 0 || lo < 2 || hi < lo {
            return Err(Error::Usage(format!(
                "need k_size ≥ 1 and 2 ≤ k_min ≤ k_max (got k_size={}, k_range={lo}..={hi})",
                self.k_size
            )));
        }
        if self.restarts == 0 {
            return Err(Error::Usage("restarts must be ≥ 1".into()));
        }
        for (name, e) in [("eps_1q", self.eps_1q), ("eps_2q", self.eps_2q)] {
            if !(0.0..1.0).contains(&e) {
                return Err(Error::Usage(format!("{name} must lie in [0, 1)")));
            }
        }
        Ok(())
    }
}

/// Seed used when none is given: derived from the clock and recorded in
/// the run file so the run can be repeated.
pub fn fresh_seed() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0)
}

/// Files written and non-fatal problems met by a command.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub written: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn merge(&mut self, other: Outcome) {
        self.written.extend(other.written);
        self.warnings.extend(other.warnings);
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) => 2,
        _ => 3,
    }
}

/// Directories expand to their `.qasm` files (recursively), patterns with
/// `*`, `?` or `[` go through glob, anything else is taken literally.
/// Duplicates are dropped, first occurrence wins.
pub fn expand_inputs(inputs: &[String]) -> Result<Vec<PathBuf>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for input in inputs {
        let path = Path::new(input);
        let mut found: Vec<PathBuf> = if path.is_dir() {
            let pattern = path.join("**").join("*.qasm");
            glob_paths(&pattern.to_string_lossy())?
        } else if input.contains(['*', '?', '[']) {
            glob_paths(input)?
        } else {
            vec![path.to_path_buf()]
        };
        found.sort();
        for p in found {
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

fn glob_paths(pattern: &str) -> Result<Vec<PathBuf>> {
    let paths = glob::glob(pattern).map_err(|e| Error::Usage(format!("bad pattern {pattern:?}: {e}")))?;
    Ok(paths.filter_map(|p| p.ok()).filter(|p| p.is_file()).collect())
}

/// File stems, with `_2`, `_3`, ... appended on collisions.
fn circuit_names(paths: &[PathBuf]) -> Vec<String> {
    let mut used = HashSet::new();
    paths
        .iter()
        .map(|p| {
            let stem = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "circuit".into());
            let mut name = stem.clone();
            let mut k = 2;
            while !used.insert(name.clone()) {
                name = format!("{stem}_{k}");
                k += 1;
            }
            name
        })
        .collect()
}

fn par_map<T: Sync, R: Send>(jobs: Option<usize>, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.unwrap_or(0)).build();
    match pool {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

fn load_circuit(path: &Path, name: &str) -> Result<(Circuit, ParseMetadata)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let options = ParseOptions {
        decompose: true,
        name: name.to_string(),
    };
    let parsed = parse_qasm_with(&text, &options)?;
    Ok((parsed.circuit, parsed.metadata))
}

fn write_file(out: &mut Outcome, path: PathBuf, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    out.written.push(path);
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[derive(Serialize)]
struct RunRecord<'a> {
    schema_version: u32,
    command: &'a str,
    seed: u64,
    config: &'a RunConfig,
    inputs: Vec<String>,
    succeeded: usize,
    failed: usize,
}

fn write_run_record(
    out: &mut Outcome,
    config: &RunConfig,
    command: &str,
    inputs: Vec<String>,
    succeeded: usize,
    failed: usize,
) -> Result<()> {
    let record = RunRecord {
        schema_version: SCHEMA_VERSION,
        command,
        seed: config.seed,
        config,
        inputs,
        succeeded,
        failed,
    };
    write_file(out, config.out_dir.join(format!("run-{command}.json")), &to_json(&record)?)
}

/// Feature vector serialized as a map in catalogue order.
struct OrderedFeatures<'a>(&'a FeatureVector, &'a [&'static str]);

impl Serialize for OrderedFeatures<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().filter(|(n, _)| self.1.contains(n)))
    }
}

#[derive(Serialize)]
struct CircuitRecord<'a> {
    schema_version: u32,
    name: &'a str,
    source: String,
    n_qubits: usize,
    n_gates: usize,
    parse: &'a ParseMetadata,
    cliques_capped: bool,
    features: OrderedFeatures<'a>,
}

fn display_paths(paths: &[PathBuf]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}

/// Path as recorded in run files; files inside the output directory are
/// recorded relative to it so that copies of a run compare equal.
fn recorded_path(path: &Path, config: &RunConfig) -> String {
    path.strip_prefix(&config.out_dir)
        .unwrap_or(path)
        .display()
        .to_string()
}

/// Parses and profiles every input: `features.csv`, `circuits/<name>.json`,
/// `errors.log`.
pub fn cmd_profile(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let paths = expand_inputs(&config.inputs)?;
    if paths.is_empty() {
        return Err(Error::NoValidWork("no input circuits found".into()));
    }
    let names = circuit_names(&paths);
    let jobs: Vec<(&PathBuf, &String)> = paths.iter().zip(&names).collect();
    let results = par_map(config.jobs, &jobs, |(path, name)| {
        let (c, meta) = load_circuit(path, name)?;
        let fv = profile_circuit(&c)?;
        Ok::<_, Error>((c, meta, fv))
    });
    let columns = config.profile.columns();
    let mut out = Outcome::default();
    let mut vectors = Vec::new();
    let mut log = String::new();
    for ((path, name), res) in jobs.iter().zip(results) {
        match res {
            Ok((c, meta, fv)) => {
                let record = CircuitRecord {
                    schema_version: SCHEMA_VERSION,
                    name,
                    source: path.display().to_string(),
                    n_qubits: c.n_qubits(),
                    n_gates: c.n_gates(),
                    parse: &meta,
                    cliques_capped: fv.cliques_capped,
                    features: OrderedFeatures(&fv, &columns),
                };
                write_file(
                    &mut out,
                    config.out_dir.join("circuits").join(format!("{name}.json")),
                    &to_json(&record)?,
                )?;
                if fv.cliques_capped {
                    out.warnings
                        .push(format!("{}: clique enumeration capped; count is a lower bound", path.display()));
                }
                vectors.push(fv);
            }
            Err(e) => {
                let line = format!("{}: {e}", path.display());
                log.push_str(&line);
                log.push('\n');
                out.warnings.push(line);
            }
        }
    }
    let failed = paths.len() - vectors.len();
    write_file(&mut out, config.out_dir.join(ERRORS_LOG), log.as_bytes())?;
    if vectors.is_empty() {
        return Err(Error::NoValidWork(format!("none of {} inputs could be profiled", paths.len())));
    }
    let mut csv_bytes = Vec::new();
    write_features_csv(&mut csv_bytes, &vectors, &columns)?;
    write_file(&mut out, config.out_dir.join(FEATURES_CSV), &csv_bytes)?;
    write_run_record(&mut out, config, "profile", display_paths(&paths), vectors.len(), failed)?;
    Ok(out)
}

#[derive(Serialize)]
struct ClusterRecord<'a> {
    schema_version: u32,
    #[serde(flatten)]
    assignment: &'a crate::clustering::ClusterAssignment,
}

/// Two-level clustering of a feature CSV: `clusters.csv`, `clusters.json`.
pub fn cmd_cluster(features_csv: &Path, config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let file = fs::File::open(features_csv).map_err(|e| Error::io(features_csv, e))?;
    let table = FeatureTable::read_csv(file)?;
    if table.n_rows() == 0 {
        return Err(Error::NoValidWork(format!("{} has no rows", features_csv.display())));
    }
    let missing: Vec<&str> = SIZE_COLUMNS.iter().copied().filter(|c| table.column_index(c).is_none()).collect();
    if !missing.is_empty() {
        return Err(Error::Table(format!("missing size columns: {}", missing.join(", "))));
    }
    let cc = TwoLevelConfig {
        k_size: config.k_size,
        k_range: config.k_range,
        seed: config.seed,
        restarts: config.restarts,
        ..TwoLevelConfig::default()
    };
    let assignment = two_level_cluster(&table, &cc)?;
    let mut out = Outcome::default();
    let mut csv_bytes = Vec::new();
    assignment.write_csv(&mut csv_bytes)?;
    write_file(&mut out, config.out_dir.join(CLUSTERS_CSV), &csv_bytes)?;
    let record = ClusterRecord {
        schema_version: SCHEMA_VERSION,
        assignment: &assignment,
    };
    write_file(&mut out, config.out_dir.join(CLUSTERS_JSON), &to_json(&record)?)?;
    write_run_record(
        &mut out,
        config,
        "cluster",
        vec![recorded_path(features_csv, config)],
        table.n_rows(),
        0,
    )?;
    Ok(out)
}

/// One line of `results.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapRow {
    pub name: String,
    pub n_qubits: Option<usize>,
    pub swaps: Option<usize>,
    pub outcome: std::result::Result<MappingResult, String>,
}

pub const RESULTS_HEADER: [&str; 20] = [
    "name",
    "status",
    "device",
    "n_qubits",
    "gates_before",
    "gates_after",
    "depth_before",
    "depth_after",
    "n_1q_added",
    "n_2q_added",
    "swaps",
    "fidelity_before",
    "fidelity_after",
    "gate_overhead",
    "depth_overhead",
    "fidelity_decrease",
    "inter_core_moves",
    "eps_1q",
    "eps_2q",
    "error",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_f(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

pub fn write_results_csv<W: std::io::Write>(
    writer: W,
    device: &str,
    model: &ErrorModel,
    rows: &[MapRow],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(RESULTS_HEADER)?;
    for row in rows {
        let mut rec = vec![row.name.clone()];
        match &row.outcome {
            Ok(r) => {
                let [g, d, f, m] = r.metric_values();
                rec.extend([
                    "ok".to_string(),
                    device.to_string(),
                    opt(row.n_qubits),
                    r.gates_before.to_string(),
                    r.gates_after.to_string(),
                    r.depth_before.to_string(),
                    r.depth_after.to_string(),
                    r.n_1q_added.to_string(),
                    r.n_2q_added.to_string(),
                    opt(row.swaps),
                    format!("{:?}", r.fidelity_before),
                    format!("{:?}", r.fidelity_after),
                    opt_f(g),
                    opt_f(d),
                    opt_f(f),
                    opt_f(m),
                    format!("{:?}", model.eps_1q),
                    format!("{:?}", model.eps_2q),
                    String::new(),
                ]);
            }
            Err(msg) => {
                rec.extend(["failed".to_string(), device.to_string(), opt(row.n_qubits)]);
                rec.extend(std::iter::repeat_n(String::new(), RESULTS_HEADER.len() - 5));
                rec.push(msg.clone());
            }
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Metric columns of a `results.csv` as a table (failed rows all missing)
/// plus the error model recorded in the file.
pub fn read_results_csv<R: std::io::Read>(reader: R) -> Result<(FeatureTable, Option<ErrorModel>)> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header = rdr.headers()?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Table(format!("results file lacks column `{name}`")))
    };
    let name_i = col("name")?;
    let status_i = col("status")?;
    let metric_i: Vec<usize> = METRIC_COLUMNS.iter().map(|m| col(m)).collect::<Result<_>>()?;
    let eps_i = (col("eps_1q")?, col("eps_2q")?);
    let mut table = FeatureTable {
        names: Vec::new(),
        columns: METRIC_COLUMNS.iter().map(|s| s.to_string()).collect(),
        rows: Vec::new(),
    };
    let mut model = None;
    let parse = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| Error::Table(format!("`{s}` is not a number")))
        }
    };
    for rec in rdr.records() {
        let rec = rec?;
        table.names.push(rec[name_i].to_string());
        let ok = &rec[status_i] == "ok";
        let row = metric_i
            .iter()
            .map(|&i| if ok { parse(&rec[i]) } else { Ok(None) })
            .collect::<Result<Vec<_>>>()?;
        table.rows.push(row);
        if ok && model.is_none() {
            if let (Some(eps_1q), Some(eps_2q)) = (parse(&rec[eps_i.0])?, parse(&rec[eps_i.1])?) {
                model = Some(ErrorModel { eps_1q, eps_2q });
            }
        }
    }
    Ok((table, model))
}

fn map_one(path: &Path, name: &str, device: &Device, config: &RunConfig) -> (MapRow, Option<Circuit>) {
    let (c, _) = match load_circuit(path, name) {
        Ok(x) => x,
        Err(e) => {
            return (
                MapRow {
                    name: name.to_string(),
                    n_qubits: None,
                    swaps: None,
                    outcome: Err(e.to_string()),
                },
                None,
            )
        }
    };
    let model = config.error_model();
    let mapped = match device {
        Device::SingleCore(t) => {
            let rc = RouteConfig {
                swap_cost: config.swap_cost,
                error_model: model,
            };
            route_single_core(&c, t, &rc).and_then(|r| {
                verify_routing(&c, &r, t)?;
                Ok((r.result, Some(r.swaps), Some(r.mapped)))
            })
        }
        Device::MultiCore(t) => {
            let slices = asap_slices(&c);
            partition_multicore(&slices, &c, t).and_then(|p| {
                verify_partition(&slices, t, &p)?;
                let stats = crate::correlation::CircuitStats::of(&c);
                let mut r = crate::correlation::performance_metrics(&stats, &stats, &model);
                r.inter_core_moves = Some(p.inter_core_moves);
                Ok((r, None, None))
            })
        }
    };
    match mapped {
        Ok((result, swaps, circuit)) => (
            MapRow {
                name: name.to_string(),
                n_qubits: Some(c.n_qubits()),
                swaps,
                outcome: Ok(result),
            },
            circuit,
        ),
        Err(e) => (
            MapRow {
                name: name.to_string(),
                n_qubits: Some(c.n_qubits()),
                swaps: None,
                outcome: Err(e.to_string()),
            },
            None,
        ),
    }
}

/// Maps every input onto the configured device: `results.csv` and, when
/// requested, `mapped/<name>.qasm` for single-core runs.
pub fn cmd_map(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let spec = config
        .topology
        .as_deref()
        .ok_or_else(|| Error::Usage("map needs a topology".into()))?;
    let device = TopologySpec(spec.to_string()).load().map_err(|e| match e {
        Error::Topology(m) => Error::Usage(m),
        other => other,
    })?;
    let paths = expand_inputs(&config.inputs)?;
    if paths.is_empty() {
        return Err(Error::NoValidWork("no input circuits found".into()));
    }
    let names = circuit_names(&paths);
    let jobs: Vec<(&PathBuf, &String)> = paths.iter().zip(&names).collect();
    let results = par_map(config.jobs, &jobs, |(path, name)| map_one(path, name, &device, config));
    let mut out = Outcome::default();
    let mut rows = Vec::with_capacity(results.len());
    for ((path, name), (row, mapped)) in jobs.iter().zip(results) {
        if let Err(msg) = &row.outcome {
            out.warnings.push(format!("{}: {msg}", path.display()));
        }
        if let (true, Some(m)) = (config.emit_mapped, mapped) {
            write_file(
                &mut out,
                config.out_dir.join("mapped").join(format!("{name}.qasm")),
                m.to_qasm().as_bytes(),
            )?;
        }
        rows.push(row);
    }
    let mut csv_bytes = Vec::new();
    write_results_csv(&mut csv_bytes, device.name(), &config.error_model(), &rows)?;
    write_file(&mut out, config.out_dir.join(RESULTS_CSV), &csv_bytes)?;
    let ok = rows.iter().filter(|r| r.outcome.is_ok()).count();
    write_run_record(&mut out, config, "map", display_paths(&paths), ok, rows.len() - ok)?;
    if ok == 0 {
        return Err(Error::NoValidWork("no circuit could be mapped".into()));
    }
    Ok(out)
}

/// Correlates features with mapping metrics: `corr.csv`, `corr.json`,
/// `heatmap.svg`.
pub fn cmd_correlate(features_csv: &Path, results_csv: &Path, config: &RunConfig) -> Result<Outcome> {
    let features =
        FeatureTable::read_csv(fs::File::open(features_csv).map_err(|e| Error::io(features_csv, e))?)?;
    let (metrics, model) =
        read_results_csv(fs::File::open(results_csv).map_err(|e| Error::io(results_csv, e))?)?;
    let present: Vec<&str> = METRIC_COLUMNS
        .iter()
        .copied()
        .filter(|m| metrics.column(m).is_some_and(|c| c.iter().any(Option::is_some)))
        .collect();
    let metrics = metrics.project(&present);
    let mut report = correlation_table(&features, &metrics).map_err(|e| match e {
        Error::Correlation(m) => Error::NoValidWork(m),
        other => other,
    })?;
    report.error_model = model;
    let mut out = Outcome::default();
    let mut csv_bytes = Vec::new();
    report.write_csv(&mut csv_bytes)?;
    write_file(&mut out, config.out_dir.join(CORR_CSV), &csv_bytes)?;
    write_file(&mut out, config.out_dir.join(CORR_JSON), &to_json(&report)?)?;
    write_file(&mut out, config.out_dir.join(HEATMAP_SVG), report.to_svg().as_bytes())?;
    write_run_record(
        &mut out,
        config,
        "correlate",
        vec![recorded_path(features_csv, config), recorded_path(results_csv, config)],
        report.matched_rows,
        0,
    )?;
    Ok(out)
}

/// profile → cluster → map → correlate into one directory. Mapping and
/// correlation are skipped when no topology is configured.
pub fn cmd_report(config: &RunConfig) -> Result<Outcome> {
    let mut out = cmd_profile(config)?;
    let features = config.out_dir.join(FEATURES_CSV);
    out.merge(cmd_cluster(&features, config)?);
    if config.topology.is_none() {
        out.warnings.push("no topology given; skipping map and correlate".into());
        return Ok(out);
    }
    out.merge(cmd_map(config)?);
    out.merge(cmd_correlate(&features, &config.out_dir.join(RESULTS_CSV), config)?);
    Ok(out)
}

#[derive(Debug, Parser)]
#[command(name = "qprof", version, about = "Profile, cluster and map quantum circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output directory.
    #[arg(long, short, global = true, env = OUT_DIR_ENV, default_value = DEFAULT_OUT_DIR)]
    pub out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, short, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract structural features from QASM files.
    Profile {
        /// Files, directories or glob patterns.
        #[arg(required = true)]
        inputs: Vec<String>,
        #[arg(long, value_enum, default_value_t = Profile::All)]
        profile: Profile,
    },
    /// Two-level k-means over a features CSV.
    Cluster {
        features: PathBuf,
        #[command(flatten)]
        clustering: ClusterArgs,
    },
    /// Map circuits onto a device and score the overheads.
    Map {
        #[arg(required = true)]
        inputs: Vec<String>,
        #[command(flatten)]
        mapping: MapArgs,
    },
    /// Correlate features with mapping metrics.
    Correlate { features: PathBuf, results: PathBuf },
    /// Run profile, cluster, map and correlate in sequence.
    Report {
        #[arg(required = true)]
        inputs: Vec<String>,
        #[arg(long, value_enum, default_value_t = Profile::All)]
        profile: Profile,
        #[command(flatten)]
        clustering: ClusterArgs,
        #[command(flatten)]
        mapping: MapArgs,
    },
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[arg(long, default_value_t = 5)]
    pub k_size: usize,
    #[arg(long, default_value_t = 2)]
    pub k_min: usize,
    #[arg(long, default_value_t = 10)]
    pub k_max: usize,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    /// Random seed; generated and recorded when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// `linear:N`, `grid:RxC`, `all_to_all:N`, `surface17`,
    /// `cores:all:K:C`, `cores:grid:RxC:C` or a JSON file.
    #[arg(long)]
    pub topology: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub swap_cost: usize,
    #[arg(long, default_value_t = 0.001)]
    pub eps_1q: f64,
    #[arg(long, default_value_t = 0.01)]
    pub eps_2q: f64,
    /// Also write routed circuits as QASM.
    #[arg(long)]
    pub emit_mapped: bool,
}

impl ClusterArgs {
    fn apply(&self, c: &mut RunConfig) {
        c.k_size = self.k_size;
        c.k_range = (self.k_min, self.k_max);
        c.restarts = self.restarts;
        c.seed = self.seed.unwrap_or_else(fresh_seed);
    }
}

impl MapArgs {
    fn apply(&self, c: &mut RunConfig) {
        c.topology = self.topology.clone();
        c.swap_cost = self.swap_cost;
        c.eps_1q = self.eps_1q;
        c.eps_2q = self.eps_2q;
        c.emit_mapped = self.emit_mapped;
    }
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let mut config = RunConfig {
        out_dir: cli.out,
        jobs: cli.jobs,
        ..RunConfig::default()
    };
    let result = match &cli.command {
        Command::Profile { inputs, profile } => {
            config.inputs = inputs.clone();
            config.profile = *profile;
            cmd_profile(&config)
        }
        Command::Cluster { features, clustering } => {
            clustering.apply(&mut config);
            cmd_cluster(features, &config)
        }
        Command::Map { inputs, mapping } => {
            config.inputs = inputs.clone();
            mapping.apply(&mut config);
            cmd_map(&config)
        }
        Command::Correlate { features, results } => cmd_correlate(features, results, &config),
        Command::Report {
            inputs,
            profile,
            clustering,
            mapping,
        } => {
            config.inputs = inputs.clone();
            config.profile = *profile;
            clustering.apply(&mut config);
            mapping.apply(&mut config);
            cmd_report(&config)
        }
    };
    match result {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            for p in &outcome.written {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (program name first) and runs; clap usage errors give 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}
