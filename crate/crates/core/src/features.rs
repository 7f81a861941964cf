//! Feature catalogue: one named, canonically ordered vector per circuit.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::circuit::{asap_layering, gate_token_sequence, size_features, Circuit};
use crate::density::density_features;
use crate::error::{Error, Result};
use crate::gdg_metrics::gdg_path_features;
use crate::graph::{build_gdg, build_interaction_graph};
use crate::ig_metrics::ig_features;
use crate::repetition::longest_repeated_subcircuit;

/// Which architecture a feature is relevant for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relevance {
    Both,
    SingleCore,
    MultiCore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    Size,
    InteractionGraph,
    DependencyGraph,
    Density,
    Repetition,
}

pub struct FeatureSpec {
    pub name: &'static str,
    pub group: Group,
    pub relevance: Relevance,
}

const fn spec(name: &'static str, group: Group, relevance: Relevance) -> FeatureSpec {
    FeatureSpec {
        name,
        group,
        relevance,
    }
}

use Group::*;
use Relevance::*;

/// Canonical column order.
pub const CATALOGUE: &[FeatureSpec] = &[
    spec("n_qubits", Size, Both),
    spec("n_gates", Size, Both),
    spec("two_qubit_gate_pct", Size, Both),
    spec("depth", Size, Both),
    spec("avg_shortest_path", InteractionGraph, SingleCore),
    spec("adjacency_std", InteractionGraph, SingleCore),
    spec("diameter", InteractionGraph, MultiCore),
    spec("central_point_of_dominance", InteractionGraph, MultiCore),
    spec("avg_degree", InteractionGraph, Both),
    spec("n_maximal_cliques", InteractionGraph, MultiCore),
    spec("max_clique_size", InteractionGraph, MultiCore),
    spec("clustering_coefficient", InteractionGraph, MultiCore),
    spec("vertex_connectivity", InteractionGraph, MultiCore),
    spec("edge_connectivity", InteractionGraph, MultiCore),
    spec("coreness_max", InteractionGraph, MultiCore),
    spec("coreness_mean", InteractionGraph, MultiCore),
    spec("pagerank_std", InteractionGraph, MultiCore),
    spec("ig_disconnected", InteractionGraph, Both),
    spec("critical_path_length", DependencyGraph, Both),
    spec("n_critical_paths", DependencyGraph, Both),
    spec("log10_n_critical_paths", DependencyGraph, Both),
    spec("n_paths", DependencyGraph, Both),
    spec("log10_n_paths", DependencyGraph, Both),
    spec("path_length_mean", DependencyGraph, Both),
    spec("path_length_std", DependencyGraph, Both),
    spec("pct_gates_in_critical_path", DependencyGraph, Both),
    spec("max_2q_in_critical", DependencyGraph, Both),
    spec("n_critical_with_max_2q", DependencyGraph, Both),
    spec("density_score", Density, Both),
    spec("idling_score", Density, Both),
    spec("largest_repeat_len", Repetition, Both),
    spec("largest_repeat_count", Repetition, Both),
];

pub const SIZE_COLUMNS: [&str; 4] = ["n_qubits", "n_gates", "two_qubit_gate_pct", "depth"];

/// Feature subsets by target architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// Every catalogue column.
    All,
    SingleCore,
    MultiCore,
}

impl Profile {
    pub fn columns(self) -> Vec<&'static str> {
        CATALOGUE
            .iter()
            .filter(|s| match (self, s.relevance) {
                (Profile::All, _) | (_, Both) => true,
                (Profile::SingleCore, r) => r == SingleCore,
                (Profile::MultiCore, r) => r == MultiCore,
            })
            .map(|s| s.name)
            .collect()
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::All => "all",
            Profile::SingleCore => "single-core",
            Profile::MultiCore => "multi-core",
        })
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Profile::All),
            "single-core" | "single" => Ok(Profile::SingleCore),
            "multi-core" | "multi" => Ok(Profile::MultiCore),
            _ => Err(Error::Table(format!("unknown profile `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureValue {
    Real(f64),
    Int(u64),
    /// Exact, possibly huge, path counts.
    Count(BigUint),
    Missing,
}

impl FeatureValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            FeatureValue::Real(v) => Some(*v),
            FeatureValue::Int(v) => Some(*v as f64),
            FeatureValue::Count(v) => num_traits::ToPrimitive::to_f64(v),
            FeatureValue::Missing => None,
        }
    }
}

impl fmt::Display for FeatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureValue::Real(v) => write!(f, "{v:?}"),
            FeatureValue::Int(v) => write!(f, "{v}"),
            FeatureValue::Count(v) => write!(f, "{v}"),
            FeatureValue::Missing => Ok(()),
        }
    }
}

impl Serialize for FeatureValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FeatureValue::Real(v) => s.serialize_f64(*v),
            FeatureValue::Int(v) => s.serialize_u64(*v),
            FeatureValue::Count(v) => s.serialize_str(&v.to_string()),
            FeatureValue::Missing => s.serialize_none(),
        }
    }
}

/// Named scalar features of one circuit, in catalogue order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureVector {
    pub name: String,
    values: Vec<(&'static str, FeatureValue)>,
    /// Clique enumeration stopped at the budget.
    pub cliques_capped: bool,
}

impl FeatureVector {
    pub fn get(&self, column: &str) -> Option<&FeatureValue> {
        self.values.iter().find(|(n, _)| *n == column).map(|(_, v)| v)
    }

    pub fn f64(&self, column: &str) -> Option<f64> {
        self.get(column).and_then(FeatureValue::as_f64)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &FeatureValue)> {
        self.values.iter().map(|(n, v)| (*n, v))
    }

    /// Values for the given columns; unknown columns are `Missing`.
    pub fn select(&self, columns: &[&str]) -> Vec<FeatureValue> {
        columns
            .iter()
            .map(|c| self.get(c).cloned().unwrap_or(FeatureValue::Missing))
            .collect()
    }
}

fn real(v: Option<f64>) -> FeatureValue {
    v.map_or(FeatureValue::Missing, FeatureValue::Real)
}

/// Extracts the whole catalogue from a circuit.
pub fn profile_circuit(c: &Circuit) -> Result<FeatureVector> {
    use FeatureValue::{Count, Int, Real};

    let size = size_features(c);
    let layering = asap_layering(c);
    let ig = build_interaction_graph(c);
    let igf = ig_features(&ig)?;
    let gdg = build_gdg(c);
    let gf = gdg_path_features(&gdg);
    let dens = density_features(c, &layering);
    let rep = longest_repeated_subcircuit(&gate_token_sequence(c));

    let values = vec![
        ("n_qubits", Int(size.n_qubits as u64)),
        ("n_gates", Int(size.n_gates as u64)),
        ("two_qubit_gate_pct", Real(size.two_qubit_gate_pct)),
        ("depth", Int(size.depth as u64)),
        ("avg_shortest_path", real(igf.avg_shortest_path)),
        ("adjacency_std", Real(igf.adjacency_std)),
        ("diameter", igf.diameter.map_or(FeatureValue::Missing, |d| Int(d as u64))),
        ("central_point_of_dominance", Real(igf.central_point_of_dominance)),
        ("avg_degree", Real(igf.avg_degree)),
        ("n_maximal_cliques", Int(igf.n_maximal_cliques as u64)),
        ("max_clique_size", Int(igf.max_clique_size as u64)),
        ("clustering_coefficient", Real(igf.clustering_coefficient)),
        ("vertex_connectivity", Int(igf.vertex_connectivity as u64)),
        ("edge_connectivity", Int(igf.edge_connectivity as u64)),
        ("coreness_max", Int(igf.coreness_max as u64)),
        ("coreness_mean", Real(igf.coreness_mean)),
        ("pagerank_std", Real(igf.pagerank_std)),
        ("ig_disconnected", Int(u64::from(igf.disconnected))),
        ("critical_path_length", Int(gf.critical_path_length as u64)),
        ("n_critical_paths", Count(gf.n_critical_paths.clone())),
        ("log10_n_critical_paths", Real(gf.log10_n_critical_paths())),
        ("n_paths", Count(gf.n_paths.clone())),
        ("log10_n_paths", Real(gf.log10_n_paths())),
        ("path_length_mean", Real(gf.path_length_mean)),
        ("path_length_std", Real(gf.path_length_std)),
        ("pct_gates_in_critical_path", real(gf.pct_gates_in_critical_path)),
        ("max_2q_in_critical", Int(gf.max_2q_in_critical as u64)),
        ("n_critical_with_max_2q", Count(gf.n_critical_with_max_2q.clone())),
        ("density_score", real(dens.density_score)),
        ("idling_score", real(dens.idling_score)),
        ("largest_repeat_len", Int(rep.largest_repeat_len as u64)),
        ("largest_repeat_count", Int(rep.largest_repeat_count as u64)),
    ];
    debug_assert!(values.iter().zip(CATALOGUE).all(|((n, _), s)| *n == s.name));
    Ok(FeatureVector {
        name: c.name.clone(),
        values,
        cliques_capped: igf.cliques_capped,
    })
}

/// Numeric table: one row per circuit, missing entries as `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub names: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl FeatureTable {
    pub fn from_vectors(vectors: &[FeatureVector], columns: &[&str]) -> Self {
        FeatureTable {
            names: vectors.iter().map(|v| v.name.clone()).collect(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: vectors
                .iter()
                .map(|v| v.select(columns).iter().map(FeatureValue::as_f64).collect())
                .collect(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Keeps only the named columns that exist, in the given order.
    pub fn project(&self, columns: &[&str]) -> FeatureTable {
        let idx: Vec<usize> = columns.iter().filter_map(|c| self.column_index(c)).collect();
        FeatureTable {
            names: self.names.clone(),
            columns: idx.iter().map(|&i| self.columns[i].clone()).collect(),
            rows: self.rows.iter().map(|r| idx.iter().map(|&i| r[i]).collect()).collect(),
        }
    }

    /// Reads a `name,<columns...>` CSV; empty cells are missing.
    pub fn read_csv<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.get(0) != Some("name") {
            return Err(Error::Table("first column must be `name`".into()));
        }
        let columns: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut names = Vec::new();
        let mut rows = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() != columns.len() + 1 {
                return Err(Error::Table(format!("row {} has {} fields", line + 2, rec.len())));
            }
            names.push(rec[0].to_string());
            let row = rec
                .iter()
                .skip(1)
                .map(|cell| {
                    let cell = cell.trim();
                    if cell.is_empty() || cell.eq_ignore_ascii_case("nan") {
                        Ok(None)
                    } else {
                        cell.parse::<f64>()
                            .map(Some)
                            .map_err(|_| Error::Table(format!("row {}: `{cell}` is not a number", line + 2)))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(FeatureTable { names, columns, rows })
    }
}

/// Writes feature vectors as CSV with exact integer counts.
pub fn write_features_csv<W: std::io::Write>(writer: W, vectors: &[FeatureVector], columns: &[&str]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["name"];
    header.extend_from_slice(columns);
    w.write_record(&header)?;
    for v in vectors {
        let mut rec = vec![v.name.clone()];
        rec.extend(v.select(columns).iter().map(|x| x.to_string()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}
