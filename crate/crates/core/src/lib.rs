//! Structural profiling of quantum circuits.
//!
//! Parse OpenQASM into a [`Circuit`], derive its interaction graph and
//! gate-dependency graph, extract a named feature vector, cluster a corpus
//! of feature vectors, map circuits onto single- or multi-core devices with
//! baseline mappers, and correlate features with mapping overheads.
//!
//! ```
//! use qprof::{parse_qasm, profile_circuit};
//!
//! let c = parse_qasm("OPENQASM 2.0; qreg q[3]; h q[0]; cx q[0],q[1]; cx q[1],q[2];").unwrap();
//! let fv = profile_circuit(&c).unwrap();
//! assert_eq!(fv.f64("depth"), Some(3.0));
//! ```

pub mod bench;
pub mod circuit;
pub mod cli;
pub mod clustering;
pub mod correlation;
pub mod density;
pub mod error;
pub mod features;
pub mod gdg_metrics;
pub mod graph;
pub mod ig_metrics;
pub mod multicore;
pub mod qasm;
pub mod repetition;
pub mod routing;
pub mod topology;

pub use circuit::{asap_layering, Circuit, Gate, Layering};
pub use clustering::{two_level_cluster, ClusterAssignment, TwoLevelConfig};
pub use correlation::{correlation_table, pearson, CorrelationReport, ErrorModel, MappingResult};
pub use error::{Error, Result};
pub use features::{profile_circuit, FeatureTable, FeatureValue, FeatureVector, Profile};
pub use gdg_metrics::{gdg_path_features, GdgFeatureSet};
pub use graph::{build_gdg, build_interaction_graph, GateDependencyGraph, InteractionGraph};
pub use ig_metrics::{ig_features, IgFeatureSet};
pub use multicore::{partition_multicore, slice_circuit, Partition};
pub use qasm::{parse_qasm, parse_qasm_with};
pub use routing::{route_single_core, RouteConfig, RoutedCircuit};
pub use topology::{CouplingTopology, MultiCoreTopology, TopologySpec};
