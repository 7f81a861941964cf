//! Mapping performance metrics and feature-vs-performance Pearson correlation.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureTable;

/// Uniform per-gate error rates used for the fidelity estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    pub eps_1q: f64,
    pub eps_2q: f64,
}

impl Default for ErrorModel {
    fn default() -> Self {
        ErrorModel {
            eps_1q: 0.001,
            eps_2q: 0.01,
        }
    }
}

impl ErrorModel {
    /// Product of per-gate success probabilities.
    pub fn fidelity(&self, n_1q: usize, n_2q: usize) -> f64 {
        (1.0 - self.eps_1q).powf(n_1q as f64) * (1.0 - self.eps_2q).powf(n_2q as f64)
    }
}

/// Gate and layer counts of a circuit version.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CircuitStats {
    pub n_1q: usize,
    pub n_2q: usize,
    pub depth: usize,
}

impl CircuitStats {
    pub fn of(c: &crate::circuit::Circuit) -> Self {
        CircuitStats {
            n_1q: c.n_single_qubit_gates(),
            n_2q: c.n_two_qubit_gates(),
            depth: crate::circuit::asap_layering(c).depth,
        }
    }

    pub fn n_gates(&self) -> usize {
        self.n_1q + self.n_2q
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MappingResult {
    pub gates_before: usize,
    pub gates_after: usize,
    pub depth_before: usize,
    pub depth_after: usize,
    pub n_1q_added: usize,
    pub n_2q_added: usize,
    pub fidelity_before: f64,
    pub fidelity_after: f64,
    /// Multi-core runs only.
    pub inter_core_moves: Option<usize>,
}

impl MappingResult {
    pub fn gate_overhead(&self) -> Result<f64> {
        relative_growth(self.gates_before as f64, self.gates_after as f64, "gate_overhead")
    }

    pub fn depth_overhead(&self) -> Result<f64> {
        relative_growth(self.depth_before as f64, self.depth_after as f64, "depth_overhead")
    }

    pub fn fidelity_decrease(&self) -> Result<f64> {
        if self.fidelity_before <= 0.0 {
            return Err(Error::UndefinedMetric("fidelity_decrease"));
        }
        Ok((self.fidelity_before - self.fidelity_after) / self.fidelity_before)
    }

    /// Named metric values in [`METRIC_COLUMNS`] order.
    pub fn metric_values(&self) -> [Option<f64>; 4] {
        [
            self.gate_overhead().ok(),
            self.depth_overhead().ok(),
            self.fidelity_decrease().ok(),
            self.inter_core_moves.map(|m| m as f64),
        ]
    }
}

pub const METRIC_COLUMNS: [&str; 4] = [
    "gate_overhead",
    "depth_overhead",
    "fidelity_decrease",
    "inter_core_moves",
];

fn relative_growth(before: f64, after: f64, name: &'static str) -> Result<f64> {
    if before <= 0.0 {
        return Err(Error::UndefinedMetric(name));
    }
    Ok((after - before) / before)
}

pub fn performance_metrics(before: &CircuitStats, after: &CircuitStats, model: &ErrorModel) -> MappingResult {
    MappingResult {
        gates_before: before.n_gates(),
        gates_after: after.n_gates(),
        depth_before: before.depth,
        depth_after: after.depth,
        n_1q_added: after.n_1q.saturating_sub(before.n_1q),
        n_2q_added: after.n_2q.saturating_sub(before.n_2q),
        fidelity_before: model.fidelity(before.n_1q, before.n_2q),
        fidelity_after: model.fidelity(after.n_1q, after.n_2q),
        inter_core_moves: None,
    }
}

/// Sample Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Correlation(format!(
            "series must have equal length >= 2 (got {} and {})",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    let scale = |m: f64| 1e-24 * (1.0 + m * m) * n;
    if sxx <= scale(mx) || syy <= scale(my) {
        return Err(Error::UndefinedMetric("pearson"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationCell {
    pub r: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub features: Vec<String>,
    pub metrics: Vec<String>,
    /// `cells[feature][metric]`.
    pub cells: Vec<Vec<CorrelationCell>>,
    /// Per metric: features sorted by descending r; undefined cells last.
    pub rankings: Vec<Vec<String>>,
    pub matched_rows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_model: Option<ErrorModel>,
}

pub const MIN_PAIRED_ROWS: usize = 3;

/// Correlates every feature column with every metric column, matching rows
/// by circuit name and dropping rows with a missing value pairwise.
pub fn correlation_table(features: &FeatureTable, metrics: &FeatureTable) -> Result<CorrelationReport> {
    let metric_rows: HashMap<&str, usize> = metrics
        .names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let matched: Vec<(usize, usize)> = features
        .names
        .iter()
        .enumerate()
        .filter_map(|(i, n)| metric_rows.get(n.as_str()).map(|&j| (i, j)))
        .collect();
    if matched.is_empty() {
        return Err(Error::Correlation("no circuit names shared by features and results".into()));
    }
    let mut cells = Vec::with_capacity(features.columns.len());
    for f in 0..features.columns.len() {
        let mut row = Vec::with_capacity(metrics.columns.len());
        for m in 0..metrics.columns.len() {
            let (xs, ys): (Vec<f64>, Vec<f64>) = matched
                .iter()
                .filter_map(|&(i, j)| match (features.rows[i][f], metrics.rows[j][m]) {
                    (Some(x), Some(y)) if x.is_finite() && y.is_finite() => Some((x, y)),
                    _ => None,
                })
                .unzip();
            let r = if xs.len() >= MIN_PAIRED_ROWS {
                pearson(&xs, &ys).ok()
            } else {
                None
            };
            row.push(CorrelationCell { r, n: xs.len() });
        }
        cells.push(row);
    }
    let rankings = (0..metrics.columns.len())
        .map(|m| {
            let mut idx: Vec<usize> = (0..features.columns.len()).collect();
            idx.sort_by(|&a, &b| match (cells[a][m].r, cells[b][m].r) {
                (Some(x), Some(y)) => y.total_cmp(&x).then(a.cmp(&b)),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (None, None) => a.cmp(&b),
            });
            idx.into_iter().map(|i| features.columns[i].clone()).collect()
        })
        .collect();
    Ok(CorrelationReport {
        features: features.columns.clone(),
        metrics: metrics.columns.clone(),
        cells,
        rankings,
        matched_rows: matched.len(),
        error_model: None,
    })
}

impl CorrelationReport {
    pub fn cell(&self, feature: &str, metric: &str) -> Option<CorrelationCell> {
        let f = self.features.iter().position(|x| x == feature)?;
        let m = self.metrics.iter().position(|x| x == metric)?;
        Some(self.cells[f][m])
    }

    /// `metric,rank,feature,r,n`, one block per metric in ranking order.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["metric", "rank", "feature", "r", "n"])?;
        for (m, ranking) in self.metrics.iter().zip(&self.rankings) {
            for (rank, feature) in ranking.iter().enumerate() {
                let cell = self.cell(feature, m).expect("ranked feature exists");
                w.write_record([
                    m.clone(),
                    (rank + 1).to_string(),
                    feature.clone(),
                    cell.r.map(|r| format!("{r:?}")).unwrap_or_default(),
                    cell.n.to_string(),
                ])?;
            }
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    /// Heatmap with one rect per (feature, metric) cell; dark red at +1,
    /// white at 0, dark blue at −1 and grey when undefined. Rows follow the
    /// ranking of the first metric.
    pub fn to_svg(&self) -> String {
        const CELL_W: usize = 90;
        const CELL_H: usize = 18;
        const LABEL_W: usize = 220;
        const HEADER_H: usize = 60;
        let order: Vec<usize> = match self.rankings.first() {
            Some(r) => r
                .iter()
                .map(|f| self.features.iter().position(|x| x == f).unwrap_or(0))
                .collect(),
            None => (0..self.features.len()).collect(),
        };
        let width = LABEL_W + CELL_W * self.metrics.len() + 10;
        let height = HEADER_H + CELL_H * self.features.len() + 10;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" font-family=\"sans-serif\" font-size=\"11\">"
        );
        for (m, name) in self.metrics.iter().enumerate() {
            let x = LABEL_W + m * CELL_W + CELL_W / 2;
            let _ = writeln!(
                s,
                "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
                HEADER_H - 8,
                xml_escape(name)
            );
        }
        for (row, &f) in order.iter().enumerate() {
            let y = HEADER_H + row * CELL_H;
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
                LABEL_W - 6,
                y + CELL_H - 5,
                xml_escape(&self.features[f])
            );
            for m in 0..self.metrics.len() {
                let cell = self.cells[f][m];
                let x = LABEL_W + m * CELL_W;
                let (fill, label) = match cell.r {
                    Some(r) => (heat_color(r), format!("{r:.2}")),
                    None => ("#cccccc".to_string(), "n/a".to_string()),
                };
                let _ = writeln!(
                    s,
                    "<rect x=\"{x}\" y=\"{y}\" width=\"{CELL_W}\" height=\"{CELL_H}\" fill=\"{fill}\" stroke=\"#ffffff\"><title>{} / {}: {label}</title></rect>",
                    xml_escape(&self.features[f]),
                    xml_escape(&self.metrics[m])
                );
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Red-white-blue diverging scale.
pub fn heat_color(r: f64) -> String {
    let r = r.clamp(-1.0, 1.0);
    let (target, t) = if r >= 0.0 {
        ((178.0, 24.0, 43.0), r)
    } else {
        ((33.0, 102.0, 172.0), -r)
    };
    let mix = |c: f64| (255.0 + (c - 255.0) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(target.0), mix(target.1), mix(target.2))
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
