//! Two-level K-means: size clusters first, then structure sub-clusters with
//! the sub-cluster count picked by silhouette.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::features::{FeatureTable, SIZE_COLUMNS};

pub const MAX_LLOYD_ITERATIONS: usize = 300;

/// Columns with heavy right tails, compressed with `ln(1 + x)` before scaling.
pub const LOG_COLUMNS: [&str; 5] = [
    "n_gates",
    "depth",
    "n_paths",
    "n_critical_paths",
    "n_critical_with_max_2q",
];

/// Raw path counts; their `log10_` companions are used for clustering instead.
const RAW_COUNT_COLUMNS: [&str; 2] = ["n_paths", "n_critical_paths"];

/// Z-scores every column with the population std; constant columns become 0.
/// Missing cells stay missing and are ignored by the statistics.
pub fn standardize(t: &FeatureTable) -> FeatureTable {
    let mut out = t.clone();
    for j in 0..t.columns.len() {
        let vals: Vec<f64> = t.rows.iter().filter_map(|r| r[j]).collect();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n.max(1.0);
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n.max(1.0);
        let std = var.sqrt();
        for r in &mut out.rows {
            r[j] = r[j].map(|v| if std > 1e-12 * mean.abs().max(1.0) { (v - mean) / std } else { 0.0 });
        }
    }
    out
}

fn standardize_dense(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let t = FeatureTable {
        names: vec![String::new(); points.len()],
        columns: vec![String::new(); points.first().map_or(0, Vec::len)],
        rows: points.iter().map(|r| r.iter().map(|&v| Some(v)).collect()).collect(),
    };
    standardize(&t)
        .rows
        .into_iter()
        .map(|r| r.into_iter().map(|v| v.unwrap_or(0.0)).collect())
        .collect()
}

/// Fills missing cells with the column median (0 when a column is empty).
/// Returns the dense matrix and the number of imputed cells per column.
pub fn impute_median(t: &FeatureTable) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut counts = vec![0; t.columns.len()];
    let medians: Vec<f64> = (0..t.columns.len())
        .map(|j| {
            let mut vals: Vec<f64> = t.rows.iter().filter_map(|r| r[j]).collect();
            if vals.is_empty() {
                return 0.0;
            }
            vals.sort_by(f64::total_cmp);
            let m = vals.len() / 2;
            if vals.len() % 2 == 1 {
                vals[m]
            } else {
                0.5 * (vals[m - 1] + vals[m])
            }
        })
        .collect();
    let rows = t
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .map(|(j, v)| {
                    v.unwrap_or_else(|| {
                        counts[j] += 1;
                        medians[j]
                    })
                })
                .collect()
        })
        .collect();
    (rows, counts)
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squares of the selected restart.
    pub wcss: f64,
    /// WCSS after every Lloyd iteration of the selected restart.
    pub wcss_history: Vec<f64>,
    pub restart: usize,
}

fn kmeans_pp_seed(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centroids = vec![points[rng.gen_range(0..n)].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let idx = if total <= 0.0 {
            rng.gen_range(0..n)
        } else {
            let mut target = rng.gen::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                if target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        };
        let c = points[idx].clone();
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &c));
        }
        centroids.push(c);
    }
    centroids
}

fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter().enumerate() {
        let d = sq_dist(p, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn lloyd(points: &[Vec<f64>], mut centroids: Vec<Vec<f64>>) -> (Vec<usize>, Vec<Vec<f64>>, Vec<f64>) {
    let k = centroids.len();
    let dim = points[0].len();
    let mut labels = vec![usize::MAX; points.len()];
    let mut history = Vec::new();
    for _ in 0..MAX_LLOYD_ITERATIONS {
        let mut changed = false;
        let mut dists = vec![0.0; points.len()];
        for (i, p) in points.iter().enumerate() {
            let (j, d) = nearest(p, &centroids);
            if labels[i] != j {
                labels[i] = j;
                changed = true;
            }
            dists[i] = d;
        }
        // re-seed empty clusters with the worst-fitting point of a multi-member cluster
        let mut sizes = vec![0usize; k];
        for &l in &labels {
            sizes[l] += 1;
        }
        for e in 0..k {
            if sizes[e] > 0 {
                continue;
            }
            let far = (0..points.len())
                .filter(|&i| sizes[labels[i]] > 1)
                .max_by(|&a, &b| dists[a].total_cmp(&dists[b]).then(b.cmp(&a)));
            if let Some(i) = far {
                sizes[labels[i]] -= 1;
                sizes[e] = 1;
                labels[i] = e;
                dists[i] = 0.0;
                centroids[e] = points[i].clone();
                changed = true;
            }
        }
        let mut sums = vec![vec![0.0; dim]; k];
        for (p, &l) in points.iter().zip(&labels) {
            for (s, v) in sums[l].iter_mut().zip(p) {
                *s += v;
            }
        }
        for j in 0..k {
            if sizes[j] > 0 {
                centroids[j] = sums[j].iter().map(|s| s / sizes[j] as f64).collect();
            }
        }
        let wcss: f64 = points.iter().zip(&labels).map(|(p, &l)| sq_dist(p, &centroids[l])).sum();
        history.push(wcss);
        if !changed {
            break;
        }
    }
    (labels, centroids, history)
}

/// Lloyd's algorithm with k-means++ seeding; the restart with the lowest WCSS
/// wins, ties going to the earlier restart.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64, restarts: usize) -> Result<KMeansResult> {
    if k == 0 {
        return Err(Error::Clustering("k must be at least 1".into()));
    }
    if k > points.len() {
        return Err(Error::Clustering(format!(
            "k = {k} exceeds the number of points ({})",
            points.len()
        )));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim || p.iter().any(|v| !v.is_finite())) {
        return Err(Error::Clustering("points must be finite and of equal dimension".into()));
    }
    let mut best: Option<KMeansResult> = None;
    for restart in 0..restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart as u64);
        let init = kmeans_pp_seed(points, k, &mut rng);
        let (labels, centroids, history) = lloyd(points, init);
        let wcss = *history.last().unwrap_or(&0.0);
        if best.as_ref().is_none_or(|b| wcss < b.wcss) {
            best = Some(KMeansResult {
                labels,
                centroids,
                wcss,
                wcss_history: history,
                restart,
            });
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Mean silhouette with Euclidean distances. Points in singleton clusters
/// score 0, as do points whose `a` and `b` are both 0.
pub fn silhouette(points: &[Vec<f64>], labels: &[usize]) -> Result<f64> {
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k];
    for &l in labels {
        sizes[l] += 1;
    }
    if sizes.iter().filter(|&&s| s > 0).count() < 2 {
        return Err(Error::Clustering("silhouette needs at least two non-empty clusters".into()));
    }
    let n = points.len();
    let mut total = 0.0;
    for i in 0..n {
        let mut sums = vec![0.0; k];
        for j in 0..n {
            if i != j {
                sums[labels[j]] += sq_dist(&points[i], &points[j]).sqrt();
            }
        }
        let own = labels[i];
        if sizes[own] <= 1 {
            continue;
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own && sizes[c] > 0)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let m = a.max(b);
        if m > 0.0 {
            total += (b - a) / m;
        }
    }
    Ok(total / n as f64)
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoLevelConfig {
    pub k_size: usize,
    /// Inclusive range of candidate sub-cluster counts.
    pub k_range: (usize, usize),
    pub seed: u64,
    pub restarts: usize,
    pub size_columns: Vec<String>,
    /// `None` uses every non-size column except raw path counts.
    pub structure_columns: Option<Vec<String>>,
}

impl Default for TwoLevelConfig {
    fn default() -> Self {
        TwoLevelConfig {
            k_size: 5,
            k_range: (2, 10),
            seed: 0,
            restarts: 10,
            size_columns: SIZE_COLUMNS.iter().map(|s| s.to_string()).collect(),
            structure_columns: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubClusterSummary {
    pub size_cluster: usize,
    pub members: usize,
    /// 1 when the cluster was left unsplit.
    pub k: usize,
    pub silhouette: Option<f64>,
    /// Silhouette for every candidate k that was tried.
    pub candidates: Vec<(usize, f64)>,
    /// Per-sub-cluster means of the (imputed, untransformed) structure features.
    pub centroids: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterAssignment {
    pub names: Vec<String>,
    pub size_cluster: Vec<usize>,
    pub sub_cluster: Vec<usize>,
    pub k_size: usize,
    pub size_silhouette: Option<f64>,
    pub size_columns: Vec<String>,
    pub structure_columns: Vec<String>,
    /// Per-size-cluster means of the (imputed, untransformed) size features.
    pub size_centroids: Vec<Vec<f64>>,
    pub sub_clusters: Vec<SubClusterSummary>,
    /// Imputed cell counts per column (only columns with imputations).
    pub imputed: Vec<(String, usize)>,
    pub seed: u64,
}

fn log_transform(t: &mut FeatureTable) {
    for (j, name) in t.columns.iter().enumerate() {
        if LOG_COLUMNS.contains(&name.as_str()) {
            for r in &mut t.rows {
                r[j] = r[j].map(|v| v.max(0.0).ln_1p());
            }
        }
    }
}

fn means(rows: &[&Vec<f64>], labels: &[usize], k: usize) -> Vec<Vec<f64>> {
    let dim = rows.first().map_or(0, |r| r.len());
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (r, &l) in rows.iter().zip(labels) {
        counts[l] += 1;
        for (s, v) in sums[l].iter_mut().zip(r.iter()) {
            *s += v;
        }
    }
    sums.into_iter()
        .zip(counts)
        .map(|(s, c)| s.into_iter().map(|v| v / c.max(1) as f64).collect())
        .collect()
}

pub fn two_level_cluster(t: &FeatureTable, config: &TwoLevelConfig) -> Result<ClusterAssignment> {
    let n = t.n_rows();
    if n == 0 {
        return Err(Error::Clustering("empty feature table".into()));
    }
    let (k_lo, k_hi) = config.k_range;
    if k_lo < 2 || k_hi < k_lo {
        return Err(Error::Clustering(format!("invalid k range {k_lo}..={k_hi}")));
    }
    let size_cols: Vec<&str> = config.size_columns.iter().map(String::as_str).collect();
    if let Some(missing) = size_cols.iter().find(|c| t.column_index(c).is_none()) {
        return Err(Error::Clustering(format!("size column `{missing}` not in table")));
    }
    let structure_cols: Vec<String> = match &config.structure_columns {
        Some(cols) => cols.clone(),
        None => t
            .columns
            .iter()
            .filter(|c| !size_cols.contains(&c.as_str()) && !RAW_COUNT_COLUMNS.contains(&c.as_str()))
            .cloned()
            .collect(),
    };
    let structure_refs: Vec<&str> = structure_cols.iter().map(String::as_str).collect();
    if let Some(missing) = structure_refs.iter().find(|c| t.column_index(c).is_none()) {
        return Err(Error::Clustering(format!("structure column `{missing}` not in table")));
    }

    let mut all_cols = size_cols.clone();
    all_cols.extend(&structure_refs);
    let projected = t.project(&all_cols);
    let (raw, counts) = impute_median(&projected);
    let imputed = projected
        .columns
        .iter()
        .zip(&counts)
        .filter(|(_, &c)| c > 0)
        .map(|(name, &c)| (name.clone(), c))
        .collect();
    let mut transformed = FeatureTable {
        names: t.names.clone(),
        columns: projected.columns.clone(),
        rows: raw.iter().map(|r| r.iter().map(|&v| Some(v)).collect()).collect(),
    };
    log_transform(&mut transformed);
    let dense: Vec<Vec<f64>> = transformed
        .rows
        .iter()
        .map(|r| r.iter().map(|v| v.unwrap_or(0.0)).collect())
        .collect();
    let n_size = size_cols.len();

    // level 1
    let size_points = standardize_dense(&dense.iter().map(|r| r[..n_size].to_vec()).collect::<Vec<_>>());
    let k_size = config.k_size.clamp(1, n);
    let level1 = kmeans(&size_points, k_size, config.seed, config.restarts)?;
    let size_silhouette = if k_size >= 2 && k_size < n {
        silhouette(&size_points, &level1.labels).ok()
    } else {
        None
    };
    let raw_size: Vec<Vec<f64>> = raw.iter().map(|r| r[..n_size].to_vec()).collect();
    let size_centroids = means(&raw_size.iter().collect::<Vec<_>>(), &level1.labels, k_size);

    // level 2
    let mut sub_cluster = vec![0; n];
    let mut sub_clusters = Vec::with_capacity(k_size);
    for cluster in 0..k_size {
        let members: Vec<usize> = (0..n).filter(|&i| level1.labels[i] == cluster).collect();
        let raw_rows: Vec<Vec<f64>> = members.iter().map(|&i| raw[i][n_size..].to_vec()).collect();
        let mut summary = SubClusterSummary {
            size_cluster: cluster,
            members: members.len(),
            k: 1,
            silhouette: None,
            candidates: Vec::new(),
            centroids: vec![],
        };
        if members.len() <= k_lo || structure_refs.is_empty() {
            summary.centroids = means(&raw_rows.iter().collect::<Vec<_>>(), &vec![0; members.len()], 1);
            sub_clusters.push(summary);
            continue;
        }
        let points = standardize_dense(
            &members
                .iter()
                .map(|&i| dense[i][n_size..].to_vec())
                .collect::<Vec<_>>(),
        );
        let seed = config.seed.wrapping_add(1 + cluster as u64);
        let mut best: Option<(usize, f64, Vec<usize>)> = None;
        for k in k_lo..=k_hi.min(members.len() - 1) {
            let res = kmeans(&points, k, seed, config.restarts)?;
            let Ok(s) = silhouette(&points, &res.labels) else {
                continue;
            };
            summary.candidates.push((k, s));
            if best.as_ref().is_none_or(|b| s > b.1) {
                best = Some((k, s, res.labels));
            }
        }
        match best {
            Some((k, s, labels)) => {
                for (&i, &l) in members.iter().zip(&labels) {
                    sub_cluster[i] = l;
                }
                summary.k = k;
                summary.silhouette = Some(s);
                summary.centroids = means(&raw_rows.iter().collect::<Vec<_>>(), &labels, k);
            }
            None => {
                summary.centroids = means(&raw_rows.iter().collect::<Vec<_>>(), &vec![0; members.len()], 1);
            }
        }
        sub_clusters.push(summary);
    }

    Ok(ClusterAssignment {
        names: t.names.clone(),
        size_cluster: level1.labels,
        sub_cluster,
        k_size,
        size_silhouette,
        size_columns: config.size_columns.clone(),
        structure_columns: structure_cols,
        size_centroids,
        sub_clusters,
        imputed,
        seed: config.seed,
    })
}

impl ClusterAssignment {
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["name", "size_cluster", "sub_cluster"])?;
        for i in 0..self.names.len() {
            w.write_record([
                self.names[i].clone(),
                self.size_cluster[i].to_string(),
                self.sub_cluster[i].to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}
