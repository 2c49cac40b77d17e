//! Small-world metrics and random-graph baselines.
//!
//! The clustering coefficient γ is the mean over nodes of the fraction of
//! realized edges among each node's neighbors. The characteristic path
//! length L is the median over nodes of each node's mean hop distance to all
//! others; it is only defined for connected graphs. A graph counts as a
//! small world when γ clearly dominates the random-graph baseline k/n while
//! L stays close to the random-graph baseline ln(n)/ln(k).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, NodeId, SpatialGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("characteristic path length is only defined for connected graphs")]
    Disconnected,
    #[error("metric requires at least {required} nodes, graph has {actual}")]
    TooFewNodes { required: usize, actual: usize },
    #[error("random baseline requires n > 0")]
    ZeroNodes,
    #[error("l_random is undefined for average degree k ≤ 1 (got {0})")]
    DegreeTooSmall(f64),
    #[error("verdict thresholds require alpha > 1 and beta ≥ 1 (got alpha={alpha}, beta={beta})")]
    InvalidThresholds { alpha: f64, beta: f64 },
}

/// How the median behind the characteristic path length is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PathLengthMode {
    /// Median over nodes of the per-node mean distance (default).
    #[default]
    PerNodeMeanMedian,
    /// Median over all n(n−1)/2 pairwise distances.
    PairwiseMedian,
}

impl PathLengthMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PathLengthMode::PerNodeMeanMedian => "per-node-mean",
            PathLengthMode::PairwiseMedian => "pairwise-median",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "per-node-mean" => Some(PathLengthMode::PerNodeMeanMedian),
            "pairwise-median" => Some(PathLengthMode::PairwiseMedian),
            _ => None,
        }
    }
}

/// Whether nodes of degree ≤ 1 enter the clustering average (as 0) or are
/// left out entirely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ClusteringMode {
    /// Count degree-≤1 nodes as γ_v = 0 (default).
    #[default]
    IncludeLowDegree,
    /// Average only over nodes of degree ≥ 2.
    ExcludeLowDegree,
}

/// Metrics snapshot of one graph configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    /// Node count.
    pub n: usize,
    /// Average degree over both edge kinds.
    pub k: f64,
    /// Clustering coefficient in [0, 1].
    pub gamma: f64,
    /// Characteristic path length in hops.
    pub l: f64,
    /// Optional normalized path length in (0, 1], filled in by the harness.
    pub l_norm: Option<f64>,
}

impl MetricsRecord {
    /// Measures n, k, γ and L on a connected graph.
    pub fn measure(g: &SpatialGraph) -> Result<MetricsRecord, MetricsError> {
        Ok(MetricsRecord {
            n: g.node_count(),
            k: g.average_degree()?,
            gamma: clustering_coefficient(g)?,
            l: characteristic_path_length(g)?,
            l_norm: None,
        })
    }
}

/// Fraction of realized edges (either kind) among the neighbors of `v`:
/// edges-among-neighbors / (k_v(k_v−1)/2). Nodes of degree ≤ 1 yield 0.
pub fn local_clustering(g: &SpatialGraph, v: NodeId) -> Result<f64, MetricsError> {
    let neighbors: Vec<NodeId> = g.neighbors(v)?.map(|(u, _)| u).collect();
    let k = neighbors.len();
    if k <= 1 {
        return Ok(0.0);
    }
    let mut realized = 0usize;
    for (i, &a) in neighbors.iter().enumerate() {
        for &b in &neighbors[i + 1..] {
            if g.has_edge(a, b)? {
                realized += 1;
            }
        }
    }
    let possible = k * (k - 1) / 2;
    Ok(realized as f64 / possible as f64)
}

/// Mean of `local_clustering` over all nodes.
pub fn clustering_coefficient(g: &SpatialGraph) -> Result<f64, MetricsError> {
    clustering_coefficient_with(g, ClusteringMode::IncludeLowDegree)
}

pub fn clustering_coefficient_with(
    g: &SpatialGraph,
    mode: ClusteringMode,
) -> Result<f64, MetricsError> {
    if g.node_count() == 0 {
        return Err(GraphError::EmptyGraph.into());
    }
    let mut total = 0.0;
    let mut counted = 0usize;
    for v in g.node_ids() {
        if mode == ClusteringMode::ExcludeLowDegree && g.degree(v)? <= 1 {
            continue;
        }
        total += local_clustering(g, v)?;
        counted += 1;
    }
    if counted == 0 {
        // ExcludeLowDegree on a graph with no degree-≥2 node.
        return Ok(0.0);
    }
    Ok(total / counted as f64)
}

fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Characteristic path length with the default per-node-mean median.
pub fn characteristic_path_length(g: &SpatialGraph) -> Result<f64, MetricsError> {
    characteristic_path_length_with(g, PathLengthMode::default())
}

pub fn characteristic_path_length_with(
    g: &SpatialGraph,
    mode: PathLengthMode,
) -> Result<f64, MetricsError> {
    let n = g.node_count();
    if n < 2 {
        return Err(MetricsError::TooFewNodes {
            required: 2,
            actual: n,
        });
    }
    let mut per_node_means = Vec::with_capacity(n);
    let mut pairwise = Vec::new();
    for v in g.node_ids() {
        let dist = g.bfs_distances(v)?;
        let mut sum = 0usize;
        for (j, d) in dist.iter().enumerate() {
            let hops = d.ok_or(MetricsError::Disconnected)?;
            sum += hops;
            if mode == PathLengthMode::PairwiseMedian && j > v.index() {
                pairwise.push(hops as f64);
            }
        }
        per_node_means.push(sum as f64 / (n - 1) as f64);
    }
    match mode {
        PathLengthMode::PerNodeMeanMedian => {
            per_node_means.sort_by(f64::total_cmp);
            Ok(median_sorted(&per_node_means))
        }
        PathLengthMode::PairwiseMedian => {
            pairwise.sort_by(f64::total_cmp);
            Ok(median_sorted(&pairwise))
        }
    }
}

/// Clustering coefficient of a comparable random graph: k/n.
pub fn gamma_random(n: usize, k: f64) -> Result<f64, MetricsError> {
    if n == 0 {
        return Err(MetricsError::ZeroNodes);
    }
    Ok(k / n as f64)
}

/// Characteristic path length of a comparable random graph, approximated as
/// ln(n)/ln(k). The approximation is standard for sparse random graphs with
/// k ≪ n and is undefined for k ≤ 1.
pub fn l_random(n: usize, k: f64) -> Result<f64, MetricsError> {
    if n < 2 {
        return Err(MetricsError::TooFewNodes {
            required: 2,
            actual: n,
        });
    }
    if k <= 1.0 {
        return Err(MetricsError::DegreeTooSmall(k));
    }
    Ok((n as f64).ln() / k.ln())
}

/// Outcome of the small-world check: γ ≥ alpha·(k/n) while L ≤ beta·ln(n)/ln(k).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallWorldAssessment {
    pub small_world: bool,
    pub record: MetricsRecord,
    pub gamma_random: f64,
    pub l_random: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Evaluates the small-world criterion on a connected graph.
pub fn small_world_verdict(
    g: &SpatialGraph,
    alpha: f64,
    beta: f64,
) -> Result<SmallWorldAssessment, MetricsError> {
    if !alpha.is_finite() || alpha <= 1.0 || !beta.is_finite() || beta < 1.0 {
        return Err(MetricsError::InvalidThresholds { alpha, beta });
    }
    let record = MetricsRecord::measure(g)?;
    let gamma_rand = gamma_random(record.n, record.k)?;
    let l_rand = l_random(record.n, record.k)?;
    let small_world = record.gamma >= alpha * gamma_rand && record.l <= beta * l_rand;
    Ok(SmallWorldAssessment {
        small_world,
        record,
        gamma_random: gamma_rand,
        l_random: l_rand,
        alpha,
        beta,
    })
}
