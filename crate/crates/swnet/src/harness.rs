//! Seeded experiment orchestration, aggregation and series assembly.
//!
//! All randomness flows from one master seed through [`seed_for`], a fixed
//! splitmix64-based mix, into per-trial ChaCha8 generators. Every row of an
//! experiment can therefore be regenerated in isolation, and a whole run is
//! reproducible byte for byte.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bypass::{self, BypassError, PairSelection};
use crate::construction::{
    build_partition_pair, construct_family, ConstructionError, LatticeSpec, PartitionScenario,
};
use crate::defaults;
use crate::graph::NodeId;
use crate::metrics::{MetricsError, MetricsRecord};

/// Identifier of the frozen generator algorithm, recorded in every config
/// snapshot.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Stream index used when deriving the two partition-build seeds
/// (trial 0 = left partition, trial 1 = right partition).
pub const STREAM_PARTITION_BUILD: u64 = 1_000_001;

/// Stream index for bypass pair sampling. Experiment 2 uses trial indices,
/// experiment 3 uses b − 1, so a 1-link growth run reproduces trial 0.
pub const STREAM_BYPASS_PAIRS: u64 = 1_000_002;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit seed for one (stream, trial) cell under a master seed.
/// Identical inputs give identical output on every platform.
pub fn seed_for(master_seed: u64, stream_index: u64, trial_index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master_seed) ^ stream_index) ^ trial_index)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Bypass(#[from] BypassError),
    #[error("aggregation over an empty record list")]
    EmptyInput,
    #[error("series values must be finite and non-negative, got {0}")]
    InvalidValue(f64),
    #[error("normalization reference must be positive, got {0}")]
    NonPositiveReference(f64),
}

/// Order statistics of one metric across records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
}

/// Min, max, mean and median; the median of an even count is the mean of the
/// two central values.
pub fn aggregate(values: &[f64]) -> Result<Aggregate, HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::EmptyInput);
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(HarnessError::InvalidValue(bad));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    Ok(Aggregate {
        min: sorted[0],
        max: sorted[n - 1],
        mean: values.iter().sum::<f64>() / n as f64,
        median,
    })
}

/// Normalization reference for a series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Reference {
    /// Divide by the maximum of the series itself, mapping the peak to 1.
    SeriesMax,
    /// Divide by an explicit constant.
    Fixed(f64),
}

/// Divides every value by the reference. Values must be finite and
/// non-negative; the reference must be positive.
pub fn normalize_series(values: &[f64], reference: Reference) -> Result<Vec<f64>, HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::EmptyInput);
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(HarnessError::InvalidValue(bad));
    }
    let r = match reference {
        Reference::SeriesMax => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        Reference::Fixed(r) => r,
    };
    if !r.is_finite() || r <= 0.0 {
        return Err(HarnessError::NonPositiveReference(r));
    }
    Ok(values.iter().map(|v| v / r).collect())
}

/// What the series is swept over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepKey {
    P,
    Trial,
    B,
}

impl SweepKey {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepKey::P => "p",
            SweepKey::Trial => "trial",
            SweepKey::B => "b",
        }
    }
}

/// One row of an experiment series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    /// Sweep key value (p, trial index, or bypass count).
    pub key: f64,
    /// Seed governing this row's own random draw; for aggregated rows the
    /// master seed (per-run seeds derive from it and the row position).
    pub seed: u64,
    /// Injection-point pair, for single-link trials.
    pub pair: Option<(NodeId, NodeId)>,
    pub record: MetricsRecord,
    /// Normalized clustering coefficient, for max-normalized sweeps.
    pub gamma_norm: Option<f64>,
}

/// Everything needed to reproduce an experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub experiment: String,
    pub rng_algorithm: String,
    pub master_seed: u64,
    pub lattice_rows: usize,
    pub lattice_cols: usize,
    pub spacing: f64,
    pub tr: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_ref: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
}

/// Ordered series of one experiment, with its replay information.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSeries {
    pub sweep_key: SweepKey,
    pub rows: Vec<SeriesRow>,
    pub master_seed: u64,
    pub config: ConfigSnapshot,
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

impl ExperimentSeries {
    /// Renders the series as CSV. The schema follows the sweep key:
    /// `p,L_mean,gamma_mean,L_norm,gamma_norm` for probability sweeps,
    /// `trial,u,v,L,L_norm,gamma,k` for single-link trials and
    /// `b,L,L_norm,gamma,k` for growth runs.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self.sweep_key {
            SweepKey::P => {
                out.push_str("p,L_mean,gamma_mean,L_norm,gamma_norm\n");
                for row in &self.rows {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        fmt_f64(row.key),
                        fmt_f64(row.record.l),
                        fmt_f64(row.record.gamma),
                        fmt_f64(row.record.l_norm.unwrap_or(f64::NAN)),
                        fmt_f64(row.gamma_norm.unwrap_or(f64::NAN)),
                    ));
                }
            }
            SweepKey::Trial => {
                out.push_str("trial,u,v,L,L_norm,gamma,k\n");
                for row in &self.rows {
                    let (u, v) = row.pair.expect("trial rows carry an injection pair");
                    out.push_str(&format!(
                        "{},{u},{v},{},{},{},{}\n",
                        fmt_f64(row.key),
                        fmt_f64(row.record.l),
                        fmt_f64(row.record.l_norm.unwrap_or(f64::NAN)),
                        fmt_f64(row.record.gamma),
                        fmt_f64(row.record.k),
                    ));
                }
            }
            SweepKey::B => {
                out.push_str("b,L,L_norm,gamma,k\n");
                for row in &self.rows {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        fmt_f64(row.key),
                        fmt_f64(row.record.l),
                        fmt_f64(row.record.l_norm.unwrap_or(f64::NAN)),
                        fmt_f64(row.record.gamma),
                        fmt_f64(row.record.k),
                    ));
                }
            }
        }
        out
    }
}

/// Evenly spaced probabilities in [0, 1] including both endpoints.
pub fn even_p_values(steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..steps).map(|j| j as f64 / (steps - 1) as f64).collect(),
    }
}

/// Parameters of the probability sweep (experiment 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Exp1Params {
    pub spec: LatticeSpec,
    pub tr: f64,
    pub p_values: Vec<f64>,
    pub runs: usize,
}

impl Exp1Params {
    pub fn default_sweep() -> Exp1Params {
        Exp1Params {
            spec: LatticeSpec::new(
                defaults::LATTICE_ROWS,
                defaults::LATTICE_COLS,
                defaults::LATTICE_SPACING,
            )
            .expect("default lattice spec is valid"),
            tr: defaults::TRANSMISSION_RANGE,
            p_values: even_p_values(defaults::P_STEPS),
            runs: defaults::SWEEP_RUNS,
        }
    }
}

/// Parameters of the two-partition scenario (experiments 2 and 3).
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    pub spec: LatticeSpec,
    pub tr: f64,
    pub gap: f64,
}

impl ScenarioParams {
    pub fn default_partitions() -> ScenarioParams {
        ScenarioParams {
            spec: LatticeSpec::new(
                defaults::PARTITION_ROWS,
                defaults::PARTITION_COLS,
                defaults::PARTITION_SPACING,
            )
            .expect("default partition spec is valid"),
            tr: defaults::TRANSMISSION_RANGE,
            gap: defaults::PARTITION_GAP,
        }
    }

    pub fn build(&self, master_seed: u64) -> Result<PartitionScenario, ConstructionError> {
        build_partition_pair(&self.spec, self.tr, self.gap, master_seed)
    }
}

/// One raw measurement of the probability sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exp1Run {
    pub p: f64,
    pub p_index: usize,
    pub run: usize,
    pub seed: u64,
    pub l: f64,
    pub gamma: f64,
    pub k: f64,
}

/// Raw per-run rows plus the aggregated, max-normalized series.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment1Result {
    pub raw: Vec<Exp1Run>,
    pub series: ExperimentSeries,
}

impl Experiment1Result {
    /// Raw CSV: `p,run,L,gamma,k`, one row per (p, run).
    pub fn runs_csv(&self) -> String {
        let mut out = String::from("p,run,L,gamma,k\n");
        for r in &self.raw {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_f64(r.p),
                r.run,
                fmt_f64(r.l),
                fmt_f64(r.gamma),
                fmt_f64(r.k),
            ));
        }
        out
    }

    /// Aggregate CSV: `p,L_mean,gamma_mean,L_norm,gamma_norm`.
    pub fn aggregate_csv(&self) -> String {
        self.series.to_csv()
    }
}

/// Runs the probability sweep: per p, the lattice is rebuilt and relocated
/// `runs` times; mean L and mean γ per p are then normalized by their own
/// maxima over the sweep.
pub fn run_experiment1(
    params: &Exp1Params,
    master_seed: u64,
) -> Result<Experiment1Result, HarnessError> {
    let members = construct_family(
        &params.spec,
        params.tr,
        &params.p_values,
        params.runs,
        master_seed,
    )?;
    let mut raw = Vec::with_capacity(members.len());
    for m in &members {
        let record = MetricsRecord::measure(&m.graph)?;
        raw.push(Exp1Run {
            p: m.p,
            p_index: m.p_index,
            run: m.run,
            seed: m.seed,
            l: record.l,
            gamma: record.gamma,
            k: record.k,
        });
    }

    let mut l_means = Vec::with_capacity(params.p_values.len());
    let mut gamma_means = Vec::with_capacity(params.p_values.len());
    let mut k_means = Vec::with_capacity(params.p_values.len());
    for p_index in 0..params.p_values.len() {
        let rows: Vec<&Exp1Run> = raw.iter().filter(|r| r.p_index == p_index).collect();
        let count = rows.len() as f64;
        l_means.push(rows.iter().map(|r| r.l).sum::<f64>() / count);
        gamma_means.push(rows.iter().map(|r| r.gamma).sum::<f64>() / count);
        k_means.push(rows.iter().map(|r| r.k).sum::<f64>() / count);
    }
    let l_norm = normalize_series(&l_means, Reference::SeriesMax)?;
    let gamma_norm = normalize_series(&gamma_means, Reference::SeriesMax)?;

    let rows = params
        .p_values
        .iter()
        .enumerate()
        .map(|(i, &p)| SeriesRow {
            key: p,
            seed: master_seed,
            pair: None,
            record: MetricsRecord {
                n: params.spec.node_count(),
                k: k_means[i],
                gamma: gamma_means[i],
                l: l_means[i],
                l_norm: Some(l_norm[i]),
            },
            gamma_norm: Some(gamma_norm[i]),
        })
        .collect();

    let config = ConfigSnapshot {
        experiment: "exp1".into(),
        rng_algorithm: RNG_ALGORITHM.into(),
        master_seed,
        lattice_rows: params.spec.rows,
        lattice_cols: params.spec.cols,
        spacing: params.spec.spacing,
        tr: params.tr,
        gap: None,
        p_values: Some(params.p_values.clone()),
        runs: Some(params.runs),
        trials: None,
        b_max: None,
        l_ref: None,
        strategy: None,
    };
    Ok(Experiment1Result {
        raw,
        series: ExperimentSeries {
            sweep_key: SweepKey::P,
            rows,
            master_seed,
            config,
        },
    })
}

/// Regenerates a single (p_index, run) cell of the sweep from its derived
/// seed; used to audit that rows replay in isolation.
pub fn replay_exp1_run(
    params: &Exp1Params,
    master_seed: u64,
    p_index: usize,
    run: usize,
) -> Result<Exp1Run, HarnessError> {
    let p = params.p_values[p_index];
    let seed = seed_for(master_seed, p_index as u64, run as u64);
    use rand_chacha::rand_core::SeedableRng;
    let cp = crate::construction::ConstructionParams::for_lattice(&params.spec, params.tr, p)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let graph = crate::construction::relocate_sweep(
        crate::construction::build_lattice(&params.spec, params.tr)?,
        &cp,
        &mut rng,
    )?;
    let record = MetricsRecord::measure(&graph)?;
    Ok(Exp1Run {
        p,
        p_index,
        run,
        seed,
        l: record.l,
        gamma: record.gamma,
        k: record.k,
    })
}

fn attach_l_norm(
    mut records: Vec<MetricsRecord>,
    l_ref: Option<f64>,
) -> Result<Vec<MetricsRecord>, HarnessError> {
    let ls: Vec<f64> = records.iter().map(|r| r.l).collect();
    let reference = match l_ref {
        Some(r) => Reference::Fixed(r),
        None => Reference::SeriesMax,
    };
    let norms = normalize_series(&ls, reference)?;
    for (rec, norm) in records.iter_mut().zip(norms) {
        rec.l_norm = Some(norm);
    }
    Ok(records)
}

/// Runs the single-bypass-link experiment on a freshly built scenario:
/// per trial one cross-partition link is placed, measured and removed.
/// L is normalized by the maximum over the run's own trials, unless an
/// explicit reference is given.
pub fn run_experiment2(
    params: &ScenarioParams,
    trials: usize,
    master_seed: u64,
    l_ref: Option<f64>,
) -> Result<ExperimentSeries, HarnessError> {
    let scenario = params.build(master_seed)?;
    let trial_records = bypass::experiment_single_link(&scenario, trials, master_seed)?;
    let records = attach_l_norm(trial_records.iter().map(|t| t.metrics).collect(), l_ref)?;
    let rows = trial_records
        .iter()
        .zip(records)
        .map(|(t, record)| SeriesRow {
            key: t.trial as f64,
            seed: seed_for(master_seed, STREAM_BYPASS_PAIRS, t.trial as u64),
            pair: Some((t.u, t.v)),
            record,
            gamma_norm: None,
        })
        .collect();
    let config = ConfigSnapshot {
        experiment: "exp2".into(),
        rng_algorithm: RNG_ALGORITHM.into(),
        master_seed,
        lattice_rows: params.spec.rows,
        lattice_cols: params.spec.cols,
        spacing: params.spec.spacing,
        tr: params.tr,
        gap: Some(params.gap),
        p_values: None,
        runs: None,
        trials: Some(trials),
        b_max: None,
        l_ref,
        strategy: Some(bypass::UniformRandom.name().into()),
    };
    Ok(ExperimentSeries {
        sweep_key: SweepKey::Trial,
        rows,
        master_seed,
        config,
    })
}

/// Runs the growth experiment on a freshly built scenario: bypass links are
/// added one at a time at distinct cross pairs, measuring after each.
pub fn run_experiment3(
    params: &ScenarioParams,
    b_max: usize,
    master_seed: u64,
    l_ref: Option<f64>,
) -> Result<ExperimentSeries, HarnessError> {
    let scenario = params.build(master_seed)?;
    let growth = bypass::experiment_multi_link(&scenario, b_max, master_seed)?;
    let records = attach_l_norm(growth.iter().map(|g| g.metrics).collect(), l_ref)?;
    let rows = growth
        .iter()
        .zip(records)
        .map(|(g, record)| SeriesRow {
            key: g.b as f64,
            seed: seed_for(master_seed, STREAM_BYPASS_PAIRS, (g.b - 1) as u64),
            pair: None,
            record,
            gamma_norm: None,
        })
        .collect();
    let config = ConfigSnapshot {
        experiment: "exp3".into(),
        rng_algorithm: RNG_ALGORITHM.into(),
        master_seed,
        lattice_rows: params.spec.rows,
        lattice_cols: params.spec.cols,
        spacing: params.spec.spacing,
        tr: params.tr,
        gap: Some(params.gap),
        p_values: None,
        runs: None,
        trials: None,
        b_max: Some(b_max),
        l_ref,
        strategy: Some(bypass::UniformRandom.name().into()),
    };
    Ok(ExperimentSeries {
        sweep_key: SweepKey::B,
        rows,
        master_seed,
        config,
    })
}
