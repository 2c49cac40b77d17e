//! Bypass-link management and the partition-bridging experiments.
//!
//! A bypass link joins two nodes that are out of each other's transmission
//! range; its endpoints are the injection points where remote traffic enters
//! a partition. The experiments here place such links across a two-partition
//! scenario: one reassigned link measured over many trials, and a growing
//! set of distinct links measured after every addition.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::construction::PartitionScenario;
use crate::graph::{EdgeKind, GraphError, NodeId, SpatialGraph};
use crate::harness::{seed_for, STREAM_BYPASS_PAIRS};
use crate::metrics::{MetricsError, MetricsRecord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BypassError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("no cross-partition pair left to sample")]
    PairSpaceExhausted,
    #[error("requested {requested} bypass links but only {available} distinct cross pairs exist")]
    NotEnoughPairs { requested: usize, available: usize },
    #[error("trials must be at least 1")]
    NoTrials,
}

/// Endpoints of at least one bypass link.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InjectionPointSet(BTreeSet<NodeId>);

impl InjectionPointSet {
    pub fn contains(&self, v: NodeId) -> bool {
        self.0.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0.iter().copied()
    }

    pub fn into_inner(self) -> BTreeSet<NodeId> {
        self.0
    }
}

/// Exactly the endpoints of bypass edges.
pub fn injection_points(g: &SpatialGraph) -> InjectionPointSet {
    let mut set = BTreeSet::new();
    for (u, v, kind) in g.edges() {
        if kind == EdgeKind::Bypass {
            set.insert(u);
            set.insert(v);
        }
    }
    InjectionPointSet(set)
}

/// How the injection-point pair for the next bypass link is chosen. The
/// uniform-random selection is the only built-in; the trait is the seam for
/// locally informed heuristics.
pub trait PairSelection {
    fn name(&self) -> &'static str;

    /// Picks a cross-partition pair (left id, right id) outside `exclude`.
    fn select(
        &self,
        scenario: &PartitionScenario,
        exclude: &BTreeSet<(NodeId, NodeId)>,
        rng: &mut dyn RngCore,
    ) -> Result<(NodeId, NodeId), BypassError>;
}

/// Uniform choice over the remaining cross-partition pairs.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformRandom;

impl PairSelection for UniformRandom {
    fn name(&self) -> &'static str {
        "uniform-random"
    }

    fn select(
        &self,
        scenario: &PartitionScenario,
        exclude: &BTreeSet<(NodeId, NodeId)>,
        rng: &mut dyn RngCore,
    ) -> Result<(NodeId, NodeId), BypassError> {
        sample_bypass_pair(scenario, rng, exclude)
    }
}

/// Uniformly random unordered cross-partition pair outside `exclude`.
/// Enumerates the remaining pairs in ascending order and indexes uniformly,
/// so every remaining pair has exactly the same probability.
pub fn sample_bypass_pair<R: Rng + ?Sized>(
    scenario: &PartitionScenario,
    rng: &mut R,
    exclude: &BTreeSet<(NodeId, NodeId)>,
) -> Result<(NodeId, NodeId), BypassError> {
    let mut candidates = Vec::with_capacity(scenario.cross_pair_count() - exclude.len());
    for u in scenario.left_ids() {
        for v in scenario.right_ids() {
            if !exclude.contains(&(u, v)) {
                candidates.push((u, v));
            }
        }
    }
    if candidates.is_empty() {
        return Err(BypassError::PairSpaceExhausted);
    }
    Ok(candidates[rng.gen_range(0..candidates.len())])
}

/// One measured single-link placement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub u: NodeId,
    pub v: NodeId,
    pub metrics: MetricsRecord,
}

/// One measured growth step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRecord {
    /// Number of bypass links present at measurement.
    pub b: usize,
    pub metrics: MetricsRecord,
}

fn place_measure_remove(
    g: &mut SpatialGraph,
    u: NodeId,
    v: NodeId,
) -> Result<MetricsRecord, BypassError> {
    g.add_edge(u, v, EdgeKind::Bypass)?;
    let metrics = MetricsRecord::measure(g);
    g.remove_edge(u, v)?;
    Ok(metrics?)
}

/// Replays one trial of the single-link experiment from its derived seed.
pub fn single_link_trial(
    scenario: &PartitionScenario,
    master_seed: u64,
    trial: usize,
) -> Result<TrialRecord, BypassError> {
    let mut g = scenario.combined();
    single_link_trial_on(&mut g, scenario, master_seed, trial, &UniformRandom)
}

fn single_link_trial_on(
    g: &mut SpatialGraph,
    scenario: &PartitionScenario,
    master_seed: u64,
    trial: usize,
    strategy: &dyn PairSelection,
) -> Result<TrialRecord, BypassError> {
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed_for(master_seed, STREAM_BYPASS_PAIRS, trial as u64));
    let (u, v) = strategy.select(scenario, &BTreeSet::new(), &mut rng)?;
    let metrics = place_measure_remove(g, u, v)?;
    Ok(TrialRecord {
        trial,
        u,
        v,
        metrics,
    })
}

/// Per trial: place one bypass link at a sampled cross pair, measure L and γ
/// on the joined graph, remove the link. Each trial draws from its own
/// derived seed, so any row replays in isolation.
pub fn experiment_single_link(
    scenario: &PartitionScenario,
    trials: usize,
    master_seed: u64,
) -> Result<Vec<TrialRecord>, BypassError> {
    experiment_single_link_with(scenario, trials, master_seed, &UniformRandom)
}

pub fn experiment_single_link_with(
    scenario: &PartitionScenario,
    trials: usize,
    master_seed: u64,
    strategy: &dyn PairSelection,
) -> Result<Vec<TrialRecord>, BypassError> {
    if trials == 0 {
        return Err(BypassError::NoTrials);
    }
    let mut g = scenario.combined();
    let mut records = Vec::with_capacity(trials);
    for trial in 0..trials {
        records.push(single_link_trial_on(
            &mut g,
            scenario,
            master_seed,
            trial,
            strategy,
        )?);
        debug_assert_eq!(g.bypass_edge_count(), 0);
    }
    Ok(records)
}

/// Adds bypass links one at a time at distinct sampled cross pairs and
/// records the metrics after each addition, for b = 1..=b_max. Step b draws
/// from seed_for(master_seed, pair stream, b − 1), which makes a b_max = 1
/// run identical to trial 0 of the single-link experiment.
pub fn experiment_multi_link(
    scenario: &PartitionScenario,
    b_max: usize,
    master_seed: u64,
) -> Result<Vec<GrowthRecord>, BypassError> {
    experiment_multi_link_with(scenario, b_max, master_seed, &UniformRandom)
}

pub fn experiment_multi_link_with(
    scenario: &PartitionScenario,
    b_max: usize,
    master_seed: u64,
    strategy: &dyn PairSelection,
) -> Result<Vec<GrowthRecord>, BypassError> {
    let available = scenario.cross_pair_count();
    if b_max == 0 || b_max > available {
        return Err(BypassError::NotEnoughPairs {
            requested: b_max,
            available,
        });
    }
    let mut g = scenario.combined();
    let mut exclude: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    let mut records = Vec::with_capacity(b_max);
    for b in 1..=b_max {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed_for(master_seed, STREAM_BYPASS_PAIRS, (b - 1) as u64));
        let (u, v) = strategy.select(scenario, &exclude, &mut rng)?;
        exclude.insert((u, v));
        g.add_edge(u, v, EdgeKind::Bypass)?;
        records.push(GrowthRecord {
            b,
            metrics: MetricsRecord::measure(&g)?,
        });
        debug_assert_eq!(g.bypass_edge_count(), b);
    }
    Ok(records)
}

/// A candidate placement with the path length it achieves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementScore {
    pub u: NodeId,
    pub v: NodeId,
    pub l: f64,
}

/// Extremes of the placement quality landscape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestWorst {
    pub best: PlacementScore,
    pub worst: PlacementScore,
}

/// Which placements best_worst_pairs evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlacementSelection {
    /// Every cross-partition pair.
    Exhaustive,
    /// A uniform sample of distinct cross pairs.
    Sample { size: usize, master_seed: u64 },
}

/// Evaluates L for candidate single-link placements and returns the argmin
/// and argmax placements. Ties break toward the smallest (u, v) pair.
pub fn best_worst_pairs(
    scenario: &PartitionScenario,
    selection: PlacementSelection,
) -> Result<BestWorst, BypassError> {
    let candidates: Vec<(NodeId, NodeId)> = match selection {
        PlacementSelection::Exhaustive => scenario
            .left_ids()
            .flat_map(|u| scenario.right_ids().map(move |v| (u, v)))
            .collect(),
        PlacementSelection::Sample { size, master_seed } => {
            let available = scenario.cross_pair_count();
            if size == 0 || size > available {
                return Err(BypassError::NotEnoughPairs {
                    requested: size,
                    available,
                });
            }
            let mut exclude = BTreeSet::new();
            let mut picked = Vec::with_capacity(size);
            for i in 0..size {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(seed_for(master_seed, STREAM_BYPASS_PAIRS, i as u64));
                let pair = sample_bypass_pair(scenario, &mut rng, &exclude)?;
                exclude.insert(pair);
                picked.push(pair);
            }
            picked
        }
    };

    let mut g = scenario.combined();
    let mut best: Option<PlacementScore> = None;
    let mut worst: Option<PlacementScore> = None;
    for (u, v) in candidates {
        let metrics = place_measure_remove(&mut g, u, v)?;
        let score = PlacementScore { u, v, l: metrics.l };
        let better = |incumbent: &PlacementScore| {
            score.l < incumbent.l
                || (score.l == incumbent.l && (score.u, score.v) < (incumbent.u, incumbent.v))
        };
        let worse = |incumbent: &PlacementScore| {
            score.l > incumbent.l
                || (score.l == incumbent.l && (score.u, score.v) < (incumbent.u, incumbent.v))
        };
        if best.as_ref().is_none_or(better) {
            best = Some(score);
        }
        if worst.as_ref().is_none_or(worse) {
            worst = Some(score);
        }
    }
    Ok(BestWorst {
        best: best.expect("at least one candidate"),
        worst: worst.expect("at least one candidate"),
    })
}
