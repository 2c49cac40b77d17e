//! Lattice-seeded spatial growth construction.
//!
//! A run starts from a regular square lattice with every in-range pair
//! connected (the plain 4-neighbor grid when the spacing exceeds tr/√2),
//! then sweeps the nodes in ascending id order and relocates each one with
//! probability p: the node's spatial links are dropped, a fresh position is
//! drawn uniformly in the field, and the node is connected to everything
//! within transmission range. Positions that leave the node without a
//! neighbor are redrawn (bounded retries); relocations that would disconnect
//! the graph are reverted. The output is therefore always connected, with
//! p = 0 reproducing the lattice and p = 1 producing ad hoc topologies.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeKind, GraphError, NodeId, Point2D, SpatialGraph};
use crate::harness::{seed_for, STREAM_PARTITION_BUILD};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid construction parameter: {0}")]
    InvalidParam(String),
    #[error("relocation requires a connected input graph")]
    DisconnectedInput,
    #[error("partition gap {gap} must exceed the transmission range {tr}")]
    GapTooSmall { gap: f64, tr: f64 },
    #[error("partition scenario invalid: {0}")]
    InvalidScenario(String),
}

/// Axis-aligned rectangle used as the relocation target field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Rect {
    /// A field must be finite, properly ordered, and have positive extent in
    /// at least one axis.
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Result<Rect, ConstructionError> {
        let all_finite = [min_x, min_y, max_x, max_y].iter().all(|v| v.is_finite());
        if !all_finite || max_x < min_x || max_y < min_y {
            return Err(ConstructionError::InvalidParam(format!(
                "malformed field rectangle [{min_x}, {max_x}] x [{min_y}, {max_y}]"
            )));
        }
        if max_x == min_x && max_y == min_y {
            return Err(ConstructionError::InvalidParam(
                "degenerate field rectangle (a single point)".into(),
            ));
        }
        Ok(Rect {
            min_x,
            min_y,
            max_x,
            max_y,
        })
    }

    fn sample_axis<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            lo
        } else {
            rng.gen_range(lo..=hi)
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2D {
        Point2D::new(
            Self::sample_axis(rng, self.min_x, self.max_x),
            Self::sample_axis(rng, self.min_y, self.max_y),
        )
    }
}

/// Shape of the regular square lattice seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub rows: usize,
    pub cols: usize,
    pub spacing: f64,
}

impl LatticeSpec {
    pub fn new(rows: usize, cols: usize, spacing: f64) -> Result<LatticeSpec, ConstructionError> {
        if rows == 0 || cols == 0 {
            return Err(ConstructionError::InvalidParam(
                "lattice needs at least one row and one column".into(),
            ));
        }
        if !spacing.is_finite() || spacing <= 0.0 {
            return Err(ConstructionError::InvalidParam(format!(
                "lattice spacing must be positive, got {spacing}"
            )));
        }
        Ok(LatticeSpec {
            rows,
            cols,
            spacing,
        })
    }

    pub fn node_count(&self) -> usize {
        self.rows * self.cols
    }

    /// Bounding box of the lattice positions; the default relocation field.
    pub fn field(&self) -> Result<Rect, ConstructionError> {
        Rect::new(
            0.0,
            0.0,
            (self.cols - 1) as f64 * self.spacing,
            (self.rows - 1) as f64 * self.spacing,
        )
    }
}

/// Parameters of one relocation sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstructionParams {
    pub p: f64,
    pub tr: f64,
    pub field: Rect,
    pub max_tries: usize,
}

impl ConstructionParams {
    pub fn new(
        p: f64,
        tr: f64,
        field: Rect,
        max_tries: usize,
    ) -> Result<ConstructionParams, ConstructionError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(ConstructionError::InvalidParam(format!(
                "relocation probability must lie in [0, 1], got {p}"
            )));
        }
        if !tr.is_finite() || tr <= 0.0 {
            return Err(ConstructionError::InvalidParam(format!(
                "transmission range must be positive, got {tr}"
            )));
        }
        if max_tries == 0 {
            return Err(ConstructionError::InvalidParam(
                "max_tries must be at least 1".into(),
            ));
        }
        Ok(ConstructionParams {
            p,
            tr,
            field,
            max_tries,
        })
    }

    /// Parameters with the lattice bounding box as the field and the default
    /// retry cap.
    pub fn for_lattice(
        spec: &LatticeSpec,
        tr: f64,
        p: f64,
    ) -> Result<ConstructionParams, ConstructionError> {
        ConstructionParams::new(p, tr, spec.field()?, crate::defaults::MAX_TRIES)
    }
}

/// Builds the lattice seed: node (r, c) sits at (c·spacing, r·spacing) with
/// id r·cols + c, and every in-range pair is joined by a spatial edge. With
/// spacing in (tr/√2, tr] this is exactly the 4-neighbor grid.
pub fn build_lattice(spec: &LatticeSpec, tr: f64) -> Result<SpatialGraph, ConstructionError> {
    if spec.node_count() > 1 && spec.spacing > tr {
        return Err(ConstructionError::InvalidParam(format!(
            "lattice spacing {} exceeds the transmission range {tr}; the seed would have no edges",
            spec.spacing
        )));
    }
    let mut g = SpatialGraph::new(tr)?;
    for r in 0..spec.rows {
        for c in 0..spec.cols {
            g.add_node(Point2D::new(
                c as f64 * spec.spacing,
                r as f64 * spec.spacing,
            ))?;
        }
    }
    let n = g.node_count();
    for i in 0..n {
        for j in (i + 1)..n {
            let (u, v) = (NodeId::new(i), NodeId::new(j));
            if g.euclidean_distance(u, v)? <= tr {
                g.add_edge(u, v, EdgeKind::Spatial)?;
            }
        }
    }
    Ok(g)
}

/// Attempts to relocate one node; the graph is left either relocated and
/// connected, or exactly as before.
fn try_relocate<R: Rng + ?Sized>(
    g: &mut SpatialGraph,
    v: NodeId,
    params: &ConstructionParams,
    rng: &mut R,
) -> Result<(), ConstructionError> {
    let original_position = g.position(v)?;
    let original_spatial: Vec<NodeId> = g
        .neighbors(v)?
        .filter(|&(_, kind)| kind == EdgeKind::Spatial)
        .map(|(u, _)| u)
        .collect();
    for &u in &original_spatial {
        g.remove_edge(v, u)?;
    }

    let mut relocated = false;
    for _ in 0..params.max_tries {
        let candidate = params.field.sample(rng);
        // Incident bypass edges must stay out of range; a candidate that
        // violates that counts as a failed draw.
        if g.set_position(v, candidate).is_err() {
            continue;
        }
        if g.node_count() == 1 {
            relocated = true;
            break;
        }
        let in_range = g.spatial_neighborhood(v)?;
        if in_range.is_empty() {
            continue;
        }
        for &u in &in_range {
            g.add_edge(v, u, EdgeKind::Spatial)?;
        }
        if g.is_connected()? {
            relocated = true;
        } else {
            for &u in &in_range {
                g.remove_edge(v, u)?;
            }
        }
        // Whether accepted or reverted-for-disconnection, stop drawing.
        break;
    }

    if !relocated {
        // Restoring the original placement always satisfies the invariants.
        g.set_position(v, original_position)?;
        for &u in &original_spatial {
            g.add_edge(v, u, EdgeKind::Spatial)?;
        }
    }
    Ok(())
}

/// One relocation sweep over all nodes in ascending id order. The input must
/// be connected; the output always is.
pub fn relocate_sweep<R: Rng + ?Sized>(
    mut g: SpatialGraph,
    params: &ConstructionParams,
    rng: &mut R,
) -> Result<SpatialGraph, ConstructionError> {
    match g.is_connected() {
        Ok(true) => {}
        Ok(false) => return Err(ConstructionError::DisconnectedInput),
        Err(e) => return Err(e.into()),
    }
    for v in 0..g.node_count() {
        if rng.gen::<f64>() < params.p {
            try_relocate(&mut g, NodeId::new(v), params, rng)?;
        }
    }
    debug_assert!(g.is_connected().unwrap_or(false));
    Ok(g)
}

/// One member of a construction family.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub p: f64,
    pub p_index: usize,
    pub run: usize,
    pub seed: u64,
    pub graph: SpatialGraph,
}

/// Rebuilds the lattice and applies one seeded sweep per (p, run) pair.
/// The per-trial seed is seed_for(master_seed, p_index, run), so any member
/// can be regenerated in isolation.
pub fn construct_family(
    spec: &LatticeSpec,
    tr: f64,
    p_values: &[f64],
    runs: usize,
    master_seed: u64,
) -> Result<Vec<FamilyMember>, ConstructionError> {
    if runs == 0 {
        return Err(ConstructionError::InvalidParam(
            "runs must be at least 1".into(),
        ));
    }
    let mut members = Vec::with_capacity(p_values.len() * runs);
    for (p_index, &p) in p_values.iter().enumerate() {
        let params = ConstructionParams::for_lattice(spec, tr, p)?;
        for run in 0..runs {
            let seed = seed_for(master_seed, p_index as u64, run as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let graph = relocate_sweep(build_lattice(spec, tr)?, &params, &mut rng)?;
            members.push(FamilyMember {
                p,
                p_index,
                run,
                seed,
                graph,
            });
        }
    }
    Ok(members)
}

/// Two fully randomized partitions separated by more than the transmission
/// range, so every cross link necessarily qualifies as a bypass link.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionScenario {
    left: SpatialGraph,
    right: SpatialGraph,
    gap: f64,
}

impl PartitionScenario {
    /// Validates and assembles a scenario from prebuilt partitions. The
    /// right partition's coordinates must already be translated.
    pub fn from_parts(
        left: SpatialGraph,
        right: SpatialGraph,
        gap: f64,
    ) -> Result<PartitionScenario, ConstructionError> {
        let tr = left.tr();
        if right.tr() != tr {
            return Err(ConstructionError::InvalidScenario(
                "partitions must share one transmission range".into(),
            ));
        }
        if !gap.is_finite() || gap <= tr {
            return Err(ConstructionError::GapTooSmall { gap, tr });
        }
        if !left.is_connected()? || !right.is_connected()? {
            return Err(ConstructionError::InvalidScenario(
                "each partition must be connected".into(),
            ));
        }
        for u in left.node_ids() {
            let pu = left.position(u)?;
            for v in right.node_ids() {
                if pu.distance(right.position(v)?) <= tr {
                    return Err(ConstructionError::InvalidScenario(format!(
                        "left node {u} is within transmission range of right node {v}"
                    )));
                }
            }
        }
        Ok(PartitionScenario { left, right, gap })
    }

    pub fn left(&self) -> &SpatialGraph {
        &self.left
    }

    pub fn right(&self) -> &SpatialGraph {
        &self.right
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn tr(&self) -> f64 {
        self.left.tr()
    }

    /// Node ids of the left partition in the combined graph.
    pub fn left_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.left.node_count()).map(NodeId::new)
    }

    /// Node ids of the right partition in the combined graph.
    pub fn right_ids(&self) -> impl Iterator<Item = NodeId> {
        let offset = self.left.node_count();
        (offset..offset + self.right.node_count()).map(NodeId::new)
    }

    pub fn node_count(&self) -> usize {
        self.left.node_count() + self.right.node_count()
    }

    /// Number of distinct cross-partition pairs.
    pub fn cross_pair_count(&self) -> usize {
        self.left.node_count() * self.right.node_count()
    }

    /// The two partitions as one graph: left nodes keep their ids, right
    /// nodes are offset by the left node count. No cross edges exist.
    pub fn combined(&self) -> SpatialGraph {
        let mut g = SpatialGraph::new(self.tr()).expect("tr validated at construction");
        for v in self.left.node_ids() {
            g.add_node(self.left.position(v).expect("valid id"))
                .expect("finite position");
        }
        for v in self.right.node_ids() {
            g.add_node(self.right.position(v).expect("valid id"))
                .expect("finite position");
        }
        let offset = self.left.node_count();
        for (u, v, kind) in self.left.edges() {
            g.add_edge(u, v, kind).expect("edge valid in partition");
        }
        for (u, v, kind) in self.right.edges() {
            g.add_edge(
                NodeId::new(u.index() + offset),
                NodeId::new(v.index() + offset),
                kind,
            )
            .expect("edge valid in partition");
        }
        g
    }
}

fn bounding_x(g: &SpatialGraph) -> Result<(f64, f64), ConstructionError> {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in g.node_ids() {
        let p = g.position(v)?;
        min = min.min(p.x);
        max = max.max(p.x);
    }
    Ok((min, max))
}

/// Builds two independent p = 1 family members and places them side by side
/// with a horizontal gap between their bounding boxes. Seeds derive from the
/// master seed (trial 0 = left partition, trial 1 = right partition).
pub fn build_partition_pair(
    spec: &LatticeSpec,
    tr: f64,
    gap: f64,
    master_seed: u64,
) -> Result<PartitionScenario, ConstructionError> {
    if !(gap.is_finite() && gap > tr) {
        return Err(ConstructionError::GapTooSmall { gap, tr });
    }
    let params = ConstructionParams::for_lattice(spec, tr, 1.0)?;
    let build = |trial: u64| -> Result<SpatialGraph, ConstructionError> {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed_for(master_seed, STREAM_PARTITION_BUILD, trial));
        relocate_sweep(build_lattice(spec, tr)?, &params, &mut rng)
    };
    let left = build(0)?;
    let mut right = build(1)?;

    let (_, left_max_x) = bounding_x(&left)?;
    let (right_min_x, _) = bounding_x(&right)?;
    right.translate(left_max_x + gap - right_min_x, 0.0)?;
    PartitionScenario::from_parts(left, right, gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::write_graph_string;

    #[test]
    fn lattice_1x3_is_a_path() {
        let spec = LatticeSpec::new(1, 3, 36.0).unwrap();
        let g = build_lattice(&spec, 50.0).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degree(NodeId::new(1)).unwrap(), 2);
    }

    #[test]
    fn lattice_2x2_is_a_cycle() {
        let spec = LatticeSpec::new(2, 2, 36.0).unwrap();
        let g = build_lattice(&spec, 50.0).unwrap();
        assert_eq!(g.edge_count(), 4);
        for v in g.node_ids() {
            assert_eq!(g.degree(v).unwrap(), 2);
        }
    }

    #[test]
    fn lattice_10x10_degree_profile() {
        let spec = LatticeSpec::new(10, 10, 36.0).unwrap();
        let g = build_lattice(&spec, 50.0).unwrap();
        assert_eq!(g.node_count(), 100);
        assert_eq!(g.edge_count(), 180);
        // Corner (0,0) has degree 2, interior (5,5) degree 4.
        assert_eq!(g.degree(NodeId::new(0)).unwrap(), 2);
        assert_eq!(g.degree(NodeId::new(55)).unwrap(), 4);
        // Node (r, c) sits at (c*s, r*s) with id r*cols + c.
        assert_eq!(
            g.position(NodeId::new(23)).unwrap(),
            Point2D::new(3.0 * 36.0, 2.0 * 36.0)
        );
    }

    #[test]
    fn lattice_rejects_spacing_beyond_range() {
        let spec = LatticeSpec::new(2, 2, 60.0).unwrap();
        assert!(matches!(
            build_lattice(&spec, 50.0),
            Err(ConstructionError::InvalidParam(_))
        ));
    }

    #[test]
    fn sweep_p0_is_identity() {
        let spec = LatticeSpec::new(4, 5, 36.0).unwrap();
        let g = build_lattice(&spec, 50.0).unwrap();
        let params = ConstructionParams::for_lattice(&spec, 50.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let out = relocate_sweep(g.clone(), &params, &mut rng).unwrap();
        assert_eq!(out, g);
    }

    #[test]
    fn sweep_p1_stays_connected_with_min_degree() {
        let spec = LatticeSpec::new(5, 5, 36.0).unwrap();
        for seed in 0..10 {
            let g = build_lattice(&spec, 50.0).unwrap();
            let params = ConstructionParams::for_lattice(&spec, 50.0, 1.0).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let out = relocate_sweep(g, &params, &mut rng).unwrap();
            assert!(out.is_connected().unwrap());
            for v in out.node_ids() {
                assert!(out.degree(v).unwrap() >= 1, "seed {seed}, node {v}");
            }
            assert_eq!(out.bypass_edge_count(), 0);
        }
    }

    #[test]
    fn sweep_rejects_disconnected_input() {
        let mut g = SpatialGraph::new(50.0).unwrap();
        g.add_node(Point2D::new(0.0, 0.0)).unwrap();
        g.add_node(Point2D::new(200.0, 0.0)).unwrap();
        let params =
            ConstructionParams::new(1.0, 50.0, Rect::new(0.0, 0.0, 200.0, 1.0).unwrap(), 10)
                .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            relocate_sweep(g, &params, &mut rng),
            Err(ConstructionError::DisconnectedInput)
        );
    }

    #[test]
    fn sweep_sole_node_relocates_freely() {
        let mut g = SpatialGraph::new(50.0).unwrap();
        g.add_node(Point2D::new(0.0, 0.0)).unwrap();
        let params =
            ConstructionParams::new(1.0, 50.0, Rect::new(0.0, 0.0, 100.0, 100.0).unwrap(), 10)
                .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let out = relocate_sweep(g, &params, &mut rng).unwrap();
        assert!(out.is_connected().unwrap());
        assert_ne!(
            out.position(NodeId::new(0)).unwrap(),
            Point2D::new(0.0, 0.0)
        );
    }

    #[test]
    fn family_p0_single_run_is_lattice() {
        let spec = LatticeSpec::new(3, 3, 36.0).unwrap();
        let members = construct_family(&spec, 50.0, &[0.0], 1, 99).unwrap();
        assert_eq!(members.len(), 1);
        assert_eq!(members[0].graph, build_lattice(&spec, 50.0).unwrap());
    }

    #[test]
    fn family_is_deterministic_and_ordered() {
        let spec = LatticeSpec::new(3, 4, 36.0).unwrap();
        let a = construct_family(&spec, 50.0, &[0.0, 0.5, 1.0], 2, 1234).unwrap();
        let b = construct_family(&spec, 50.0, &[0.0, 0.5, 1.0], 2, 1234).unwrap();
        assert_eq!(a.len(), 6);
        for (ma, mb) in a.iter().zip(&b) {
            assert_eq!(write_graph_string(&ma.graph), write_graph_string(&mb.graph));
        }
        let keys: Vec<_> = a.iter().map(|m| (m.p_index, m.run)).collect();
        assert_eq!(keys, vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]);
    }

    #[test]
    fn partition_pair_geometry() {
        let spec = LatticeSpec::new(5, 10, 36.0).unwrap();
        let scenario = build_partition_pair(&spec, 50.0, 150.0, 42).unwrap();
        assert_eq!(scenario.node_count(), 100);
        assert_eq!(scenario.cross_pair_count(), 2500);
        let combined = scenario.combined();
        assert_eq!(combined.node_count(), 100);
        // No cross pair is within range, so every cross link is a bypass.
        for u in scenario.left_ids() {
            for v in scenario.right_ids() {
                assert!(combined.euclidean_distance(u, v).unwrap() > 150.0 - 1e-9);
            }
        }
        // The combined graph has exactly the partition edges, no more.
        assert_eq!(
            combined.edge_count(),
            scenario.left().edge_count() + scenario.right().edge_count()
        );
        assert!(!combined.is_connected().unwrap());
    }

    #[test]
    fn partition_pair_deterministic() {
        let spec = LatticeSpec::new(5, 10, 36.0).unwrap();
        let a = build_partition_pair(&spec, 50.0, 150.0, 7).unwrap();
        let b = build_partition_pair(&spec, 50.0, 150.0, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn partition_pair_rejects_small_gap() {
        let spec = LatticeSpec::new(5, 10, 36.0).unwrap();
        assert_eq!(
            build_partition_pair(&spec, 50.0, 50.0, 7),
            Err(ConstructionError::GapTooSmall {
                gap: 50.0,
                tr: 50.0
            })
        );
    }
}
