//! Undirected graph with 2D node positions and two edge kinds.
//!
//! A [`SpatialGraph`] keeps node positions, a transmission range `tr`, and an
//! edge set where every edge is either `Spatial` (endpoint distance ≤ tr) or
//! `Bypass` (endpoint distance strictly > tr). The kind/distance relation is
//! enforced at every mutation, so a well-typed graph can never hold an
//! out-of-range spatial link or an in-range bypass link. Hop distances treat
//! both kinds as unit cost.

use std::collections::BTreeMap;
use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Dense node identifier: ids are assigned contiguously from 0 as nodes are
/// added and are never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(usize);

impl NodeId {
    pub fn new(index: usize) -> Self {
        NodeId(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point in the plane, in spatial units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub fn new(x: f64, y: f64) -> Self {
        Point2D { x, y }
    }

    pub fn distance(self, other: Point2D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Edge classification. Spatial links require endpoint distance ≤ tr,
/// bypass links require endpoint distance > tr.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Spatial,
    Bypass,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Spatial => "spatial",
            EdgeKind::Bypass => "bypass",
        }
    }

    pub fn parse(s: &str) -> Option<EdgeKind> {
        match s {
            "spatial" => Some(EdgeKind::Spatial),
            "bypass" => Some(EdgeKind::Bypass),
            _ => None,
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(NodeId),
    #[error("edge ({0}, {1}) already present")]
    DuplicateEdge(NodeId, NodeId),
    #[error("no edge ({0}, {1})")]
    MissingEdge(NodeId, NodeId),
    #[error(
        "spatial edge ({u}, {v}) out of range: distance {distance} exceeds transmission range {tr}"
    )]
    SpatialOutOfRange {
        u: NodeId,
        v: NodeId,
        distance: f64,
        tr: f64,
    },
    #[error(
        "bypass edge ({u}, {v}) rejected: endpoints share a spatial neighborhood \
         (distance {distance} within transmission range {tr})"
    )]
    BypassInRange {
        u: NodeId,
        v: NodeId,
        distance: f64,
        tr: f64,
    },
    #[error("node position must be finite")]
    NonFinitePosition,
    #[error("transmission range must be positive and finite, got {0}")]
    InvalidRange(f64),
    #[error("operation requires a non-empty graph")]
    EmptyGraph,
}

/// Spatially embedded undirected graph with dual edge kinds.
///
/// Node iteration, neighbor iteration and edge iteration are all in ascending
/// id order, so traversals and serializations are reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGraph {
    tr: f64,
    positions: Vec<Point2D>,
    adjacency: Vec<BTreeMap<NodeId, EdgeKind>>,
    spatial_edges: usize,
    bypass_edges: usize,
}

impl SpatialGraph {
    /// Creates an empty graph with the given transmission range.
    pub fn new(tr: f64) -> Result<Self, GraphError> {
        if !tr.is_finite() || tr <= 0.0 {
            return Err(GraphError::InvalidRange(tr));
        }
        Ok(SpatialGraph {
            tr,
            positions: Vec::new(),
            adjacency: Vec::new(),
            spatial_edges: 0,
            bypass_edges: 0,
        })
    }

    pub fn tr(&self) -> f64 {
        self.tr
    }

    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.positions.len()).map(NodeId)
    }

    pub fn edge_count(&self) -> usize {
        self.spatial_edges + self.bypass_edges
    }

    pub fn spatial_edge_count(&self) -> usize {
        self.spatial_edges
    }

    pub fn bypass_edge_count(&self) -> usize {
        self.bypass_edges
    }

    fn check(&self, v: NodeId) -> Result<usize, GraphError> {
        if v.0 < self.positions.len() {
            Ok(v.0)
        } else {
            Err(GraphError::UnknownNode(v))
        }
    }

    /// Adds a node at the given position and returns its id (dense from 0).
    pub fn add_node(&mut self, position: Point2D) -> Result<NodeId, GraphError> {
        if !position.is_finite() {
            return Err(GraphError::NonFinitePosition);
        }
        let id = NodeId(self.positions.len());
        self.positions.push(position);
        self.adjacency.push(BTreeMap::new());
        Ok(id)
    }

    pub fn position(&self, v: NodeId) -> Result<Point2D, GraphError> {
        Ok(self.positions[self.check(v)?])
    }

    /// Moves a node. Fails (without mutating) if any incident edge would
    /// violate its kind/distance constraint at the new position.
    pub fn set_position(&mut self, v: NodeId, position: Point2D) -> Result<(), GraphError> {
        let i = self.check(v)?;
        if !position.is_finite() {
            return Err(GraphError::NonFinitePosition);
        }
        for (&u, &kind) in &self.adjacency[i] {
            let d = position.distance(self.positions[u.0]);
            match kind {
                EdgeKind::Spatial if d > self.tr => {
                    return Err(GraphError::SpatialOutOfRange {
                        u: v,
                        v: u,
                        distance: d,
                        tr: self.tr,
                    })
                }
                EdgeKind::Bypass if d <= self.tr => {
                    return Err(GraphError::BypassInRange {
                        u: v,
                        v: u,
                        distance: d,
                        tr: self.tr,
                    })
                }
                _ => {}
            }
        }
        self.positions[i] = position;
        Ok(())
    }

    /// Shifts every node by the same offset. A rigid translation preserves
    /// all pairwise distances, so edge invariants are unaffected.
    pub fn translate(&mut self, dx: f64, dy: f64) -> Result<(), GraphError> {
        if !dx.is_finite() || !dy.is_finite() {
            return Err(GraphError::NonFinitePosition);
        }
        for p in &mut self.positions {
            p.x += dx;
            p.y += dy;
            if !p.is_finite() {
                return Err(GraphError::NonFinitePosition);
            }
        }
        Ok(())
    }

    /// Euclidean distance between two nodes.
    pub fn euclidean_distance(&self, u: NodeId, v: NodeId) -> Result<f64, GraphError> {
        let a = self.positions[self.check(u)?];
        let b = self.positions[self.check(v)?];
        Ok(a.distance(b))
    }

    /// All nodes within transmission range of `v`, excluding `v` itself,
    /// in ascending id order. Membership is purely geometric and independent
    /// of the edge set.
    pub fn spatial_neighborhood(&self, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
        let i = self.check(v)?;
        let p = self.positions[i];
        Ok(self
            .positions
            .iter()
            .enumerate()
            .filter(|&(j, q)| j != i && p.distance(*q) <= self.tr)
            .map(|(j, _)| NodeId(j))
            .collect())
    }

    pub fn degree(&self, v: NodeId) -> Result<usize, GraphError> {
        Ok(self.adjacency[self.check(v)?].len())
    }

    /// Neighbors of `v` with their edge kinds, ascending by id.
    pub fn neighbors(
        &self,
        v: NodeId,
    ) -> Result<impl Iterator<Item = (NodeId, EdgeKind)> + '_, GraphError> {
        let i = self.check(v)?;
        Ok(self.adjacency[i].iter().map(|(&u, &k)| (u, k)))
    }

    pub fn edge_kind(&self, u: NodeId, v: NodeId) -> Result<Option<EdgeKind>, GraphError> {
        let i = self.check(u)?;
        self.check(v)?;
        Ok(self.adjacency[i].get(&v).copied())
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> Result<bool, GraphError> {
        Ok(self.edge_kind(u, v)?.is_some())
    }

    /// Inserts an undirected edge, enforcing the kind/distance relation:
    /// spatial edges need distance ≤ tr, bypass edges distance > tr.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId, kind: EdgeKind) -> Result<(), GraphError> {
        let i = self.check(u)?;
        let j = self.check(v)?;
        if i == j {
            return Err(GraphError::SelfLoop(u));
        }
        if self.adjacency[i].contains_key(&v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        let d = self.positions[i].distance(self.positions[j]);
        match kind {
            EdgeKind::Spatial if d > self.tr => {
                return Err(GraphError::SpatialOutOfRange {
                    u,
                    v,
                    distance: d,
                    tr: self.tr,
                })
            }
            EdgeKind::Bypass if d <= self.tr => {
                return Err(GraphError::BypassInRange {
                    u,
                    v,
                    distance: d,
                    tr: self.tr,
                })
            }
            _ => {}
        }
        self.adjacency[i].insert(v, kind);
        self.adjacency[j].insert(u, kind);
        match kind {
            EdgeKind::Spatial => self.spatial_edges += 1,
            EdgeKind::Bypass => self.bypass_edges += 1,
        }
        Ok(())
    }

    /// Removes the edge (u, v) and returns its kind.
    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) -> Result<EdgeKind, GraphError> {
        let i = self.check(u)?;
        let j = self.check(v)?;
        let kind = self.adjacency[i]
            .remove(&v)
            .ok_or(GraphError::MissingEdge(u, v))?;
        self.adjacency[j].remove(&u);
        match kind {
            EdgeKind::Spatial => self.spatial_edges -= 1,
            EdgeKind::Bypass => self.bypass_edges -= 1,
        }
        Ok(kind)
    }

    /// All edges as (u, v, kind) with u < v, ascending by (u, v).
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, EdgeKind)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, nbrs)| {
            nbrs.iter()
                .filter(move |(&u, _)| u.0 > i)
                .map(move |(&u, &k)| (NodeId(i), u, k))
        })
    }

    /// Hop count from `source` to every node, breadth-first. Both edge kinds
    /// count as one hop. Unreachable nodes are `None`.
    pub fn bfs_distances(&self, source: NodeId) -> Result<Vec<Option<usize>>, GraphError> {
        let s = self.check(source)?;
        let mut dist = vec![None; self.positions.len()];
        dist[s] = Some(0);
        let mut queue = VecDeque::with_capacity(self.positions.len());
        queue.push_back(s);
        while let Some(i) = queue.pop_front() {
            let next = dist[i].unwrap() + 1;
            for &u in self.adjacency[i].keys() {
                if dist[u.0].is_none() {
                    dist[u.0] = Some(next);
                    queue.push_back(u.0);
                }
            }
        }
        Ok(dist)
    }

    /// True iff every node is reachable from node 0.
    pub fn is_connected(&self) -> Result<bool, GraphError> {
        if self.positions.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        let dist = self.bfs_distances(NodeId(0))?;
        Ok(dist.iter().all(|d| d.is_some()))
    }

    /// Mean degree 2·|E|/|V| over both edge kinds.
    pub fn average_degree(&self) -> Result<f64, GraphError> {
        if self.positions.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        Ok(2.0 * self.edge_count() as f64 / self.positions.len() as f64)
    }
}
