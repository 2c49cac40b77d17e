//! Spatially embedded ad hoc network topologies with bypass links.
//!
//! The library models wireless multi-hop networks as undirected graphs whose
//! nodes carry 2D positions and whose edges come in two kinds: `spatial`
//! links between nodes within transmission range of each other, and `bypass`
//! links between nodes that are out of range (long-distance links carried by
//! some other medium, counted as a single hop). On top of that it provides
//! small-world metrics (clustering coefficient, characteristic path length,
//! random-graph baselines), a lattice-to-random growth construction, the
//! partition-bridging experiments, and a seeded, replayable experiment
//! harness with CSV/SVG output.

#![forbid(unsafe_code)]

pub mod bypass;
pub mod cli;
pub mod construction;
pub mod defaults;
pub mod graph;
pub mod harness;
pub mod io;
pub mod metrics;
pub mod svg;

pub use graph::{EdgeKind, GraphError, NodeId, Point2D, SpatialGraph};
pub use metrics::MetricsRecord;
