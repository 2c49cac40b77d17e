//! Oracles and generators shared by the integration suites.
//!
//! The oracles work on plain (node count, edge list) inputs and adjacency
//! matrices, deliberately independent of the library's graph internals and
//! traversal code.
#![allow(dead_code)] // each test binary uses a different subset

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use swnet::graph::{EdgeKind, NodeId, Point2D, SpatialGraph};

pub const UNREACHABLE: usize = usize::MAX;

/// Builds a graph whose nodes all sit within range of each other (on a unit
/// circle with tr = 10), so an arbitrary adjacency is expressible with
/// spatial edges.
pub fn abstract_graph(n: usize, edges: &[(usize, usize)]) -> SpatialGraph {
    let mut g = SpatialGraph::new(10.0).unwrap();
    for i in 0..n {
        let angle = i as f64 / n.max(1) as f64 * std::f64::consts::TAU;
        g.add_node(Point2D::new(angle.cos(), angle.sin())).unwrap();
    }
    for &(u, v) in edges {
        g.add_edge(NodeId::new(u), NodeId::new(v), EdgeKind::Spatial)
            .unwrap();
    }
    g
}

/// Floyd–Warshall all-pairs hop counts over an undirected unit-cost edge
/// list; `UNREACHABLE` marks disconnected pairs.
pub fn floyd_warshall(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut dist = vec![vec![UNREACHABLE; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(u, v) in edges {
        dist[u][v] = 1;
        dist[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            if dist[i][k] == UNREACHABLE {
                continue;
            }
            for j in 0..n {
                if dist[k][j] == UNREACHABLE {
                    continue;
                }
                let via = dist[i][k] + dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    dist
}

/// Brute-force clustering coefficient: per node, count realized pairs among
/// its neighbors in an adjacency matrix and average the fractions.
pub fn clustering_oracle(n: usize, edges: &[(usize, usize)]) -> f64 {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let mut total = 0.0;
    for v in 0..n {
        let neighbors: Vec<usize> = (0..n).filter(|&u| adj[v][u]).collect();
        let k = neighbors.len();
        if k <= 1 {
            continue;
        }
        let mut realized = 0usize;
        for i in 0..k {
            for j in i + 1..k {
                if adj[neighbors[i]][neighbors[j]] {
                    realized += 1;
                }
            }
        }
        total += realized as f64 / (k * (k - 1) / 2) as f64;
    }
    total / n as f64
}

fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Characteristic path length (median over nodes of the per-node mean hop
/// distance) from a Floyd–Warshall matrix; None if n < 2 or disconnected.
pub fn path_length_oracle(dist: &[Vec<usize>]) -> Option<f64> {
    let n = dist.len();
    if n < 2 {
        return None;
    }
    let mut means = Vec::with_capacity(n);
    for row in dist {
        let mut sum = 0usize;
        for &d in row {
            if d == UNREACHABLE {
                return None;
            }
            sum += d;
        }
        means.push(sum as f64 / (n - 1) as f64);
    }
    means.sort_by(f64::total_cmp);
    Some(median_sorted(&means))
}

pub fn is_connected_edge_list(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return false;
    }
    let dist = floyd_warshall(n, edges);
    dist[0].iter().all(|&d| d != UNREACHABLE)
}

/// All unordered pairs over n nodes, in ascending order.
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    pairs
}

/// Decodes an edge subset from a bitmask over `pairs`.
pub fn edges_from_mask(pairs: &[(usize, usize)], mask: u64) -> Vec<(usize, usize)> {
    pairs
        .iter()
        .enumerate()
        .filter(|&(i, _)| mask >> i & 1 == 1)
        .map(|(_, &p)| p)
        .collect()
}

/// Random connected graph: a random spanning tree plus extra edges with the
/// given probability. Always connected, deterministic per seed.
pub fn random_connected_edges(rng: &mut ChaCha8Rng, n: usize, extra_p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 1..n {
        edges.push((rng.gen_range(0..i), i));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.gen::<f64>() < extra_p {
                edges.push((u, v));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Convenience: deterministic rng for a test case.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
