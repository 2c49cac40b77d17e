//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see every line.
//! Criteria with statistical content use fixed seed lists, so the whole
//! suite is deterministic.

mod common;

use std::collections::BTreeSet;

use common::*;
use rand::Rng;
use swnet::bypass::{experiment_multi_link, experiment_single_link, single_link_trial};
use swnet::construction::{build_lattice, relocate_sweep, ConstructionParams, LatticeSpec};
use swnet::defaults;
use swnet::graph::{EdgeKind, NodeId, SpatialGraph};
use swnet::harness::{
    replay_exp1_run, run_experiment1, run_experiment2, run_experiment3, Exp1Params, ScenarioParams,
};
use swnet::metrics::{
    characteristic_path_length, clustering_coefficient, gamma_random, l_random, local_clustering,
};

fn report(number: &str, name: &str, pass: bool) {
    println!(
        "acceptance criterion {number} ({name}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
}

const ORACLE_TOLERANCE: f64 = 1e-12;

fn check_against_oracles(n: usize, edges: &[(usize, usize)]) {
    let g = abstract_graph(n, edges);
    let oracle_dist = floyd_warshall(n, edges);

    // Hop counts agree exactly with the all-pairs oracle.
    for v in 0..n {
        let bfs = g.bfs_distances(NodeId::new(v)).unwrap();
        for (j, d) in bfs.iter().enumerate() {
            match d {
                Some(h) => assert_eq!(*h, oracle_dist[v][j], "hops {v}->{j} on {edges:?}"),
                None => assert_eq!(oracle_dist[v][j], UNREACHABLE, "hops {v}->{j} on {edges:?}"),
            }
        }
    }

    let gamma = clustering_coefficient(&g).unwrap();
    let gamma_oracle = clustering_oracle(n, edges);
    assert!(
        (gamma - gamma_oracle).abs() <= ORACLE_TOLERANCE,
        "clustering mismatch on n={n} {edges:?}: {gamma} vs {gamma_oracle}"
    );

    match path_length_oracle(&oracle_dist) {
        Some(expected) => {
            let l = characteristic_path_length(&g).unwrap();
            assert!(
                (l - expected).abs() <= ORACLE_TOLERANCE,
                "path length mismatch on n={n} {edges:?}: {l} vs {expected}"
            );
        }
        None => {
            assert!(
                characteristic_path_length(&g).is_err(),
                "path length defined on disconnected/trivial graph n={n} {edges:?}"
            );
        }
    }
}

#[test]
fn criterion_01_metric_oracles() {
    // Every labeled graph on up to 6 nodes.
    for n in 1..=6usize {
        let pairs = all_pairs(n);
        for mask in 0..(1u64 << pairs.len()) {
            let edges = edges_from_mask(&pairs, mask);
            check_against_oracles(n, &edges);
        }
    }

    // Structured families at 7 and 8 nodes.
    let path = |n: usize| (0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>();
    let cycle = |n: usize| {
        let mut e = path(n);
        e.push((0, n - 1));
        e
    };
    let complete = |n: usize| all_pairs(n);
    let star = |n: usize| (1..n).map(|i| (0, i)).collect::<Vec<_>>();
    let bipartite = |a: usize, b: usize| {
        let mut e = Vec::new();
        for u in 0..a {
            for v in a..a + b {
                e.push((u, v));
            }
        }
        e
    };
    let wheel8: Vec<(usize, usize)> = {
        let mut e = cycle(7)
            .iter()
            .map(|&(u, v)| (u + 1, v + 1))
            .collect::<Vec<_>>();
        e.extend((1..8).map(|i| (0, i)));
        e
    };
    let grid_2x4 = vec![
        (0, 1),
        (1, 2),
        (2, 3),
        (4, 5),
        (5, 6),
        (6, 7),
        (0, 4),
        (1, 5),
        (2, 6),
        (3, 7),
    ];
    let triangle_with_tail = vec![
        (0, 1),
        (1, 2),
        (0, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 6),
        (6, 7),
    ];
    let bridged_cliques = {
        let mut e = all_pairs(4);
        e.extend(all_pairs(4).iter().map(|&(u, v)| (u + 4, v + 4)));
        e.push((3, 4));
        e
    };
    let disjoint_cliques = {
        let mut e = vec![(0, 1), (1, 2), (0, 2)];
        e.extend(all_pairs(4).iter().map(|&(u, v)| (u + 3, v + 3)));
        e
    };
    let structured: Vec<(usize, Vec<(usize, usize)>)> = vec![
        (7, path(7)),
        (8, path(8)),
        (7, cycle(7)),
        (8, cycle(8)),
        (7, complete(7)),
        (8, complete(8)),
        (8, star(8)),
        (7, bipartite(3, 4)),
        (8, bipartite(4, 4)),
        (8, wheel8),
        (8, grid_2x4),
        (8, triangle_with_tail),
        (8, bridged_cliques),
        (7, disjoint_cliques),
        (7, Vec::new()),
    ];
    for (n, edges) in &structured {
        check_against_oracles(*n, edges);
    }

    // 200 random connected graphs with up to 12 nodes.
    let mut r = rng(0x0acc_0001);
    for _ in 0..200 {
        let n = r.gen_range(2..=12usize);
        let extra = r.gen_range(0.0..0.6);
        let edges = random_connected_edges(&mut r, n, extra);
        check_against_oracles(n, &edges);
    }

    report("1", "metric oracles, exact", true);
}

#[test]
fn criterion_02_baselines() {
    let gamma = gamma_random(100, 7.512).unwrap();
    let diff = (gamma - 0.07512).abs();
    // Exact up to the suite's oracle tolerance; the residual is the 1-ulp
    // rounding of the decimal inputs into binary floating point.
    let ulps = (gamma.to_bits() as i64 - 0.07512f64.to_bits() as i64).abs();
    let gamma_ok = diff <= 1e-12 && ulps <= 1;

    let l = l_random(100, 7.512).unwrap();
    let independent = 100f64.ln() / 7.512f64.ln();
    let frozen = 2.283742230559824;
    let l_ok = (l - independent).abs() <= 1e-9 && (l - frozen).abs() <= 1e-9;

    let pass = gamma_ok && l_ok;
    report("2", "random-graph baselines", pass);
    assert!(
        gamma_ok,
        "gamma_random(100, 7.512) = {gamma}, diff {diff}, ulps {ulps}"
    );
    assert!(l_ok, "l_random(100, 7.512) = {l}, expected {independent}");
}

#[test]
fn criterion_03_experiment1_trend() {
    let params = Exp1Params::default_sweep();
    let last = params.p_values.len() - 1;
    let mut passes = 0;
    let mut lines = Vec::new();
    for seed in 1u64..=10 {
        let result = run_experiment1(&params, seed).unwrap();
        let p0 = &result.series.rows[0].record;
        let p1 = &result.series.rows[last].record;
        assert_eq!(
            p0.gamma, 0.0,
            "seed {seed}: the 4-neighbor lattice must have gamma exactly 0"
        );
        let ok = p1.l > p0.l && p1.gamma > p0.gamma;
        if ok {
            passes += 1;
        }
        lines.push(format!(
            "seed {seed}: L(0)={:.4} L(1)={:.4} gamma(1)={:.4} {}",
            p0.l,
            p1.l,
            p1.gamma,
            if ok { "ok" } else { "violated" }
        ));
    }
    let pass = passes >= 9;
    report("3", "experiment 1 trend", pass);
    assert!(
        pass,
        "ordering held for {passes}/10 seeds:\n{}",
        lines.join("\n")
    );
}

/// Criteria 4 and 5 share the 500-trial run on the default scenario.
fn default_exp2_records() -> Vec<swnet::bypass::TrialRecord> {
    let scenario = ScenarioParams::default_partitions()
        .build(defaults::MASTER_SEED)
        .unwrap();
    experiment_single_link(&scenario, 500, defaults::MASTER_SEED).unwrap()
}

#[test]
fn criterion_04_experiment2_spread() {
    let records = default_exp2_records();
    let ls: Vec<f64> = records.iter().map(|r| r.metrics.l).collect();
    let gammas: Vec<f64> = records.iter().map(|r| r.metrics.gamma).collect();
    let l_max = ls.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let l_min = ls.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio = (l_max - l_min) / l_max;
    let ratio_ok = (0.20..=0.45).contains(&ratio);

    let g_max = gammas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let g_min = gammas.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread_ok = g_max - g_min <= 0.05;

    let pass = ratio_ok && spread_ok;
    report("4", "experiment 2 spread", pass);
    assert!(
        ratio_ok,
        "(L_max - L_min)/L_max = {ratio:.4} outside [0.20, 0.45] (L in [{l_min:.4}, {l_max:.4}])"
    );
    assert!(
        spread_ok,
        "gamma spread {:.4} exceeds 0.05 (gamma in [{g_min:.4}, {g_max:.4}])",
        g_max - g_min
    );
}

#[test]
fn criterion_05_clustering_dominance() {
    let records = default_exp2_records();
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for r in &records {
        let threshold = 5.0 * (r.metrics.k / r.metrics.n as f64);
        worst = worst.min(r.metrics.gamma - threshold);
        ok &= r.metrics.gamma >= threshold;
    }
    report("5", "small-world clustering dominance", ok);
    assert!(ok, "gamma fell below 5*(k/n); worst margin {worst:.4}");
}

#[test]
fn criterion_06_experiment3_shape() {
    let params = ScenarioParams::default_partitions();
    let mut monotone_count = 0;
    let mut diminishing_count = 0;
    let mut interior_count = 0;
    let mut lines = Vec::new();
    for seed in 1u64..=10 {
        let series = run_experiment3(&params, 500, seed, None).unwrap();
        let l: Vec<f64> = series.rows.iter().map(|r| r.record.l).collect();
        let gamma: Vec<f64> = series.rows.iter().map(|r| r.record.gamma).collect();

        let monotone = l.windows(2).all(|w| w[1] <= w[0]);
        let early_drop = l[0] - l[29];
        let late_drop = l[29] - l[59];
        let diminishing = late_drop < 0.5 * early_drop;
        // An interior minimum: some b* in [100, 450] lies below both gamma
        // at b = 1 and gamma at b = 500.
        let window_min = gamma[99..450].iter().cloned().fold(f64::INFINITY, f64::min);
        let interior = window_min < gamma[0] && gamma[499] > window_min;

        monotone_count += monotone as usize;
        diminishing_count += diminishing as usize;
        interior_count += interior as usize;
        lines.push(format!(
            "seed {seed}: monotone={monotone} drops=({early_drop:.3}, {late_drop:.3}) \
             gamma(1)={:.4} window_min={window_min:.4} gamma(500)={:.4} interior={interior}",
            gamma[0], gamma[499]
        ));
    }
    let pass_a = monotone_count == 10;
    let pass_b = diminishing_count >= 8;
    let pass_c = interior_count >= 8;
    report("6a", "experiment 3: L non-increasing", pass_a);
    report("6b", "experiment 3: diminishing returns after b=30", pass_b);
    report("6c", "experiment 3: interior gamma minimum", pass_c);
    assert!(
        pass_a,
        "L sequence increased for {} of 10 seeds",
        10 - monotone_count
    );
    assert!(
        pass_b,
        "diminishing returns held for {diminishing_count}/10 seeds"
    );
    // The gamma curve's true minimum for 50x50 cross-partition sampling sits
    // near b = 550, past the growth horizon of this run, so the windowed
    // upturn is only ever visible through per-step noise.
    assert!(
        pass_c,
        "interior gamma minimum found for {interior_count}/10 seeds:\n{}",
        lines.join("\n")
    );
}

#[test]
fn criterion_07_single_link_locality() {
    for seed in 1u64..=10 {
        let scenario = ScenarioParams::default_partitions().build(seed).unwrap();
        let mut g = scenario.combined();
        let n = g.node_count();
        for trial in 0..25usize {
            let record = single_link_trial(&scenario, seed, trial).unwrap();
            let (u, v) = (record.u, record.v);
            let before: Vec<f64> = (0..n)
                .map(|i| local_clustering(&g, NodeId::new(i)).unwrap())
                .collect();
            // Realized neighbor pairs per endpoint, for the closed form.
            let realized = |g: &SpatialGraph, w: NodeId| -> usize {
                let nbrs: Vec<NodeId> = g.neighbors(w).unwrap().map(|(x, _)| x).collect();
                let mut count = 0;
                for (i, &a) in nbrs.iter().enumerate() {
                    for &b in &nbrs[i + 1..] {
                        if g.has_edge(a, b).unwrap() {
                            count += 1;
                        }
                    }
                }
                count
            };
            let (tu, tv) = (realized(&g, u), realized(&g, v));
            let (ku, kv) = (g.degree(u).unwrap(), g.degree(v).unwrap());

            g.add_edge(u, v, EdgeKind::Bypass).unwrap();
            let after: Vec<f64> = (0..n)
                .map(|i| local_clustering(&g, NodeId::new(i)).unwrap())
                .collect();
            g.remove_edge(u, v).unwrap();

            for i in 0..n {
                let id = NodeId::new(i);
                if id == u || id == v {
                    let (t, k) = if id == u { (tu, ku) } else { (tv, kv) };
                    let expected = t as f64 / ((k + 1) * k / 2) as f64;
                    assert_eq!(
                        after[i].to_bits(),
                        expected.to_bits(),
                        "endpoint {id} deviates from the closed form (seed {seed}, trial {trial})"
                    );
                    assert_eq!(
                        before[i] != after[i],
                        t > 0,
                        "endpoint {id} change state unexpected (seed {seed}, trial {trial})"
                    );
                } else {
                    assert_eq!(
                        before[i].to_bits(),
                        after[i].to_bits(),
                        "non-endpoint {id} changed (seed {seed}, trial {trial}, pair {u},{v})"
                    );
                }
            }
        }
    }
    report("7", "single-link clustering locality", true);
}

#[test]
fn criterion_08_path_length_monotonicity() {
    let mut r = rng(0x0acc_0008);
    let mut done = 0;
    while done < 100 {
        let n = r.gen_range(4..=12usize);
        let extra = r.gen_range(0.0..0.5);
        let edges = random_connected_edges(&mut r, n, extra);
        let mut g = abstract_graph(n, &edges);
        let absent: Vec<(usize, usize)> = all_pairs(n)
            .into_iter()
            .filter(|&(u, v)| !g.has_edge(NodeId::new(u), NodeId::new(v)).unwrap())
            .collect();
        if absent.is_empty() {
            continue;
        }
        let before = characteristic_path_length(&g).unwrap();
        let (u, v) = absent[r.gen_range(0..absent.len())];
        g.add_edge(NodeId::new(u), NodeId::new(v), EdgeKind::Spatial)
            .unwrap();
        let after = characteristic_path_length(&g).unwrap();
        assert!(
            after <= before,
            "L increased from {before} to {after} after inserting ({u}, {v}) into {edges:?}"
        );
        done += 1;
    }
    report("8", "path length monotone under edge insertion", true);
}

#[test]
fn criterion_09_determinism() {
    // Byte-identical CSV output for every experiment under a fixed seed.
    let exp1_params = Exp1Params {
        spec: LatticeSpec::new(4, 4, 42.0).unwrap(),
        tr: defaults::TRANSMISSION_RANGE,
        p_values: swnet::harness::even_p_values(5),
        runs: 3,
    };
    let a = run_experiment1(&exp1_params, 2024).unwrap();
    let b = run_experiment1(&exp1_params, 2024).unwrap();
    assert_eq!(a.runs_csv().into_bytes(), b.runs_csv().into_bytes());
    assert_eq!(
        a.aggregate_csv().into_bytes(),
        b.aggregate_csv().into_bytes()
    );

    let scenario_params = ScenarioParams::default_partitions();
    let s1 = run_experiment2(&scenario_params, 25, 2024, None).unwrap();
    let s2 = run_experiment2(&scenario_params, 25, 2024, None).unwrap();
    assert_eq!(s1.to_csv().into_bytes(), s2.to_csv().into_bytes());

    let g1 = run_experiment3(&scenario_params, 40, 2024, None).unwrap();
    let g2 = run_experiment3(&scenario_params, 40, 2024, None).unwrap();
    assert_eq!(g1.to_csv().into_bytes(), g2.to_csv().into_bytes());

    // Single rows replay in isolation from their derived seeds.
    for cell in [0usize, 7, 11] {
        let row = &a.raw[cell];
        let replayed = replay_exp1_run(&exp1_params, 2024, row.p_index, row.run).unwrap();
        assert_eq!(replayed.seed, row.seed);
        assert_eq!(replayed.l.to_bits(), row.l.to_bits());
        assert_eq!(replayed.gamma.to_bits(), row.gamma.to_bits());
        assert_eq!(replayed.k.to_bits(), row.k.to_bits());
    }
    let scenario = scenario_params.build(2024).unwrap();
    let trials = experiment_single_link(&scenario, 25, 2024).unwrap();
    for t in [0usize, 9, 24] {
        assert_eq!(trials[t], single_link_trial(&scenario, 2024, t).unwrap());
    }
    let growth = experiment_multi_link(&scenario, 40, 2024).unwrap();
    let prefix = experiment_multi_link(&scenario, 17, 2024).unwrap();
    assert_eq!(growth[16], prefix[16]);

    // Aggregated means equal the mean of independently replayed rows.
    for (p_index, row) in a.series.rows.iter().enumerate() {
        let mut sum = 0.0;
        for run in 0..exp1_params.runs {
            sum += replay_exp1_run(&exp1_params, 2024, p_index, run).unwrap().l;
        }
        assert_eq!(
            (sum / exp1_params.runs as f64).to_bits(),
            row.record.l.to_bits(),
            "aggregate row {p_index} disagrees with replayed rows"
        );
    }

    report("9", "seeded determinism and replay", true);
}

#[test]
fn criterion_10_construction_safety() {
    let mut r = rng(0x0acc_0010);
    for case in 0..1000 {
        let (rows, cols) = if case % 20 == 0 {
            (10, 10)
        } else {
            (r.gen_range(1..=6usize), r.gen_range(2..=6usize))
        };
        let spacing = 36.0;
        let tr = 50.0;
        let p = r.gen::<f64>();
        let seed: u64 = r.gen();
        let spec = LatticeSpec::new(rows, cols, spacing).unwrap();
        let params = ConstructionParams::for_lattice(&spec, tr, p).unwrap();
        let mut run_rng = rng(seed);
        let g = relocate_sweep(build_lattice(&spec, tr).unwrap(), &params, &mut run_rng)
            .unwrap_or_else(|e| panic!("case {case} (rows={rows} cols={cols} p={p}): {e}"));
        assert!(
            g.is_connected().unwrap(),
            "case {case}: output disconnected (rows={rows} cols={cols} p={p} seed={seed})"
        );
        for v in g.node_ids() {
            assert!(
                g.degree(v).unwrap() >= 1 || g.node_count() == 1,
                "case {case}: node {v} isolated"
            );
        }
        for (u, v, kind) in g.edges() {
            assert_eq!(kind, EdgeKind::Spatial, "case {case}: non-spatial edge");
            let d = g.euclidean_distance(u, v).unwrap();
            assert!(d <= tr, "case {case}: edge ({u}, {v}) spans {d} > {tr}");
        }
    }
    report("10", "construction safety fuzz", true);
}

/// The statistical calibration check pinned at spacing 36: mean average
/// degree over 25 fully relocated runs stays within [6, 9].
#[test]
fn calibration_density_at_spacing_36() {
    let spec = LatticeSpec::new(10, 10, 36.0).unwrap();
    let members =
        swnet::construction::construct_family(&spec, 50.0, &[1.0], 25, 0x0acc_0036).unwrap();
    let mean_k = members
        .iter()
        .map(|m| m.graph.average_degree().unwrap())
        .sum::<f64>()
        / members.len() as f64;
    assert!(
        (6.0..=9.0).contains(&mean_k),
        "mean average degree {mean_k} outside [6, 9] at spacing 36"
    );
}

/// With a few hundred grown bypass links the joined configuration passes the
/// small-world verdict at moderate thresholds: clustering still dominates
/// the random baseline while L sits near it. (At that point the graph's own
/// average degree includes the bypass links, so the dominance margin is
/// thinner than against the plain-partition baseline.)
#[test]
fn verdict_true_on_grown_configuration() {
    use swnet::bypass::sample_bypass_pair;
    use swnet::harness::{seed_for, STREAM_BYPASS_PAIRS};
    use swnet::metrics::small_world_verdict;

    let master = defaults::MASTER_SEED;
    let scenario = ScenarioParams::default_partitions().build(master).unwrap();
    let mut g = scenario.combined();
    // Reconstruct the growth run's link set from the documented per-step
    // seeds of the pair-sampling stream.
    let mut exclude = BTreeSet::new();
    for b in 1..=300usize {
        let mut r = rng(seed_for(master, STREAM_BYPASS_PAIRS, (b - 1) as u64));
        let pair = sample_bypass_pair(&scenario, &mut r, &exclude).unwrap();
        exclude.insert(pair);
        g.add_edge(pair.0, pair.1, EdgeKind::Bypass).unwrap();
    }
    let grown = small_world_verdict(&g, 1.5, 1.5).unwrap();
    assert!(
        grown.small_world,
        "gamma {} vs baseline {}, L {} vs baseline {}",
        grown.record.gamma, grown.gamma_random, grown.record.l, grown.l_random
    );

    // The 4-neighbor lattice fails the same check outright.
    let lattice = build_lattice(&LatticeSpec::new(10, 10, 42.0).unwrap(), 50.0).unwrap();
    let flat = small_world_verdict(&lattice, 1.5, 1.5).unwrap();
    assert!(!flat.small_world);
    assert_eq!(flat.record.gamma, 0.0);
}

/// Uniformity of the pair sampler: 100k draws over the 2500 cross pairs of
/// the default scenario, every count within 5 sigma of the uniform mean.
#[test]
fn pair_sampling_uniformity() {
    use swnet::bypass::sample_bypass_pair;
    let scenario = ScenarioParams::default_partitions().build(9).unwrap();
    let mut counts: std::collections::BTreeMap<(NodeId, NodeId), usize> =
        std::collections::BTreeMap::new();
    let draws = 100_000usize;
    let mut r = rng(0x0acc_2500);
    let empty = BTreeSet::new();
    for _ in 0..draws {
        let pair = sample_bypass_pair(&scenario, &mut r, &empty).unwrap();
        *counts.entry(pair).or_insert(0) += 1;
    }
    let pairs = scenario.cross_pair_count() as f64;
    let expected = draws as f64 / pairs;
    let sigma = (draws as f64 * (1.0 / pairs) * (1.0 - 1.0 / pairs)).sqrt();
    for (&pair, &count) in &counts {
        assert!(
            (count as f64 - expected).abs() <= 5.0 * sigma,
            "pair {pair:?} drawn {count} times, expected {expected:.1} +- {:.1}",
            5.0 * sigma
        );
    }
    assert_eq!(counts.len(), 2500, "not every pair was drawn in 100k draws");
}
