//! Acceptance suite: one test per contract criterion, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; any FAIL also fails the test.

use hopset_core::builder::{
    build, build_folklore, build_hopset_small_beta, build_shortcut_set, measured_c1, measured_c3,
    BuildConfig, Regime,
};
use hopset_core::gen::{generate, Family};
use hopset_core::graph::WeightedDigraph;
use hopset_core::hierarchy::{per_pair_class_bound, vertex_path_hopset};
use hopset_core::path_hopset::{
    backward_shortcut, forward_shortcut, forward_shortcut_segment, path_edges, weak_backward,
    EdgeKind,
};
use hopset_core::pathset::NicePath;
use hopset_core::rng::Stream;
use hopset_core::verify::{
    check_backward_lemma, check_distance_preservation, check_hop_stretch, VerifyMode,
};
use hopset_core::witness::extract_witness_path;
use rayon::prelude::*;

const SUITE_EPS: f64 = 0.5;
const SUITE_W: u64 = 10;
/// pinned build seeds for the whp criteria
const BUILD_SEEDS: [u64; 3] = [101, 202, 303];

fn pass_line(id: usize, ok: bool, detail: &str) {
    println!(
        "ACCEPTANCE {id}: {} - {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

fn suite_m(family: Family, n: usize) -> usize {
    match family {
        Family::RandomDigraph => 4 * n,
        Family::LayeredDag => 3 * n,
        Family::CycleChain => 3 * n,
        Family::PathNoise => 2 * n,
    }
}

/// The 200-graph manifest: families x n in {50,100,200,300} x seeds.
fn suite_graphs() -> Vec<(Family, usize, u64)> {
    let sizes = [50usize, 100, 200, 300];
    let mut out = Vec::with_capacity(200);
    for idx in 0..200usize {
        let family = Family::ALL[idx % 4];
        let n = sizes[(idx / 4) % 4];
        let seed = 9000 + (idx / 16) as u64;
        out.push((family, n, seed));
    }
    out
}

fn suite_graph(family: Family, n: usize, seed: u64) -> WeightedDigraph {
    generate(family, n, suite_m(family, n), SUITE_W, seed).expect("suite graph")
}

/// Criterion 1: every hopset edge weight equals the APSP oracle and
/// dist(G+H) = dist(G) on all pairs, across the 200-graph suite.
#[test]
fn acceptance_01_distance_preservation() {
    let manifest = suite_graphs();
    let failures: Vec<String> = manifest
        .par_iter()
        .filter_map(|&(family, n, seed)| {
            let g = suite_graph(family, n, seed);
            let cfg = BuildConfig::new(BuildConfig::default_beta(n), SUITE_EPS, seed);
            let (h, _) = build(&g, &cfg).expect("build");
            let r = check_distance_preservation(&g, &h.edges, VerifyMode::Full, seed);
            if r.passed() {
                None
            } else {
                Some(format!(
                    "{} n={n} seed={seed}: {} edge / {} pair failures",
                    family.label(),
                    r.edge_failures.len(),
                    r.pair_failures.len()
                ))
            }
        })
        .collect();
    pass_line(
        1,
        failures.is_empty(),
        &format!(
            "200 graphs, zero tolerance; failures: {:?}",
            failures.first()
        ),
    );
}

/// Criterion 2: the (beta, eps) contract holds for every reachable pair
/// on at least 2 of 3 pinned build seeds per graph (small regime,
/// beta = ceil(20 log2 n), eps = 0.5).
#[test]
fn acceptance_02_hopset_contract() {
    let manifest = suite_graphs();
    let failures: Vec<String> = manifest
        .par_iter()
        .filter_map(|&(family, n, seed)| {
            let g = suite_graph(family, n, seed);
            let beta = BuildConfig::default_beta(n);
            let mut passes = 0;
            for &bseed in &BUILD_SEEDS {
                let cfg = BuildConfig {
                    regime: Regime::Small,
                    ..BuildConfig::new(beta, SUITE_EPS, bseed)
                };
                let (h, _) = build_hopset_small_beta(&g, &cfg).expect("build");
                let r = check_hop_stretch(&g, &h.edges, beta, SUITE_EPS, VerifyMode::Full, bseed);
                if r.passed() {
                    passes += 1;
                }
            }
            if passes >= 2 {
                None
            } else {
                Some(format!(
                    "{} n={n} seed={seed}: only {passes}/3 build seeds passed",
                    family.label()
                ))
            }
        })
        .collect();
    pass_line(
        2,
        failures.is_empty(),
        &format!(
            "200 graphs x 3 pinned seeds; failures: {:?}",
            failures.first()
        ),
    );
}

/// Criterion 3: forward 2-hop exactness and the |P| ceil(log2 |P|) size
/// bound on 500 random shortest paths with 2..=256 vertices.
#[test]
fn acceptance_03_forward_two_hop_exactness() {
    let lens: Vec<(usize, u64)> = {
        let mut s = Stream::new(333);
        (0..500)
            .map(|_| (s.next_range(2, 256) as usize, s.next_u64()))
            .collect()
    };
    let bad: Vec<String> = lens
        .par_iter()
        .filter_map(|&(len, wseed)| {
            let mut s = Stream::new(wseed);
            let weights: Vec<u64> = (0..len - 1).map(|_| s.next_range(1, 50)).collect();
            let g = WeightedDigraph::from_edges(
                len,
                weights.iter().enumerate().map(|(i, &w)| (i, i + 1, w)),
            )
            .unwrap();
            let mut prefix = vec![0u64];
            for &w in &weights {
                prefix.push(prefix.last().unwrap() + w);
            }
            let path = NicePath {
                id: 0,
                vertices: (0..len).collect(),
                prefix_lengths: prefix.clone(),
            };
            let dist = g.apsp();
            let h = forward_shortcut(&path, &dist);
            let bound = len * (len as f64).log2().ceil().max(1.0) as usize;
            if h.len() > bound {
                return Some(format!("len {len}: {} > {bound} edges", h.len()));
            }
            let aug = g.augmented(h.iter().map(|e| e.as_triple()));
            for u in 0..len {
                let d2 = aug.hop_bounded_dist(u, 2);
                for v in (u + 1)..len {
                    if d2[v] != Some(prefix[v] - prefix[u]) {
                        return Some(format!("len {len}: pair ({u},{v}) not exact in 2 hops"));
                    }
                }
            }
            None
        })
        .collect();
    pass_line(
        3,
        bad.is_empty(),
        &format!("500 paths, zero tolerance; failures: {:?}", bad.first()),
    );
}

/// Criterion 4: the weak backward claim, deterministically, on 200
/// random (segment, S, gamma, delta) instances.
#[test]
fn acceptance_04_weak_claim_oracle() {
    let grid = [0.25f64, 0.5, 0.75];
    let bad: Vec<String> = (0..200u64)
        .into_par_iter()
        .filter_map(|inst| {
            let mut s = Stream::new(4000 + inst);
            let n = s.next_range(12, 40) as usize;
            // planted unit chain plus heavy back edges
            let mut edges: Vec<(usize, usize, u64)> =
                (0..n - 1).map(|i| (i, i + 1, 1)).collect();
            for _ in 0..n {
                let u = s.next_range(1, (n - 1) as u64) as usize;
                let v = s.next_below(u as u64) as usize;
                edges.push((u, v, s.next_range(1, 60)));
            }
            let g = WeightedDigraph::from_edges(n, edges).unwrap();
            let dist = g.apsp();
            let path = NicePath {
                id: 0,
                vertices: (0..n).collect(),
                prefix_lengths: (0..n as u64).collect(),
            };
            let a = s.next_below((n - 4) as u64) as usize;
            let b = a + 4 + s.next_below((n - a - 4) as u64) as usize + 1;
            let seg = path.segment(a, b.min(n));
            let seg_len = seg.vertices.len();
            let sample: Vec<usize> = (0..1 + s.next_below(4))
                .map(|_| s.next_below(seg_len as u64) as usize)
                .collect();
            let gamma = grid[s.next_below(3) as usize];
            let delta = grid[s.next_below(3) as usize];
            let out = weak_backward(&seg, &sample, gamma, delta, &dist);

            let seg_path = NicePath {
                id: 0,
                vertices: seg.vertices.to_vec(),
                prefix_lengths: seg.prefix.to_vec(),
            };
            let union = WeightedDigraph::from_edges(
                n,
                path_edges(&seg_path, &dist)
                    .iter()
                    .chain(forward_shortcut_segment(&seg, &dist).iter())
                    .chain(out.iter())
                    .map(|e| e.as_triple()),
            )
            .unwrap();
            let budget = delta * seg.len_weighted() as f64;
            for xpos in 0..seg_len {
                let x = seg.vertices[xpos];
                let d3 = union.hop_bounded_dist(x, 3);
                for ypos in 0..xpos {
                    let y = seg.vertices[ypos];
                    if !sample.contains(&xpos) && !sample.contains(&ypos) {
                        continue;
                    }
                    let Some(d) = dist.get(x, y) else { continue };
                    let bound = (1.0 + gamma) * d as f64 + budget;
                    match d3[y] {
                        Some(got) if got as f64 <= bound + 1e-9 => {}
                        other => {
                            return Some(format!(
                                "inst {inst} pair ({x},{y}): {other:?} vs bound {bound}"
                            ))
                        }
                    }
                }
            }
            None
        })
        .collect();
    pass_line(
        4,
        bad.is_empty(),
        &format!("200 instances, zero tolerance; failures: {:?}", bad.first()),
    );
}

/// A strongly connected host with a planted 33-vertex unit shortest path.
fn planted_host(extra: usize, w_back: u64, seed: u64) -> (WeightedDigraph, NicePath) {
    let mut s = Stream::new(seed);
    let n = 33 + s.next_below(24) as usize;
    let mut edges: Vec<(usize, usize, u64)> = (0..n - 1).map(|i| (i, i + 1, 1)).collect();
    edges.push((n - 1, 0, w_back));
    for _ in 0..extra {
        let u = s.next_range(1, (n - 1) as u64) as usize;
        let v = s.next_below(u as u64) as usize;
        edges.push((u, v, s.next_range(w_back / 2, w_back)));
    }
    let g = WeightedDigraph::from_edges(n, edges).unwrap();
    let path = NicePath {
        id: 0,
        vertices: (0..33).collect(),
        prefix_lengths: (0..33u64).collect(),
    };
    (g, path)
}

/// Criterion 5: backward-subroutine conditional oracle on 100 nice paths in
/// strongly connected graphs; zero tolerance on designated sample hits,
/// >= 99% unconditional pass rate per pinned seed.
#[test]
fn acceptance_05_backward_lemma_oracle() {
    let results: Vec<Result<(usize, usize, f64), String>> = (0..100u64)
        .into_par_iter()
        .map(|inst| {
            let (gamma, delta) = if inst % 2 == 0 { (0.5, 0.5) } else { (0.25, 0.5) };
            let (g, path) = planted_host(40, 200, 5000 + inst);
            let dist = g.apsp();
            let g_aug = g.augmented(
                path_edges(&path, &dist)
                    .iter()
                    .chain(forward_shortcut(&path, &dist).iter())
                    .map(|e| e.as_triple()),
            );
            let b = backward_shortcut(&path, gamma, delta, &dist, 7000 + inst);
            let r = check_backward_lemma(&g_aug, &path, &b, gamma, delta, &dist);
            if !r.conditional_failures.is_empty() {
                return Err(format!(
                    "inst {inst}: conditional failure {:?}",
                    r.conditional_failures[0]
                ));
            }
            if r.unconditional_rate() < 0.99 {
                return Err(format!(
                    "inst {inst}: unconditional rate {:.4}",
                    r.unconditional_rate()
                ));
            }
            Ok((r.obligated, r.conditional_hits, r.unconditional_rate()))
        })
        .collect();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let hits: usize = results
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .map(|&(_, h, _)| h)
        .sum();
    pass_line(
        5,
        failures.is_empty() && hits > 0,
        &format!(
            "100 paths, {hits} designated hits checked, zero conditional tolerance; failures: {:?}",
            failures.first()
        ),
    );
}

/// Criterion 6: vertex-path procedure on 300 random (v, P) instances,
/// eps in {0.25, 0.5}: 3-hop bound and per-pair class-count cap.
#[test]
fn acceptance_06_vertex_path_procedure() {
    let bad: Vec<String> = (0..300u64)
        .into_par_iter()
        .filter_map(|inst| {
            let eps = if inst % 2 == 0 { 0.25 } else { 0.5 };
            let mut s = Stream::new(6000 + inst);
            let n = s.next_range(20, 60) as usize;
            let plen = s.next_range(4, 16) as usize;
            let mut g = WeightedDigraph::new(n).unwrap();
            for i in 0..plen - 1 {
                g.add_edge(i, i + 1, s.next_range(1, 4)).unwrap();
            }
            for _ in 0..3 * n {
                let u = s.next_below(n as u64) as usize;
                let v = s.next_below(n as u64) as usize;
                if u != v {
                    // heavy enough that the chain 0..plen stays shortest
                    let _ = g.add_edge(u, v, s.next_range(60, SUITE_W * 10));
                }
            }
            let dist = g.apsp();
            let vertices: Vec<usize> = (0..plen).collect();
            let mut prefix = vec![0u64];
            for w in vertices.windows(2) {
                prefix.push(prefix.last().unwrap() + dist.get(w[0], w[1]).unwrap());
            }
            let path = NicePath {
                id: 0,
                vertices,
                prefix_lengths: prefix,
            };
            let v = s.next_below(n as u64) as usize;
            let out = vertex_path_hopset(v, &path, eps, &dist);
            if out.len() > per_pair_class_bound(n, g.w_max(), eps) {
                return Some(format!(
                    "inst {inst}: {} edges exceeds class cap",
                    out.len()
                ));
            }
            let aug = g.augmented(
                path_edges(&path, &dist)
                    .iter()
                    .chain(forward_shortcut(&path, &dist).iter())
                    .chain(out.iter())
                    .map(|e| e.as_triple()),
            );
            let d3 = aug.hop_bounded_dist(v, 3);
            for &p in &path.vertices {
                if let Some(d) = dist.get(v, p) {
                    let bound = (1.0 + eps / 2.0) * d as f64 + path.len_weighted() as f64;
                    match d3[p] {
                        Some(got) if got as f64 <= bound + 1e-9 => {}
                        other => {
                            return Some(format!(
                                "inst {inst} (v={v}, p={p}): {other:?} vs bound {bound}"
                            ))
                        }
                    }
                }
            }
            None
        })
        .collect();
    pass_line(
        6,
        bad.is_empty(),
        &format!("300 instances, zero tolerance; failures: {:?}", bad.first()),
    );
}

/// Criterion 7: folklore baseline at eps = 0, n = 500: exact distances
/// within 4 beta log2 n hops, size within 4 (n log2 n / beta)^2.
#[test]
fn acceptance_07_folklore_baseline() {
    let n = 500usize;
    let g = generate(Family::RandomDigraph, n, 4 * n, SUITE_W, 777).unwrap();
    let log_n = (n as f64).log2();
    let mut detail = String::new();
    let mut ok = true;
    for &beta in &[10usize, 20, 40] {
        let h = build_folklore(&g, beta, 1000 + beta as u64, 1.0);
        let hop_cap = ((4.0 * beta as f64 * log_n).ceil() as usize).min(n - 1);
        let r = check_hop_stretch(&g, &h.edges, hop_cap, 0.0, VerifyMode::Full, 1);
        let size_cap = (4.0 * (n as f64 * log_n / beta as f64).powi(2)) as usize;
        let this_ok =
            r.passed() && r.achieved_hopbound <= hop_cap && h.total_edges() <= size_cap;
        ok &= this_ok;
        detail.push_str(&format!(
            "beta {beta}: hopbound {} (cap {hop_cap}), size {} (cap {size_cap}); ",
            r.achieved_hopbound,
            h.total_edges()
        ));
    }
    pass_line(7, ok, &detail);
}

/// Criterion 8: size trend on n = 2000 random digraphs over the beta
/// grid {160, 320, 640} x 3 seeds: medians non-increasing within factor
/// 2, per-kind counts within the measured-constant envelopes.
#[test]
fn acceptance_08_size_trend() {
    let n = 2000usize;
    let g = generate(Family::RandomDigraph, n, 4 * n, 100, 888).unwrap();
    let grid = [160usize, 320, 640];
    let cells: Vec<(usize, u64)> = grid
        .iter()
        .flat_map(|&b| BUILD_SEEDS.iter().map(move |&s| (b, s)))
        .collect();
    let sizes: Vec<(usize, u64, usize, f64, f64, bool)> = cells
        .par_iter()
        .map(|&(beta, seed)| {
            let cfg = BuildConfig::new(beta, SUITE_EPS, seed);
            let (h, _) = build(&g, &cfg).expect("build");
            let r = check_hop_stretch(&g, &h.edges, beta, SUITE_EPS, VerifyMode::Auto, seed);
            let c1 = measured_c1(h.count_of(EdgeKind::Forward), n);
            let c3 = measured_c3(h.count_of(EdgeKind::Backward), n, g.w_max(), SUITE_EPS);
            (beta, seed, h.total_edges(), c1, c3, r.passed())
        })
        .collect();
    let mut ok = true;
    let mut detail = String::new();
    let mut medians = Vec::new();
    for &beta in &grid {
        let mut s: Vec<usize> = sizes
            .iter()
            .filter(|r| r.0 == beta)
            .map(|r| r.2)
            .collect();
        s.sort_unstable();
        medians.push(s[s.len() / 2]);
        detail.push_str(&format!("beta {beta}: median |H| {}; ", s[s.len() / 2]));
    }
    for w in medians.windows(2) {
        if w[1] as f64 > 2.0 * w[0] as f64 {
            ok = false;
        }
    }
    for &(beta, seed, _, c1, c3, verified) in &sizes {
        if c1 > 2.0 || c3 > 64.0 || !verified {
            ok = false;
            detail.push_str(&format!(
                "beta {beta} seed {seed}: c1 {c1:.3} c3 {c3:.3} verified {verified}; "
            ));
        }
    }
    pass_line(8, ok, &detail);
}

/// Criterion 9: shortcut-set baseline preserves the reachability closure
/// on 100 mixed-SCC graphs (BFS closure oracle), zero tolerance.
#[test]
fn acceptance_09_shortcut_closure() {
    let bad: Vec<String> = (0..100u64)
        .into_par_iter()
        .filter_map(|inst| {
            let mut s = Stream::new(9900 + inst);
            let n = s.next_range(40, 160) as usize;
            let family = if inst % 2 == 0 {
                Family::CycleChain
            } else {
                Family::RandomDigraph
            };
            let m = if family == Family::CycleChain { 2 * n } else { 3 * n / 2 };
            let g = generate(family, n, m, SUITE_W, inst).unwrap();
            let h = build_shortcut_set(&g, 8, inst, 1.0);
            let before = g.reachability();
            let after = h.augment(&g).reachability();
            if before == after {
                None
            } else {
                Some(format!("inst {inst} ({}, n={n}): closure changed", family.label()))
            }
        })
        .collect();
    pass_line(
        9,
        bad.is_empty(),
        &format!("100 graphs, zero tolerance; failures: {:?}", bad.first()),
    );
}

/// Criterion 10: witness extractor on n = 300 strongly connected builds:
/// 100% of walks edge-realizable in G+H, >= 95% meeting both the hop and
/// stretch bounds. The host is a unit-weight directed cycle with heavy
/// chords, so roads between far pairs genuinely exceed beta. A second
/// build thins the per-level path samples (small c_p) so the anchors
/// spread out and the phase walk with its shortcut cases actually runs.
#[test]
fn acceptance_10_witness_extractor() {
    let n = 300usize;
    let mut g = WeightedDigraph::new(n).unwrap();
    for i in 0..n {
        g.add_edge(i, (i + 1) % n, 1).unwrap();
    }
    let mut s = Stream::new(4242);
    for _ in 0..20 {
        let a = s.next_below(n as u64) as usize;
        let b = s.next_below(n as u64) as usize;
        if a != b {
            // heavier than any cyclic distance: never on a shortest path
            let _ = g.add_edge(a, b, 300 + s.next_below(200));
        }
    }
    let beta = BuildConfig::default_beta(n);
    let dist = g.apsp();

    let mut s = Stream::new(1010);
    let pairs: Vec<(usize, usize)> = std::iter::from_fn(|| {
        Some((
            s.next_below(n as u64) as usize,
            s.next_below(n as u64) as usize,
        ))
    })
    .filter(|&(a, b)| a != b)
    .take(50)
    .collect();

    let mut ok = true;
    let mut detail = String::new();
    for (label, c_p) in [("default", 24.0), ("thin-paths", 0.05)] {
        let cfg = BuildConfig {
            regime: Regime::Small,
            c_p,
            ..BuildConfig::new(beta, SUITE_EPS, 515)
        };
        let (h, aux) = build_hopset_small_beta(&g, &cfg).expect("build");
        let union = h.augment(&g);
        let outcomes: Vec<_> = pairs
            .par_iter()
            .map(|&(s, t)| extract_witness_path(&g, &h, &aux, &dist, s, t).expect("reachable"))
            .collect();
        let realizable = outcomes
            .iter()
            .filter(|o| o.realizable && o.walk.validate_in(&union))
            .count();
        let both_bounds = outcomes.iter().filter(|o| o.hop_ok && o.stretch_ok).count();
        let nontrivial = outcomes.iter().filter(|o| !o.trivial).count();
        ok &= realizable == 50 && both_bounds * 100 >= 95 * 50;
        detail.push_str(&format!(
            "{label} build: {nontrivial} non-trivial, {realizable}/50 realizable, {both_bounds}/50 within bounds; "
        ));
    }
    pass_line(10, ok, &detail);
}
