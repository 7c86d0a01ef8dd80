//! End-to-end hopset assembly.
//!
//! Small-beta pipeline: APSP -> weighted closure -> nice paths -> forward
//! shortcuts per path (type 1, including the path's own closure edges so
//! every 2-hop route exists in G + H) -> hierarchical sampling with
//! vertex-path edges (type 2) -> backward shortcutting per path with
//! gamma = eps/2, delta = eps (type 3).
//!
//! Large-beta pipeline: sample vertices with probability
//! q = min(1, c_q * log2(n) * sqrt(n) / beta^1.5), take the weighted
//! closure restricted to the sample, keep its edges (kind closure), and
//! run the small-beta pipeline on that graph with
//! beta' = max(1, floor(n'^(1/3) / log2 n')).

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{DistanceMatrix, GraphError, WeightedDigraph};
use crate::hierarchy::{build_hierarchy, connect_levels, SamplingHierarchy};
use crate::path_hopset::{
    backward_shortcut, dedup_edges, forward_shortcut, path_edges, BackwardShortcut, EdgeKind,
    HopsetEdge,
};
use crate::pathset::{build_nice_paths, nice_hop_target, NicePathCollection};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Auto,
    Small,
    Large,
}

impl std::str::FromStr for Regime {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Regime::Auto),
            "small" => Ok(Regime::Small),
            "large" => Ok(Regime::Large),
            other => Err(format!("unknown regime '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BuildConfig {
    pub beta: usize,
    pub eps: f64,
    pub seed: u64,
    pub c_v: f64,
    pub c_p: f64,
    /// Sampling constant of the large-beta reduction.
    pub c_q: f64,
    pub regime: Regime,
}

impl BuildConfig {
    pub fn new(beta: usize, eps: f64, seed: u64) -> Self {
        BuildConfig {
            beta,
            eps,
            seed,
            c_v: 24.0,
            c_p: 24.0,
            c_q: 1.0,
            regime: Regime::Auto,
        }
    }

    /// Default hopbound floor: beta = ceil(20 * log2 n).
    pub fn default_beta(n: usize) -> usize {
        (20.0 * (n.max(2) as f64).log2()).ceil() as usize
    }

    fn validate(&self) -> Result<(), GraphError> {
        if self.beta == 0 {
            return Err(GraphError::TooLarge("beta must be >= 1".into()));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(GraphError::TooLarge(format!(
                "eps {} outside (0,1)",
                self.eps
            )));
        }
        Ok(())
    }
}

/// A built hopset with its parameters and per-kind accounting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Hopset {
    pub n: usize,
    pub m: usize,
    pub w_max: u64,
    pub beta: usize,
    pub eps: f64,
    pub seed: u64,
    pub regime: String,
    pub runtime_ms: u64,
    pub edges: Vec<HopsetEdge>,
}

impl Hopset {
    pub fn total_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn counts_by_kind(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for e in &self.edges {
            *counts.entry(e.kind.label().to_string()).or_insert(0) += 1;
        }
        counts
    }

    pub fn count_of(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    /// G plus this hopset's edges.
    pub fn augment(&self, g: &WeightedDigraph) -> WeightedDigraph {
        g.augmented(self.edges.iter().map(|e| e.as_triple()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&HopsetFile::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Hopset, serde_json::Error> {
        let file: HopsetFile = serde_json::from_str(s)?;
        Ok(file.into())
    }
}

/// On-disk form: compact edge tuples plus the per-kind counts.
#[derive(Debug, Serialize, Deserialize)]
struct HopsetFile {
    n: usize,
    m: usize,
    #[serde(rename = "W")]
    w_max: u64,
    beta: usize,
    eps: f64,
    seed: u64,
    regime: String,
    counts_by_kind: BTreeMap<String, usize>,
    total_edges: usize,
    runtime_ms: u64,
    edges: Vec<(usize, usize, u64, EdgeKind)>,
}

impl From<&Hopset> for HopsetFile {
    fn from(h: &Hopset) -> Self {
        HopsetFile {
            n: h.n,
            m: h.m,
            w_max: h.w_max,
            beta: h.beta,
            eps: h.eps,
            seed: h.seed,
            regime: h.regime.clone(),
            counts_by_kind: h.counts_by_kind(),
            total_edges: h.total_edges(),
            runtime_ms: h.runtime_ms,
            edges: h
                .edges
                .iter()
                .map(|e| (e.tail, e.head, e.weight, e.kind))
                .collect(),
        }
    }
}

impl From<HopsetFile> for Hopset {
    fn from(f: HopsetFile) -> Self {
        Hopset {
            n: f.n,
            m: f.m,
            w_max: f.w_max,
            beta: f.beta,
            eps: f.eps,
            seed: f.seed,
            regime: f.regime,
            runtime_ms: f.runtime_ms,
            edges: f
                .edges
                .into_iter()
                .map(|(tail, head, weight, kind)| HopsetEdge {
                    tail,
                    head,
                    weight,
                    kind,
                })
                .collect(),
        }
    }
}

/// Everything the witness extractor needs to replay a small-beta build.
#[derive(Debug, Clone)]
pub struct BuildAux {
    pub config: BuildConfig,
    pub h_target: usize,
    pub paths: NicePathCollection,
    pub hierarchy: SamplingHierarchy,
    /// Midpoint forward shortcuts per path (the path's own edges excluded).
    pub forward: Vec<Vec<HopsetEdge>>,
    pub backward: Vec<BackwardShortcut>,
}

impl BuildAux {
    /// G_aug: the graph plus every nice path's edges and forward shortcuts.
    pub fn g_aug(&self, g: &WeightedDigraph, dist: &DistanceMatrix) -> WeightedDigraph {
        let mut triples = Vec::new();
        for p in &self.paths.paths {
            triples.extend(path_edges(p, dist).iter().map(|e| e.as_triple()));
        }
        for fw in &self.forward {
            triples.extend(fw.iter().map(|e| e.as_triple()));
        }
        g.augmented(triples)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&AuxFile {
            config: self.config,
            h_target: self.h_target,
            paths: self.paths.clone(),
            hierarchy: self.hierarchy.clone(),
        })
        .expect("serializable")
    }

    /// Rebuild from the slim on-disk form: the forward and backward edge
    /// sets are deterministic functions of the pinned seeds, so they are
    /// recomputed rather than stored.
    pub fn from_json(s: &str, dist: &DistanceMatrix) -> Result<BuildAux, serde_json::Error> {
        let file: AuxFile = serde_json::from_str(s)?;
        let forward = file
            .paths
            .paths
            .par_iter()
            .map(|p| forward_shortcut(p, dist))
            .collect();
        let backward = file
            .paths
            .paths
            .par_iter()
            .map(|p| {
                backward_shortcut(
                    p,
                    file.config.eps / 2.0,
                    file.config.eps,
                    dist,
                    rng::derive2(file.config.seed, rng::tag::BACKWARD, p.id as u64),
                )
            })
            .collect();
        Ok(BuildAux {
            config: file.config,
            h_target: file.h_target,
            paths: file.paths,
            hierarchy: file.hierarchy,
            forward,
            backward,
        })
    }
}

/// Slim serialized form of [`BuildAux`].
#[derive(Debug, Serialize, Deserialize)]
struct AuxFile {
    config: BuildConfig,
    h_target: usize,
    paths: NicePathCollection,
    hierarchy: SamplingHierarchy,
}

/// Dispatch on the regime: small when beta <= n^(1/3), large otherwise.
pub fn build(g: &WeightedDigraph, cfg: &BuildConfig) -> Result<(Hopset, Option<BuildAux>), GraphError> {
    cfg.validate()?;
    let resolved = match cfg.regime {
        Regime::Small => Regime::Small,
        Regime::Large => Regime::Large,
        Regime::Auto => {
            if (cfg.beta as f64) <= (g.n() as f64).cbrt() {
                Regime::Small
            } else {
                Regime::Large
            }
        }
    };
    match resolved {
        Regime::Small => {
            let (h, aux) = build_hopset_small_beta(g, cfg)?;
            Ok((h, Some(aux)))
        }
        _ => Ok((build_hopset_large_beta(g, cfg)?, None)),
    }
}

/// The full nice-path pipeline.
pub fn build_hopset_small_beta(
    g: &WeightedDigraph,
    cfg: &BuildConfig,
) -> Result<(Hopset, BuildAux), GraphError> {
    cfg.validate()?;
    let start = Instant::now();
    let n = g.n();
    let recommended = BuildConfig::default_beta(n);
    if cfg.beta < recommended {
        log::warn!(
            "beta {} below the recommended floor 20*log2(n) = {recommended}; building anyway",
            cfg.beta
        );
    }

    let dist = g.apsp();
    let gstar = g.closure_from(&dist);
    let h_target = nice_hop_target(n, cfg.beta, cfg.eps);
    let paths = build_nice_paths(&gstar, h_target, rng::derive(cfg.seed, rng::tag::PATHS));
    drop(gstar);

    let mut edges: Vec<HopsetEdge> = Vec::new();
    let forward: Vec<Vec<HopsetEdge>> = paths
        .paths
        .par_iter()
        .map(|p| forward_shortcut(p, &dist))
        .collect();
    for p in &paths.paths {
        edges.extend(path_edges(p, &dist));
    }
    for fw in &forward {
        edges.extend(fw.iter().copied());
    }

    let hierarchy = build_hierarchy(
        n,
        cfg.beta,
        &paths,
        cfg.c_v,
        cfg.c_p,
        rng::derive(cfg.seed, rng::tag::HIERARCHY),
    );
    edges.extend(connect_levels(&hierarchy, &paths, cfg.eps, &dist));

    let gamma = cfg.eps / 2.0;
    let backward: Vec<BackwardShortcut> = paths
        .paths
        .par_iter()
        .map(|p| {
            backward_shortcut(
                p,
                gamma,
                cfg.eps,
                &dist,
                rng::derive2(cfg.seed, rng::tag::BACKWARD, p.id as u64),
            )
        })
        .collect();
    for b in &backward {
        edges.extend(b.edges.iter().copied());
    }

    let hopset = Hopset {
        n,
        m: g.m(),
        w_max: g.w_max(),
        beta: cfg.beta,
        eps: cfg.eps,
        seed: cfg.seed,
        regime: "small".into(),
        runtime_ms: start.elapsed().as_millis() as u64,
        edges: dedup_edges(edges),
    };
    let aux = BuildAux {
        config: *cfg,
        h_target,
        paths,
        hierarchy,
        forward,
        backward,
    };
    Ok((hopset, aux))
}

/// Sampling rate of the large-beta reduction.
pub fn large_beta_rate(n: usize, beta: usize, c_q: f64) -> f64 {
    let nf = n.max(2) as f64;
    (c_q * nf.log2() * nf.sqrt() / (beta as f64).powf(1.5)).min(1.0)
}

/// Inner hopbound for the recursive small-beta call.
pub fn large_beta_inner(n_prime: usize) -> usize {
    if n_prime < 2 {
        return 1;
    }
    let nf = n_prime as f64;
    ((nf.cbrt() / nf.log2()).floor() as usize).max(1)
}

pub fn build_hopset_large_beta(
    g: &WeightedDigraph,
    cfg: &BuildConfig,
) -> Result<Hopset, GraphError> {
    cfg.validate()?;
    let start = Instant::now();
    let n = g.n();
    let seed_large = rng::derive(cfg.seed, rng::tag::LARGE_BETA);
    let q = large_beta_rate(n, cfg.beta, cfg.c_q);
    let sample: Vec<usize> = (0..n)
        .filter(|&v| rng::unit(seed_large, &[v as u64]) < q)
        .collect();
    let n_prime = sample.len();

    let mut edges: Vec<HopsetEdge> = Vec::new();
    if n_prime >= 2 {
        // weighted closure restricted to the sample
        let rows: Vec<Vec<Option<u64>>> = sample
            .par_iter()
            .map(|&s| g.sssp_exact(s).expect("sampled vertex in range"))
            .collect();
        let mut gprime = WeightedDigraph::new(n_prime)?;
        for (i, row) in rows.iter().enumerate() {
            for (j, &t) in sample.iter().enumerate() {
                if i == j {
                    continue;
                }
                if let Some(d) = row[t] {
                    gprime.add_edge(i, j, d)?;
                    edges.push(HopsetEdge {
                        tail: sample[i],
                        head: t,
                        weight: d,
                        kind: EdgeKind::Closure,
                    });
                }
            }
        }
        let inner_cfg = BuildConfig {
            beta: large_beta_inner(n_prime),
            eps: cfg.eps,
            seed: rng::derive2(cfg.seed, rng::tag::LARGE_BETA, 1),
            c_v: cfg.c_v,
            c_p: cfg.c_p,
            c_q: cfg.c_q,
            regime: Regime::Small,
        };
        let (inner, _) = build_hopset_small_beta(&gprime, &inner_cfg)?;
        edges.extend(inner.edges.into_iter().map(|e| HopsetEdge {
            tail: sample[e.tail],
            head: sample[e.head],
            weight: e.weight,
            kind: e.kind,
        }));
    }

    Ok(Hopset {
        n,
        m: g.m(),
        w_max: g.w_max(),
        beta: cfg.beta,
        eps: cfg.eps,
        seed: cfg.seed,
        regime: "large".into(),
        runtime_ms: start.elapsed().as_millis() as u64,
        edges: dedup_edges(edges),
    })
}

/// Folklore baseline: exact-distance edges between all reachable pairs of
/// a vertex sample drawn with probability min(1, c * log2(n) / beta).
pub fn build_folklore(g: &WeightedDigraph, beta: usize, seed: u64, c: f64) -> Hopset {
    let start = Instant::now();
    let n = g.n();
    let seed_f = rng::derive(seed, rng::tag::FOLKLORE);
    let p = (c * (n.max(2) as f64).log2() / beta as f64).min(1.0);
    let sample: Vec<usize> = (0..n)
        .filter(|&v| rng::unit(seed_f, &[v as u64]) < p)
        .collect();
    let in_sample: Vec<bool> = {
        let mut mask = vec![false; n];
        for &v in &sample {
            mask[v] = true;
        }
        mask
    };
    let edges: Vec<HopsetEdge> = sample
        .par_iter()
        .flat_map_iter(|&u| {
            let row = g.sssp_exact(u).expect("in range");
            let in_sample = &in_sample;
            (0..n).filter_map(move |v| {
                if v == u || !in_sample[v] {
                    return None;
                }
                row[v].map(|d| HopsetEdge {
                    tail: u,
                    head: v,
                    weight: d,
                    kind: EdgeKind::Folklore,
                })
            })
        })
        .collect();
    Hopset {
        n,
        m: g.m(),
        w_max: g.w_max(),
        beta,
        eps: 0.0,
        seed,
        regime: "folklore".into(),
        runtime_ms: start.elapsed().as_millis() as u64,
        edges: dedup_edges(edges),
    }
}

/// Shortcut-set baseline: contract SCCs, add a bidirectional star per
/// component, then folklore on the condensation. All edges carry exact
/// distances so the output is also hopset-compatible.
pub fn build_shortcut_set(g: &WeightedDigraph, beta: usize, seed: u64, c: f64) -> Hopset {
    let start = Instant::now();
    let n = g.n();
    let comps = g.tarjan_scc();
    let reps: Vec<usize> = comps.iter().map(|c| c[0]).collect();
    let rev = g.reversed();

    let mut edges: Vec<HopsetEdge> = Vec::new();
    for (ci, comp) in comps.iter().enumerate() {
        if comp.len() < 2 {
            continue;
        }
        let rep = reps[ci];
        let from_rep = g.sssp_exact(rep).expect("in range");
        let to_rep = rev.sssp_exact(rep).expect("in range");
        for &v in comp {
            if v == rep {
                continue;
            }
            edges.push(HopsetEdge {
                tail: rep,
                head: v,
                weight: from_rep[v].expect("same SCC"),
                kind: EdgeKind::SccStar,
            });
            edges.push(HopsetEdge {
                tail: v,
                head: rep,
                weight: to_rep[v].expect("same SCC"),
                kind: EdgeKind::SccStar,
            });
        }
    }

    // folklore over condensation nodes, realized on representatives
    let nc = comps.len();
    let seed_s = rng::derive(seed, rng::tag::SHORTCUT);
    let p = (c * (nc.max(2) as f64).log2() / beta as f64).min(1.0);
    let sampled: Vec<usize> = (0..nc)
        .filter(|&ci| rng::unit(seed_s, &[ci as u64]) < p)
        .collect();
    let rep_in_sample: Vec<usize> = sampled.iter().map(|&ci| reps[ci]).collect();
    for &u in &rep_in_sample {
        let row = g.sssp_exact(u).expect("in range");
        for &v in &rep_in_sample {
            if u == v {
                continue;
            }
            if let Some(d) = row[v] {
                edges.push(HopsetEdge {
                    tail: u,
                    head: v,
                    weight: d,
                    kind: EdgeKind::Folklore,
                });
            }
        }
    }

    Hopset {
        n,
        m: g.m(),
        w_max: g.w_max(),
        beta,
        eps: 0.0,
        seed,
        regime: "shortcut".into(),
        runtime_ms: start.elapsed().as_millis() as u64,
        edges: dedup_edges(edges),
    }
}

/// Measured constant of the type-1 invariant count1 <= c1 * n * log2 n.
pub fn measured_c1(count1: usize, n: usize) -> f64 {
    count1 as f64 / ((n.max(2) as f64) * (n.max(2) as f64).log2())
}

/// Measured constant of the type-3 invariant
/// count3 <= c3 * n * log^2(nW) * log^3(n) / eps^2.
pub fn measured_c3(count3: usize, n: usize, w_max: u64, eps: f64) -> f64 {
    let nw = (n.max(2) as f64) * w_max.max(1) as f64;
    let log_nw = nw.log2().max(1.0);
    let log_n = (n.max(2) as f64).log2();
    count3 as f64 / ((n as f64) * log_nw * log_nw * log_n.powi(3) / (eps * eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;

    fn random_graph(n: usize, m: usize, w_max: u64, seed: u64) -> WeightedDigraph {
        let mut s = Stream::new(seed);
        let mut g = WeightedDigraph::new(n).unwrap();
        let mut added = 0;
        while added < m {
            let u = s.next_below(n as u64) as usize;
            let v = s.next_below(n as u64) as usize;
            if u == v {
                continue;
            }
            g.add_edge(u, v, s.next_range(1, w_max)).unwrap();
            added += 1;
        }
        g
    }

    fn assert_distances_preserved(g: &WeightedDigraph, h: &Hopset) {
        let before = g.apsp();
        let after = h.augment(g).apsp();
        for u in 0..g.n() {
            for v in 0..g.n() {
                assert_eq!(before.get(u, v), after.get(u, v), "pair ({u},{v})");
            }
        }
        for e in &h.edges {
            assert_eq!(Some(e.weight), before.get(e.tail, e.head));
        }
    }

    #[test]
    fn unit_path_build_preserves_everything() {
        let g = WeightedDigraph::from_edges(10, (0..9).map(|i| (i, i + 1, 1))).unwrap();
        let cfg = BuildConfig::new(8, 0.5, 1);
        let (h, aux) = build_hopset_small_beta(&g, &cfg).unwrap();
        assert_distances_preserved(&g, &h);
        assert!(aux.h_target >= 1);
        // no backward reachability: stretch at beta is exactly 1 for pairs
        // reachable within beta hops of the augmented graph
        let aug = h.augment(&g);
        let before = g.apsp();
        for u in 0..10 {
            let d = aug.hop_bounded_dist(u, 9);
            for v in 0..10 {
                assert_eq!(d[v], before.get(u, v));
            }
        }
    }

    #[test]
    fn oversized_h_target_yields_trivial_hopset() {
        // a 3-vertex path cannot host an 8-hop nice path;
        // eps*beta/(24 log2 n) > n forces an empty collection
        let g = WeightedDigraph::from_edges(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        let dist = g.apsp();
        let gstar = g.closure_from(&dist);
        let paths = build_nice_paths(&gstar, 8, 0);
        assert!(paths.paths.is_empty());
        let cfg = BuildConfig {
            beta: 2000,
            eps: 0.9,
            seed: 0,
            c_v: 24.0,
            c_p: 24.0,
            c_q: 1.0,
            regime: Regime::Small,
        };
        let (h, aux) = build_hopset_small_beta(&g, &cfg).unwrap();
        assert!(aux.paths.paths.is_empty() || aux.h_target <= 2);
        assert_distances_preserved(&g, &h);
    }

    #[test]
    fn small_build_on_random_graph_is_deterministic() {
        let g = random_graph(40, 150, 9, 7);
        let cfg = BuildConfig::new(BuildConfig::default_beta(40), 0.5, 42);
        let (h1, _) = build_hopset_small_beta(&g, &cfg).unwrap();
        let (h2, _) = build_hopset_small_beta(&g, &cfg).unwrap();
        assert_eq!(h1.edges, h2.edges);
        assert_distances_preserved(&g, &h1);
        // type-1 envelope: path edges + midpoint shortcuts
        let c1 = measured_c1(h1.count_of(EdgeKind::Forward), 40);
        assert!(c1 <= 2.0, "c1 = {c1}");
    }

    #[test]
    fn large_beta_clamps_to_full_closure() {
        // tiny beta^(3/2) relative to sqrt(n)*log(n): q clamps to 1
        let g = random_graph(12, 40, 5, 3);
        let cfg = BuildConfig {
            beta: 3,
            eps: 0.5,
            seed: 9,
            c_v: 24.0,
            c_p: 24.0,
            c_q: 1.0,
            regime: Regime::Large,
        };
        assert_eq!(large_beta_rate(12, 3, 1.0), 1.0);
        let h = build_hopset_large_beta(&g, &cfg).unwrap();
        let dist = g.apsp();
        // every reachable pair appears as an edge
        for u in 0..12 {
            for v in 0..12 {
                if u == v {
                    continue;
                }
                if let Some(d) = dist.get(u, v) {
                    assert!(h
                        .edges
                        .iter()
                        .any(|e| e.tail == u && e.head == v && e.weight == d));
                }
            }
        }
        assert_distances_preserved(&g, &h);
    }

    #[test]
    fn large_beta_sample_size_tracks_rate() {
        let g = random_graph(400, 1600, 8, 21);
        let cfg = BuildConfig {
            beta: 60,
            eps: 0.5,
            seed: 5,
            c_v: 24.0,
            c_p: 24.0,
            c_q: 1.0,
            regime: Regime::Large,
        };
        let q = large_beta_rate(400, 60, 1.0);
        assert!(q < 1.0);
        let h = build_hopset_large_beta(&g, &cfg).unwrap();
        // recover the sample size from the closure-kind tails
        let mut tails: Vec<usize> = h
            .edges
            .iter()
            .filter(|e| e.kind == EdgeKind::Closure)
            .flat_map(|e| [e.tail, e.head])
            .collect();
        tails.sort_unstable();
        tails.dedup();
        let n_prime = tails.len() as f64;
        let expect = q * 400.0;
        let sigma = (400.0 * q * (1.0 - q)).sqrt().max(1.0);
        assert!(
            (n_prime - expect).abs() <= 5.0 * sigma,
            "n' = {n_prime}, expected {expect}"
        );
    }

    #[test]
    fn folklore_counts_and_exactness() {
        let g = random_graph(100, 500, 10, 11);
        let h = build_folklore(&g, 10, 77, 1.0);
        let p = ((100f64).log2() / 10.0).min(1.0);
        let expect = p * 100.0;
        let mut members: Vec<usize> = h.edges.iter().flat_map(|e| [e.tail, e.head]).collect();
        members.sort_unstable();
        members.dedup();
        let s = members.len() as f64;
        let sigma = (100.0 * p * (1.0 - p)).sqrt();
        assert!((s - expect).abs() <= 5.0 * sigma, "|S| = {s}, expected {expect}");
        assert!(h.total_edges() <= (s as usize).pow(2));
        assert_distances_preserved(&g, &h);
    }

    #[test]
    fn folklore_tiny_threshold_can_be_empty() {
        let g = random_graph(20, 40, 5, 13);
        // beta huge: threshold ~ log2(20)/10000
        let h = build_folklore(&g, 10_000, 5, 1.0);
        assert!(h.total_edges() <= 1);
    }

    #[test]
    fn shortcut_on_dag_has_no_stars() {
        // layered DAG: all SCCs are singletons
        let g = WeightedDigraph::from_edges(
            8,
            [
                (0, 2, 1),
                (0, 3, 2),
                (1, 3, 1),
                (2, 4, 1),
                (3, 5, 3),
                (4, 6, 1),
                (5, 7, 2),
            ],
        )
        .unwrap();
        let h = build_shortcut_set(&g, 4, 3, 1.0);
        assert_eq!(h.count_of(EdgeKind::SccStar), 0);
        assert_distances_preserved(&g, &h);
    }

    #[test]
    fn shortcut_single_scc_star() {
        let g = WeightedDigraph::from_edges(
            5,
            (0..5).map(|i| (i, (i + 1) % 5, 2)),
        )
        .unwrap();
        let h = build_shortcut_set(&g, 4, 3, 1.0);
        // one star: 2 edges per non-representative vertex
        assert_eq!(h.count_of(EdgeKind::SccStar), 8);
        assert_distances_preserved(&g, &h);
        // closure unchanged and short reachability via the star
        let aug = h.augment(&g);
        for u in 0..5 {
            let d2 = aug.hop_bounded_dist(u, 2);
            for v in 0..5 {
                assert!(d2[v].is_some(), "({u},{v}) not covered in 2 hops");
            }
        }
    }

    #[test]
    fn shortcut_preserves_reachability_closure() {
        for seed in 0..4u64 {
            let g = random_graph(60, 150, 6, 900 + seed);
            let h = build_shortcut_set(&g, 8, seed, 1.0);
            let before = g.reachability();
            let after = h.augment(&g).reachability();
            assert_eq!(before, after, "seed {seed}");
        }
    }

    #[test]
    fn auto_regime_dispatch() {
        let g = random_graph(30, 90, 5, 1);
        // n^(1/3) ~ 3.1: beta 3 -> small, beta 8 -> large
        let (h, aux) = build(&g, &BuildConfig::new(3, 0.5, 1)).unwrap();
        assert_eq!(h.regime, "small");
        assert!(aux.is_some());
        let (h, aux) = build(&g, &BuildConfig::new(8, 0.5, 1)).unwrap();
        assert_eq!(h.regime, "large");
        assert!(aux.is_none());
    }

    #[test]
    fn bad_config_is_rejected() {
        let g = random_graph(10, 20, 5, 1);
        assert!(build(&g, &BuildConfig::new(0, 0.5, 1)).is_err());
        assert!(build(&g, &BuildConfig::new(5, 0.0, 1)).is_err());
        assert!(build(&g, &BuildConfig::new(5, 1.0, 1)).is_err());
    }

    #[test]
    fn aux_roundtrip_recomputes_edge_sets() {
        let g = random_graph(30, 120, 6, 8);
        let cfg = BuildConfig::new(BuildConfig::default_beta(30), 0.5, 77);
        let (_, aux) = build_hopset_small_beta(&g, &cfg).unwrap();
        let dist = g.apsp();
        let restored = BuildAux::from_json(&aux.to_json(), &dist).unwrap();
        assert_eq!(restored.paths, aux.paths);
        assert_eq!(restored.forward, aux.forward);
        for (a, b) in restored.backward.iter().zip(aux.backward.iter()) {
            assert_eq!(a.edges, b.edges);
        }
    }

    #[test]
    fn hopset_json_roundtrip() {
        let g = random_graph(25, 80, 7, 15);
        let (h, _) = build(&g, &BuildConfig::new(BuildConfig::default_beta(25), 0.5, 2)).unwrap();
        let h2 = Hopset::from_json(&h.to_json()).unwrap();
        assert_eq!(h.edges, h2.edges);
        assert_eq!(h.counts_by_kind(), h2.counts_by_kind());
        assert_eq!(h.beta, h2.beta);
    }
}
