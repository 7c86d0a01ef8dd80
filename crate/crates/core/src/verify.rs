//! Oracle certification of hopset contracts.
//!
//! The contract-level certificate is the hop-bounded DP oracle: for every
//! checked pair, the minimum length over <= beta-hop walks in G + H is
//! compared against (1+eps) times the true distance. Full-pair checks run
//! up to a vertex cap; larger graphs verify a seeded pair sample.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{DistanceMatrix, WeightedDigraph};
use crate::path_hopset::{BackwardShortcut, HopsetEdge};
use crate::pathset::NicePath;
use crate::rng;

/// Default cap on full n^2-pair verification.
pub const FULL_PAIR_CAP: usize = 300;
/// Sampled mode draws this many pairs per vertex.
pub const SAMPLE_PAIRS_PER_VERTEX: usize = 10;

/// (source, targets): None means every other vertex.
type SourceTargets = (usize, Option<Vec<usize>>);
/// (u, v, expected, observed) mismatch rows.
type PairMismatch = (usize, usize, Option<u64>, Option<u64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// All ordered pairs when n <= cap, otherwise a seeded sample.
    Auto,
    Full,
    Sample(usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairFailure {
    pub u: usize,
    pub v: usize,
    /// (1+eps) * dist(u,v)
    pub required: f64,
    /// best <= beta-hop length found, None when no such walk exists
    pub observed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub beta: usize,
    pub eps: f64,
    pub mode: String,
    pub pairs_checked: usize,
    pub max_stretch: f64,
    /// min beta' such that every checked reachable pair has a
    /// <= beta'-hop (1+eps)-approximate path; n when some pair never
    /// certifies.
    pub achieved_hopbound: usize,
    pub distance_preservation: bool,
    pub failures: Vec<PairFailure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.distance_preservation && self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Per-edge weight check plus dist(G+H) == dist(G) on all pairs (small n)
/// or a seeded pair sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreservationReport {
    pub pairs_checked: usize,
    pub edge_failures: Vec<(usize, usize, u64, Option<u64>)>,
    pub pair_failures: Vec<(usize, usize, Option<u64>, Option<u64>)>,
}

impl PreservationReport {
    pub fn passed(&self) -> bool {
        self.edge_failures.is_empty() && self.pair_failures.is_empty()
    }
}

pub fn check_distance_preservation(
    g: &WeightedDigraph,
    edges: &[HopsetEdge],
    mode: VerifyMode,
    seed: u64,
) -> PreservationReport {
    let n = g.n();
    let aug = g.augmented(edges.iter().map(|e| e.as_triple()));

    // group hopset edges by tail; one Dijkstra per distinct tail
    let mut tails: Vec<usize> = edges.iter().map(|e| e.tail).collect();
    tails.sort_unstable();
    tails.dedup();
    let edge_failures: Vec<(usize, usize, u64, Option<u64>)> = tails
        .par_iter()
        .flat_map_iter(|&u| {
            let row = g.sssp_exact(u).expect("in range");
            edges
                .iter()
                .filter(|e| e.tail == u)
                .filter(|e| row[e.head] != Some(e.weight))
                .map(|e| (e.tail, e.head, e.weight, row[e.head]))
                .collect::<Vec<_>>()
        })
        .collect();

    let sources: Vec<SourceTargets> = match mode {
        VerifyMode::Full => (0..n).map(|s| (s, None)).collect(),
        VerifyMode::Auto if n <= FULL_PAIR_CAP => (0..n).map(|s| (s, None)).collect(),
        _ => {
            let k = match mode {
                VerifyMode::Sample(k) => k,
                _ => SAMPLE_PAIRS_PER_VERTEX * n,
            };
            sample_pairs(n, k, seed)
        }
    };

    let results: Vec<(usize, Vec<PairMismatch>)> = sources
        .par_iter()
        .map(|(s, targets)| {
            let before = g.sssp_exact(*s).expect("in range");
            let after = aug.sssp_exact(*s).expect("in range");
            let mut bad = Vec::new();
            let mut checked = 0usize;
            let mut check = |v: usize| {
                checked += 1;
                if before[v] != after[v] {
                    bad.push((*s, v, before[v], after[v]));
                }
            };
            match targets {
                None => (0..n).filter(|v| v != s).for_each(&mut check),
                Some(ts) => ts.iter().copied().for_each(&mut check),
            }
            (checked, bad)
        })
        .collect();

    let pairs_checked = results.iter().map(|(c, _)| c).sum();
    let pair_failures = results.into_iter().flat_map(|(_, b)| b).collect();
    PreservationReport {
        pairs_checked,
        edge_failures,
        pair_failures,
    }
}

/// Seeded sample of k distinct ordered pairs, grouped by source.
fn sample_pairs(n: usize, k: usize, seed: u64) -> Vec<SourceTargets> {
    let seed = rng::derive(seed, rng::tag::VERIFY_SAMPLE);
    let k = k.min(n * n.saturating_sub(1));
    let mut chosen = std::collections::HashSet::with_capacity(k);
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut s = rng::Stream::new(seed);
    while chosen.len() < k {
        let u = s.next_below(n as u64) as usize;
        let v = s.next_below(n as u64) as usize;
        if u == v || !chosen.insert((u, v)) {
            continue;
        }
        by_source[u].push(v);
    }
    by_source
        .into_iter()
        .enumerate()
        .filter(|(_, ts)| !ts.is_empty())
        .map(|(u, mut ts)| {
            ts.sort_unstable();
            (u, Some(ts))
        })
        .collect()
}

/// Certify the (beta, eps) contract.
///
/// Per source the layered DP runs to convergence (capped at n-1 layers),
/// recording for each target the first layer whose value drops within
/// (1+eps) of the true distance; the layer-beta snapshot gives the
/// stretch at the requested hopbound, and the maximum recorded layer is
/// the achieved hopbound.
pub fn check_hop_stretch(
    g: &WeightedDigraph,
    edges: &[HopsetEdge],
    beta: usize,
    eps: f64,
    mode: VerifyMode,
    seed: u64,
) -> VerificationReport {
    let n = g.n();
    let aug = g.augmented(edges.iter().map(|e| e.as_triple()));
    let (sources, mode_label): (Vec<SourceTargets>, &str) = match mode {
        VerifyMode::Full => ((0..n).map(|s| (s, None)).collect(), "full"),
        VerifyMode::Auto if n <= FULL_PAIR_CAP => ((0..n).map(|s| (s, None)).collect(), "full"),
        VerifyMode::Sample(k) => (sample_pairs(n, k, seed), "sampled"),
        VerifyMode::Auto => (sample_pairs(n, SAMPLE_PAIRS_PER_VERTEX * n, seed), "sampled"),
    };

    struct SourceResult {
        pairs: usize,
        max_stretch: f64,
        achieved: usize,
        preserved: bool,
        failures: Vec<PairFailure>,
    }

    let results: Vec<SourceResult> = sources
        .par_iter()
        .map(|(s, targets)| {
            let s = *s;
            let exact = g.sssp_exact(s).expect("in range");
            let (final_row, snapshot, cert) = certify_source(&aug, s, beta, eps, &exact);

            let mut res = SourceResult {
                pairs: 0,
                max_stretch: 1.0,
                achieved: 0,
                preserved: true,
                failures: Vec::new(),
            };
            let mut visit = |v: usize| {
                res.pairs += 1;
                match exact[v] {
                    None => {
                        // closure must not grow
                        if final_row[v].is_some() {
                            res.preserved = false;
                            res.failures.push(PairFailure {
                                u: s,
                                v,
                                required: f64::INFINITY,
                                observed: final_row[v],
                            });
                        }
                    }
                    Some(d) => {
                        if final_row[v] != Some(d) {
                            res.preserved = false;
                        }
                        let required = (1.0 + eps) * d as f64;
                        match snapshot[v] {
                            Some(got) if got as f64 <= required + 1e-9 => {
                                if d > 0 {
                                    res.max_stretch = res.max_stretch.max(got as f64 / d as f64);
                                }
                                res.achieved = res.achieved.max(cert[v].unwrap_or(n));
                            }
                            other => {
                                res.failures.push(PairFailure {
                                    u: s,
                                    v,
                                    required,
                                    observed: other,
                                });
                                res.achieved = n;
                            }
                        }
                    }
                }
            };
            match targets {
                None => (0..n).filter(|&v| v != s).for_each(&mut visit),
                Some(ts) => ts.iter().copied().for_each(&mut visit),
            }
            res
        })
        .collect();

    let mut report = VerificationReport {
        beta,
        eps,
        mode: mode_label.into(),
        pairs_checked: 0,
        max_stretch: 1.0,
        achieved_hopbound: 0,
        distance_preservation: true,
        failures: Vec::new(),
    };
    for r in results {
        report.pairs_checked += r.pairs;
        report.max_stretch = report.max_stretch.max(r.max_stretch);
        report.achieved_hopbound = report.achieved_hopbound.max(r.achieved);
        report.distance_preservation &= r.preserved;
        report.failures.extend(r.failures);
    }
    report
}

/// (converged row, layer-beta snapshot, first certification layer per
/// target) from one source's layered DP.
type SourceCertificate = (Vec<Option<u64>>, Vec<Option<u64>>, Vec<Option<usize>>);

fn certify_source(
    aug: &WeightedDigraph,
    s: usize,
    beta: usize,
    eps: f64,
    exact: &[Option<u64>],
) -> SourceCertificate {
    let n = aug.n();
    const INF: u64 = u64::MAX;
    let mut cur = vec![INF; n];
    cur[s] = 0;
    let mut cert: Vec<Option<usize>> = vec![None; n];
    cert[s] = Some(0);
    let mut snapshot: Option<Vec<u64>> = if beta == 0 { Some(cur.clone()) } else { None };
    let mut h = 0usize;
    loop {
        if h >= n.saturating_sub(1) {
            break;
        }
        h += 1;
        let mut next = cur.clone();
        let mut changed = false;
        for u in 0..n {
            let du = cur[u];
            if du == INF {
                continue;
            }
            for &(v, w) in aug.out_edges(u) {
                let nd = du + w;
                if nd < next[v] {
                    next[v] = nd;
                    changed = true;
                }
            }
        }
        for v in 0..n {
            if cert[v].is_none() && next[v] != INF {
                if let Some(d) = exact[v] {
                    if next[v] as f64 <= (1.0 + eps) * d as f64 + 1e-9 {
                        cert[v] = Some(h);
                    }
                }
            }
        }
        cur = next;
        if h == beta {
            snapshot = Some(cur.clone());
        }
        if !changed {
            break;
        }
    }
    let snap = snapshot.unwrap_or_else(|| cur.clone());
    let decode = |row: Vec<u64>| -> Vec<Option<u64>> {
        row.into_iter()
            .map(|d| if d == INF { None } else { Some(d) })
            .collect()
    };
    (decode(cur), decode(snap), cert)
}

/// One conditional failure of the backward guarantee, naming the designated
/// (k, interval, i) triple whose sample hit did not produce the bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionalFailure {
    pub x: usize,
    pub y: usize,
    pub k: usize,
    pub interval: (usize, usize),
    pub i: usize,
    pub bound: f64,
    pub observed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BackwardLemmaReport {
    /// backward pairs (x after y on P) with x reaching y
    pub obligated: usize,
    /// obligated pairs whose designated sample hit occurred
    pub conditional_hits: usize,
    pub conditional_failures: Vec<ConditionalFailure>,
    /// obligated pairs meeting the bound regardless of sampling
    pub unconditional_pass: usize,
}

impl BackwardLemmaReport {
    pub fn unconditional_rate(&self) -> f64 {
        if self.obligated == 0 {
            1.0
        } else {
            self.unconditional_pass as f64 / self.obligated as f64
        }
    }
}

/// The backward subroutine's bound for a backward pair.
pub fn backward_bound(
    gamma: f64,
    delta: f64,
    dist_xy: u64,
    path_len: u64,
    p_vertices: usize,
    h_p: usize,
    road_cap_p: usize,
) -> f64 {
    (1.0 + gamma) * dist_xy as f64
        + delta * path_len as f64 * h_p as f64 / (p_vertices as f64 * road_cap_p as f64)
}

/// Designated scale: h in (2^(k-1), 2^k].
pub fn designated_k(h_p: usize) -> usize {
    debug_assert!(h_p >= 1);
    ((h_p as f64).log2().ceil() as usize).max(1)
}

/// Designated sample level: |R cap P| - 4 in (2^i, 2^(i+1)], when >= 1.
pub fn designated_i(road_cap_p: usize) -> Option<usize> {
    if road_cap_p <= 4 {
        return None;
    }
    let m4 = (road_cap_p - 4) as f64;
    let i = (m4.log2().ceil() as usize).saturating_sub(1);
    if i >= 1 {
        Some(i)
    } else {
        None
    }
}

/// Replay the backward shortcutting guarantee on one nice path.
///
/// For every backward pair, the road R(x,y) is computed in `g_aug`
/// (G plus all forward edges), the designated (k, I, i) is derived, and
/// whenever the recorded sample S_i intersects the road-path vertices
/// inside a containing interval, a <= 6-hop path within the bound
/// must exist in g_aug plus the subroutine's edges.
pub fn check_backward_lemma(
    g_aug: &WeightedDigraph,
    path: &NicePath,
    shortcut: &BackwardShortcut,
    gamma: f64,
    delta: f64,
    dist: &DistanceMatrix,
) -> BackwardLemmaReport {
    let p_len = path.vertices.len();
    let len_p = path.len_weighted();
    let with_backward = g_aug.augmented(shortcut.edges.iter().map(|e| e.as_triple()));
    let mut pos_of = std::collections::HashMap::new();
    for (i, &v) in path.vertices.iter().enumerate() {
        pos_of.insert(v, i);
    }

    let mut report = BackwardLemmaReport {
        obligated: 0,
        conditional_hits: 0,
        conditional_failures: Vec::new(),
        unconditional_pass: 0,
    };

    for xpos in 1..p_len {
        let x = path.vertices[xpos];
        let tree = g_aug.road_tree(x);
        let d6 = with_backward.hop_bounded_dist(x, 6);
        for ypos in 0..xpos {
            let y = path.vertices[ypos];
            let Some(d_xy) = dist.get(x, y) else { continue };
            report.obligated += 1;

            let road = tree.extract(y).expect("reachable via exact-weight edges");
            let road_positions: Vec<usize> = road
                .vertices
                .iter()
                .filter_map(|v| pos_of.get(v).copied())
                .collect();
            let r_cap_p = road_positions.len();
            let h_p = xpos - ypos;
            let bound = backward_bound(gamma, delta, d_xy, len_p, p_len, h_p, r_cap_p);

            let pass = d6[y].map(|got| got as f64 <= bound + 1e-9);
            if pass == Some(true) {
                report.unconditional_pass += 1;
            }

            let k = designated_k(h_p);
            let Some(i) = designated_i(r_cap_p) else { continue };
            let Some(scale) = shortcut.scales.iter().find(|s| s.k == k) else {
                continue;
            };
            if i > k {
                continue;
            }
            for interval in &scale.intervals {
                if !(interval.start <= ypos && xpos < interval.end) {
                    continue;
                }
                let hit = interval.samples[i - 1]
                    .iter()
                    .any(|&p| road_positions.contains(&p) && interval.start <= p && p < interval.end);
                if !hit {
                    continue;
                }
                report.conditional_hits += 1;
                if pass != Some(true) {
                    report.conditional_failures.push(ConditionalFailure {
                        x,
                        y,
                        k,
                        interval: (interval.start, interval.end),
                        i,
                        bound,
                        observed: d6[y],
                    });
                }
            }
        }
    }
    report
}
