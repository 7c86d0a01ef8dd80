//! Per-path hopset edges.
//!
//! Three constructions live here:
//! - forward 2-hop exact shortcutting of a shortest path (recursive
//!   midpoint),
//! - the weak backward subroutine: windows of bounded weighted length
//!   plus geometric distance classes, giving 3-hop paths with additive
//!   error delta * len(segment) for pairs touching a chosen vertex set,
//! - the full backward subroutine: overlapping interval families at
//!   log |P| scales, per-interval length classes, and per-class sampled
//!   vertex sets feeding the weak subroutine with a shrinking delta.

use serde::{Deserialize, Serialize};

use crate::graph::DistanceMatrix;
use crate::pathset::NicePath;
use crate::rng;

/// Construction type of a hopset edge, kept for size accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    /// Type 1: nice-path edges and their 2-hop forward shortcuts.
    Forward,
    /// Type 2: sampled vertex to sampled path edges.
    VertexPath,
    /// Type 3: backward shortcutting subroutine output.
    Backward,
    /// Closure edges between sampled vertices (large-beta reduction).
    Closure,
    /// Folklore baseline: all pairs of a vertex sample.
    Folklore,
    /// Bidirectional SCC star edges (shortcut-set baseline).
    SccStar,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 6] = [
        EdgeKind::Forward,
        EdgeKind::VertexPath,
        EdgeKind::Backward,
        EdgeKind::Closure,
        EdgeKind::Folklore,
        EdgeKind::SccStar,
    ];

    pub fn label(self) -> &'static str {
        match self {
            EdgeKind::Forward => "forward",
            EdgeKind::VertexPath => "vertex-path",
            EdgeKind::Backward => "backward",
            EdgeKind::Closure => "closure",
            EdgeKind::Folklore => "folklore",
            EdgeKind::SccStar => "scc-star",
        }
    }
}

/// A weighted augmentation edge; weight always equals dist_G(tail, head).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopsetEdge {
    pub tail: usize,
    pub head: usize,
    pub weight: u64,
    pub kind: EdgeKind,
}

impl HopsetEdge {
    pub fn as_triple(&self) -> (usize, usize, u64) {
        (self.tail, self.head, self.weight)
    }
}

/// Contiguous window of a nice path: vertices plus the parent path's
/// prefix lengths over the same range (only differences matter).
#[derive(Debug, Clone, Copy)]
pub struct PathSegment<'a> {
    pub vertices: &'a [usize],
    pub prefix: &'a [u64],
}

impl<'a> PathSegment<'a> {
    pub fn len_weighted(&self) -> u64 {
        self.prefix[self.prefix.len() - 1] - self.prefix[0]
    }

    pub fn span(&self, a: usize, b: usize) -> u64 {
        self.prefix[b] - self.prefix[a]
    }
}

impl NicePath {
    /// View of positions [start, end).
    pub fn segment(&self, start: usize, end: usize) -> PathSegment<'_> {
        PathSegment {
            vertices: &self.vertices[start..end],
            prefix: &self.prefix_lengths[start..end],
        }
    }

    pub fn full_segment(&self) -> PathSegment<'_> {
        self.segment(0, self.vertices.len())
    }
}

/// Geometric class index j with (1+gamma)^j <= d < (1+gamma)^(j+1).
pub fn geometric_class(d: u64, gamma: f64) -> u32 {
    debug_assert!(d >= 1);
    let base = 1.0 + gamma;
    let mut j = ((d as f64).ln() / base.ln()).floor().max(0.0) as u32;
    while base.powi(j as i32 + 1) <= d as f64 {
        j += 1;
    }
    while j > 0 && base.powi(j as i32) > d as f64 {
        j -= 1;
    }
    j
}

/// The path's own edges as hopset edges (closure edges at exact distance).
pub fn path_edges(path: &NicePath, dist: &DistanceMatrix) -> Vec<HopsetEdge> {
    path.vertices
        .windows(2)
        .map(|w| HopsetEdge {
            tail: w[0],
            head: w[1],
            weight: dist.get(w[0], w[1]).expect("path edge is reachable"),
            kind: EdgeKind::Forward,
        })
        .collect()
}

/// Forward 2-hop exact shortcutting H(P) by recursive midpoint: edges
/// from the left half into the midpoint and from the midpoint into the
/// right half, then recurse. Together with the path's own edges, every
/// forward pair gets a <= 2-hop path of exact length. At most
/// |P| * ceil(log2 |P|) edges, none duplicating a path edge.
pub fn forward_shortcut(path: &NicePath, dist: &DistanceMatrix) -> Vec<HopsetEdge> {
    forward_shortcut_segment(&path.full_segment(), dist)
}

pub fn forward_shortcut_segment(seg: &PathSegment<'_>, dist: &DistanceMatrix) -> Vec<HopsetEdge> {
    let mut out = Vec::new();
    if seg.vertices.len() >= 3 {
        midpoint_edges(seg, 0, seg.vertices.len() - 1, dist, &mut out);
    }
    out
}

fn midpoint_edges(
    seg: &PathSegment<'_>,
    lo: usize,
    hi: usize,
    dist: &DistanceMatrix,
    out: &mut Vec<HopsetEdge>,
) {
    if hi - lo <= 1 {
        return;
    }
    let mid = (lo + hi) / 2;
    for j in lo..mid {
        if mid - j > 1 {
            out.push(make_edge(seg, j, mid, dist));
        }
    }
    for j in (mid + 1)..=hi {
        if j - mid > 1 {
            out.push(make_edge(seg, mid, j, dist));
        }
    }
    if mid > lo {
        midpoint_edges(seg, lo, mid - 1, dist, out);
    }
    if hi > mid {
        midpoint_edges(seg, mid + 1, hi, dist, out);
    }
}

fn make_edge(seg: &PathSegment<'_>, a: usize, b: usize, dist: &DistanceMatrix) -> HopsetEdge {
    let (u, v) = (seg.vertices[a], seg.vertices[b]);
    let w = dist.get(u, v).expect("forward pair on a shortest path");
    debug_assert_eq!(w, seg.span(a, b));
    HopsetEdge {
        tail: u,
        head: v,
        weight: w,
        kind: EdgeKind::Forward,
    }
}

/// Greedy left-to-right window partition: extend while the window's
/// weighted length stays within the budget; a vertex whose incoming path
/// edge alone exceeds the budget forms its own window.
pub fn partition_windows(seg: &PathSegment<'_>, budget: f64) -> Vec<std::ops::Range<usize>> {
    let n = seg.vertices.len();
    let mut windows = Vec::new();
    let mut start = 0usize;
    while start < n {
        let mut end = start + 1;
        while end < n && seg.span(start, end) as f64 <= budget {
            end += 1;
        }
        windows.push(start..end);
        start = end;
    }
    windows
}

/// Weak backward subroutine on one segment.
///
/// `sample` holds positions within the segment. For every sampled vertex
/// v, every window, and every occupied geometric class, adds an edge to
/// the first window vertex in that class of dist(v, .) and from the last
/// window vertex in that class of dist(., v). Guarantees: for x after y
/// on the segment with x or y sampled and x reaching y, the segment's
/// path edges + its forward shortcuts + this output contain a <= 3-hop
/// x->y path of length <= (1+gamma) dist(x,y) + delta * len(segment).
pub fn weak_backward(
    seg: &PathSegment<'_>,
    sample: &[usize],
    gamma: f64,
    delta: f64,
    dist: &DistanceMatrix,
) -> Vec<HopsetEdge> {
    let budget = delta * seg.len_weighted() as f64;
    let windows = partition_windows(seg, budget);
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for &vpos in sample {
        let v = seg.vertices[vpos];
        for win in &windows {
            // first window vertex per class of dist(v, w)
            seen.clear();
            for wpos in win.clone() {
                let w = seg.vertices[wpos];
                if w == v {
                    continue;
                }
                if let Some(d) = dist.get(v, w) {
                    let class = geometric_class(d, gamma);
                    if seen.insert(class) {
                        out.push(HopsetEdge {
                            tail: v,
                            head: w,
                            weight: d,
                            kind: EdgeKind::Backward,
                        });
                    }
                }
            }
            // last window vertex per class of dist(w', v)
            seen.clear();
            for wpos in win.clone().rev() {
                let w = seg.vertices[wpos];
                if w == v {
                    continue;
                }
                if let Some(d) = dist.get(w, v) {
                    let class = geometric_class(d, gamma);
                    if seen.insert(class) {
                        out.push(HopsetEdge {
                            tail: w,
                            head: v,
                            weight: d,
                            kind: EdgeKind::Backward,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Overlapping intervals at scale k: 2^(k+1) vertices each, offset 2^k.
/// The last interval may be shorter; a trailing window already contained
/// in its predecessor is dropped.
pub fn scale_intervals(path_len: usize, k: usize) -> Vec<std::ops::Range<usize>> {
    let step = 1usize << k;
    let width = step * 2;
    let mut out = Vec::new();
    let mut start = 0usize;
    loop {
        if start > 0 && start + step >= path_len {
            break;
        }
        out.push(start..path_len.min(start + width));
        if start + width >= path_len {
            break;
        }
        start += step;
    }
    out
}

/// The delta passed to the weak subroutine for an interval of length
/// class `ell` and sample level `i`.
pub fn delta_star(delta: f64, ell: u32, i: usize) -> f64 {
    delta / 2f64.powi(ell as i32 + i as i32 + 3)
}

/// Length class of an interval relative to the scale average, clamped
/// at zero: len(I) in [2^ell, 2^(ell+1)) * mu_k.
pub fn interval_class(len: u64, mu: f64) -> u32 {
    if (len as f64) < mu || mu <= 0.0 {
        return 0;
    }
    let mut ell = ((len as f64) / mu).log2().floor().max(0.0) as u32;
    while 2f64.powi(ell as i32 + 1) * mu <= len as f64 {
        ell += 1;
    }
    while ell > 0 && 2f64.powi(ell as i32) * mu > len as f64 {
        ell -= 1;
    }
    ell
}

/// Per-interval record of the backward construction, kept so the
/// verifier can replay the conditional guarantee.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntervalTrace {
    pub start: usize,
    pub end: usize,
    pub ell: u32,
    /// samples[i-1] = path positions drawn into S_i, for i in 1..=k.
    pub samples: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScaleTrace {
    pub k: usize,
    pub mu: f64,
    pub intervals: Vec<IntervalTrace>,
}

/// Output of the backward shortcutting subroutine on one nice path.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BackwardShortcut {
    pub edges: Vec<HopsetEdge>,
    pub scales: Vec<ScaleTrace>,
}

/// Full backward shortcutting subroutine.
///
/// For each scale k in [1, ceil(log2 |P|)], build the interval family;
/// for each interval and each i in [1, k], sample interval vertices
/// independently with probability min(1, log2(n) / 2^i) (one counter
/// draw per (vertex, interval, i)) and run the weak subroutine with
/// delta/2^(ell(I)+i+3). Edges are deduplicated across calls.
pub fn backward_shortcut(
    path: &NicePath,
    gamma: f64,
    delta: f64,
    dist: &DistanceMatrix,
    seed: u64,
) -> BackwardShortcut {
    let p_len = path.vertices.len();
    let n = dist.n();
    let log_n = (n.max(2) as f64).log2();
    let k_max = ((p_len as f64).log2().ceil() as usize).max(1);

    let mut edges = Vec::new();
    let mut scales = Vec::new();
    for k in 1..=k_max {
        let intervals = scale_intervals(p_len, k);
        let total: u64 = intervals
            .iter()
            .map(|r| path.span(r.start, r.end - 1))
            .sum();
        let mu = total as f64 / intervals.len() as f64;
        let mut traces = Vec::with_capacity(intervals.len());
        for (idx, range) in intervals.iter().enumerate() {
            let seg = path.segment(range.start, range.end);
            let ell = interval_class(path.span(range.start, range.end - 1), mu);
            let mut samples = Vec::with_capacity(k);
            for i in 1..=k {
                let p = (log_n / 2f64.powi(i as i32)).min(1.0);
                let mut s_rel = Vec::new();
                let mut s_abs = Vec::new();
                for (rel, pos) in range.clone().enumerate() {
                    let v = path.vertices[pos];
                    if rng::unit(seed, &[k as u64, idx as u64, i as u64, v as u64]) < p {
                        s_rel.push(rel);
                        s_abs.push(pos);
                    }
                }
                edges.extend(weak_backward(
                    &seg,
                    &s_rel,
                    gamma,
                    delta_star(delta, ell, i),
                    dist,
                ));
                samples.push(s_abs);
            }
            traces.push(IntervalTrace {
                start: range.start,
                end: range.end,
                ell,
                samples,
            });
        }
        scales.push(ScaleTrace {
            k,
            mu,
            intervals: traces,
        });
    }
    edges = dedup_edges(edges);
    BackwardShortcut { edges, scales }
}

/// Deduplicate by (tail, head), keeping the first-emitted edge. Weights
/// of duplicates must agree: every construction emits exact distances.
/// Output is sorted by endpoints for deterministic downstream use.
pub fn dedup_edges(edges: Vec<HopsetEdge>) -> Vec<HopsetEdge> {
    let mut seen: std::collections::HashMap<(usize, usize), HopsetEdge> =
        std::collections::HashMap::with_capacity(edges.len());
    for e in edges {
        match seen.entry((e.tail, e.head)) {
            std::collections::hash_map::Entry::Vacant(slot) => {
                slot.insert(e);
            }
            std::collections::hash_map::Entry::Occupied(kept) => {
                assert_eq!(
                    kept.get().weight,
                    e.weight,
                    "duplicate edge with differing weight"
                );
            }
        }
    }
    let mut out: Vec<HopsetEdge> = seen.into_values().collect();
    out.sort_by_key(|e| (e.tail, e.head));
    out
}

/// Size envelope |P| * log^2(nW) * log^3(n) / (gamma * delta) for
/// reporting the measured constant of the backward subroutine.
pub fn backward_size_envelope(p_len: usize, n: usize, w_max: u64, gamma: f64, delta: f64) -> f64 {
    let nw = ((n.max(2) as u64) * w_max.max(1)) as f64;
    let log_nw = nw.log2().max(1.0);
    let log_n = (n.max(2) as f64).log2();
    p_len as f64 * log_nw * log_nw * log_n.powi(3) / (gamma * delta)
}

/// Edge-set text form: the graph format plus a kind tag column
/// ("u v w kind" per line after the "n m" header).
pub fn edges_to_text(n: usize, edges: &[HopsetEdge]) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", n, edges.len());
    for e in edges {
        let _ = writeln!(out, "{} {} {} {}", e.tail, e.head, e.weight, e.kind.label());
    }
    out
}

pub fn edges_from_text(input: &str) -> Result<(usize, Vec<HopsetEdge>), String> {
    let mut lines = input
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or("empty input")?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or("bad header n")?;
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or("bad header m")?;
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let mut it = line.split_whitespace();
        let mut field = |name: &str| it.next().ok_or(format!("missing {name}")).map(String::from);
        let tail: usize = field("u")?.parse().map_err(|_| "bad u")?;
        let head: usize = field("v")?.parse().map_err(|_| "bad v")?;
        let weight: u64 = field("w")?.parse().map_err(|_| "bad w")?;
        let tag = field("kind")?;
        let kind = EdgeKind::ALL
            .into_iter()
            .find(|k| k.label() == tag)
            .ok_or_else(|| format!("unknown kind '{tag}'"))?;
        edges.push(HopsetEdge {
            tail,
            head,
            weight,
            kind,
        });
    }
    if edges.len() != m {
        return Err(format!("header declared {m} edges, found {}", edges.len()));
    }
    Ok((n, edges))
}
