//! Hierarchical vertex/path sampling and the type-2 vertex-path edges.
//!
//! Levels run from 1 to ceil(log2 n). Vertex thresholds shrink with the
//! level, path thresholds grow, and one uniform draw per item makes the
//! samples nested in both directions: vertex samples shrink upward,
//! path samples grow upward.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::DistanceMatrix;
use crate::path_hopset::{dedup_edges, geometric_class, EdgeKind, HopsetEdge};
use crate::pathset::{NicePath, NicePathCollection};
use crate::rng;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Level {
    pub level: usize,
    pub vertex_threshold: f64,
    pub path_threshold: f64,
    /// Sorted vertex ids sampled at this level.
    pub vertices: Vec<usize>,
    /// Sorted nice-path ids sampled at this level.
    pub paths: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplingHierarchy {
    pub levels: Vec<Level>,
    pub c_v: f64,
    pub c_p: f64,
    pub seed: u64,
}

impl SamplingHierarchy {
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Level indices are 1-based; panics outside [1, level_count].
    pub fn level(&self, i: usize) -> &Level {
        &self.levels[i - 1]
    }

    pub fn vertex_in_level(&self, v: usize, i: usize) -> bool {
        self.level(i).vertices.binary_search(&v).is_ok()
    }

    pub fn path_in_level(&self, path_id: usize, i: usize) -> bool {
        self.level(i).paths.binary_search(&path_id).is_ok()
    }

    /// Report listing per-level thresholds and sample sizes.
    pub fn summary(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        for l in &self.levels {
            let _ = writeln!(
                out,
                "level {}: vertex_threshold {:.6} ({} vertices), path_threshold {:.6} ({} paths)",
                l.level,
                l.vertex_threshold,
                l.vertices.len(),
                l.path_threshold,
                l.paths.len()
            );
        }
        out
    }
}

pub fn vertex_threshold(n: usize, beta: usize, i: usize, c_v: f64) -> f64 {
    let log_n = (n.max(2) as f64).log2();
    (c_v * log_n * log_n / (2f64.powi(i as i32) * beta as f64)).min(1.0)
}

pub fn path_threshold(n: usize, beta: usize, i: usize, c_p: f64) -> f64 {
    let log_n = (n.max(2) as f64).log2();
    (c_p * 2f64.powi(i as i32) * log_n.powi(3) / beta as f64).min(1.0)
}

/// Draw the nested hierarchy: vertex v joins level i iff its single draw
/// falls below the level's vertex threshold, and likewise for paths.
pub fn build_hierarchy(
    n: usize,
    beta: usize,
    paths: &NicePathCollection,
    c_v: f64,
    c_p: f64,
    seed: u64,
) -> SamplingHierarchy {
    let level_count = ((n.max(2) as f64).log2().ceil() as usize).max(1);
    let vertex_draws: Vec<f64> = (0..n).map(|v| rng::unit(seed, &[0, v as u64])).collect();
    let path_draws: Vec<f64> = (0..paths.paths.len())
        .map(|p| rng::unit(seed, &[1, p as u64]))
        .collect();
    let levels = (1..=level_count)
        .map(|i| {
            let vt = vertex_threshold(n, beta, i, c_v);
            let pt = path_threshold(n, beta, i, c_p);
            Level {
                level: i,
                vertex_threshold: vt,
                path_threshold: pt,
                vertices: (0..n).filter(|&v| vertex_draws[v] < vt).collect(),
                paths: (0..paths.paths.len())
                    .filter(|&p| path_draws[p] < pt)
                    .collect(),
            }
        })
        .collect();
    SamplingHierarchy {
        levels,
        c_v,
        c_p,
        seed,
    }
}

/// Vertex-path hopset edges from v to P: one edge per occupied geometric
/// class of dist(v, .), to the first path vertex in that class. Together
/// with P's forward shortcuts this yields, for every p on P reachable
/// from v, a <= 3-hop path of length <= (1 + eps/2) dist(v,p) + len(P).
pub fn vertex_path_hopset(
    v: usize,
    path: &NicePath,
    eps: f64,
    dist: &DistanceMatrix,
) -> Vec<HopsetEdge> {
    let gamma = eps / 2.0;
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for &p in &path.vertices {
        if p == v {
            continue;
        }
        if let Some(d) = dist.get(v, p) {
            let class = geometric_class(d, gamma);
            if seen.insert(class) {
                out.push(HopsetEdge {
                    tail: v,
                    head: p,
                    weight: d,
                    kind: EdgeKind::VertexPath,
                });
            }
        }
    }
    out
}

/// Union over levels of vertex_path_hopset(v, P) for sampled pairs,
/// deduplicated. Pairs repeat across levels, so the union of (v, P)
/// pairs is materialized first.
pub fn connect_levels(
    hierarchy: &SamplingHierarchy,
    paths: &NicePathCollection,
    eps: f64,
    dist: &DistanceMatrix,
) -> Vec<HopsetEdge> {
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for level in &hierarchy.levels {
        for &v in &level.vertices {
            for &p in &level.paths {
                pairs.insert((v, p));
            }
        }
    }
    let pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
    let edges: Vec<HopsetEdge> = pairs
        .par_iter()
        .flat_map_iter(|&(v, p)| vertex_path_hopset(v, &paths.paths[p], eps, dist))
        .collect();
    dedup_edges(edges)
}

/// Envelope sum_i |V_i| * |P_i| * ceil(log_{1+eps/2}(nW) + 1) for the
/// measured type-2 count invariant.
pub fn connect_levels_envelope(
    hierarchy: &SamplingHierarchy,
    n: usize,
    w_max: u64,
    eps: f64,
) -> f64 {
    let per_pair = per_pair_class_bound(n, w_max, eps) as f64;
    hierarchy
        .levels
        .iter()
        .map(|l| l.vertices.len() as f64 * l.paths.len() as f64 * per_pair)
        .sum()
}

/// Maximum edges a single (v, P) pair can contribute:
/// ceil(log_{1+eps/2}(nW)) + 1 occupied classes.
pub fn per_pair_class_bound(n: usize, w_max: u64, eps: f64) -> usize {
    let nw = (n.max(2) as f64) * w_max.max(1) as f64;
    (nw.ln() / (1.0 + eps / 2.0).ln()).ceil() as usize + 1
}
