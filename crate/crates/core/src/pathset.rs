//! Nice path collection: vertex-disjoint fixed-hop shortest paths picked
//! greedily shortest-first from the weighted transitive closure.
//!
//! A path is eligible when it lives in the residual closure (unused
//! vertices only), has exactly the target hop count, and its weighted
//! length equals the residual distance between its endpoints. Because
//! closure edges carry exact distances and survive vertex removal,
//! residual distances coincide with the original distances, so
//! eligibility reduces to: the exact-h-hop DP value equals the closure
//! edge weight of the endpoint pair.

use serde::{Deserialize, Serialize};

use crate::graph::WeightedDigraph;

/// One selected path: vertex sequence in the closure plus cumulative
/// weighted lengths (prefix_lengths[0] = 0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NicePath {
    pub id: usize,
    pub vertices: Vec<usize>,
    pub prefix_lengths: Vec<u64>,
}

impl NicePath {
    pub fn hops(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn len_weighted(&self) -> u64 {
        *self.prefix_lengths.last().expect("non-empty path")
    }

    /// Position of a vertex on the path, if present.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    /// Weighted distance along the path between two positions (a <= b).
    pub fn span(&self, a: usize, b: usize) -> u64 {
        self.prefix_lengths[b] - self.prefix_lengths[a]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NicePathCollection {
    pub paths: Vec<NicePath>,
    pub h_target: usize,
}

impl NicePathCollection {
    pub fn total_vertices(&self) -> usize {
        self.paths.iter().map(|p| p.vertices.len()).sum()
    }

    /// Map vertex -> path id for quick membership lookups.
    pub fn vertex_to_path(&self, n: usize) -> Vec<Option<usize>> {
        let mut map = vec![None; n];
        for p in &self.paths {
            for &v in &p.vertices {
                map[v] = Some(p.id);
            }
        }
        map
    }

    /// One line per path, space-separated vertex ids, collection order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.paths {
            let ids: Vec<String> = p.vertices.iter().map(|v| v.to_string()).collect();
            out.push_str(&ids.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Target hop count for nice paths: max(1, floor(eps*beta / (24*log2 n))).
pub fn nice_hop_target(n: usize, beta: usize, eps: f64) -> usize {
    if n < 2 {
        return 1;
    }
    let h = (eps * beta as f64 / (24.0 * (n as f64).log2())).floor() as usize;
    h.max(1)
}

/// Greedy maximal nice path collection over the closure `gstar`.
///
/// Selection is fully deterministic: minimum length first, ties by
/// smallest (start, end), then the lexicographically smallest vertex
/// sequence. `tie_seed` is reserved for randomized tie-breaking and is
/// not consumed by the current rule.
pub fn build_nice_paths(
    gstar: &WeightedDigraph,
    h_target: usize,
    tie_seed: u64,
) -> NicePathCollection {
    let _ = tie_seed;
    let n = gstar.n();
    let mut used = vec![false; n];
    let mut paths = Vec::new();

    if h_target == 1 {
        // Every closure edge between unused vertices is an eligible 1-hop
        // shortest path; one sorted sweep realizes the greedy exactly.
        let mut edges: Vec<(u64, usize, usize)> =
            gstar.edges().map(|(u, v, w)| (w, u, v)).collect();
        edges.sort_unstable();
        for (w, u, v) in edges {
            if used[u] || used[v] {
                continue;
            }
            used[u] = true;
            used[v] = true;
            paths.push(NicePath {
                id: paths.len(),
                vertices: vec![u, v],
                prefix_lengths: vec![0, w],
            });
        }
        return NicePathCollection { paths, h_target };
    }

    while let Some(mut path) = best_eligible(gstar, h_target, &used) {
        for &v in &path.vertices {
            used[v] = true;
        }
        path.id = paths.len();
        paths.push(path);
    }
    NicePathCollection { paths, h_target }
}

/// Find the minimum-length eligible h-hop shortest path in the residual
/// closure, or None when the collection is maximal.
fn best_eligible(gstar: &WeightedDigraph, h: usize, used: &[bool]) -> Option<NicePath> {
    let n = gstar.n();
    // best (length, start, end)
    let mut best: Option<(u64, usize, usize)> = None;
    for s in 0..n {
        if used[s] {
            continue;
        }
        let reach = exact_hop_dp_forward(gstar, s, h, used);
        for v in 0..n {
            if used[v] || v == s {
                continue;
            }
            let Some(dh) = reach[v] else { continue };
            // eligible iff the h-hop optimum meets the residual distance,
            // i.e. the closure edge weight
            let Some(d) = gstar.edge_weight(s, v) else {
                continue;
            };
            if dh == d {
                let cand = (d, s, v);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
    }
    let (length, s, t) = best?;
    Some(reconstruct_lex_path(gstar, s, t, h, length, used))
}

/// Exact-h-hop minimum walk weights from `s` over unused vertices.
fn exact_hop_dp_forward(
    gstar: &WeightedDigraph,
    s: usize,
    h: usize,
    used: &[bool],
) -> Vec<Option<u64>> {
    let n = gstar.n();
    let mut cur = vec![None::<u64>; n];
    cur[s] = Some(0);
    for _ in 0..h {
        let mut next = vec![None::<u64>; n];
        for u in 0..n {
            let Some(du) = cur[u] else { continue };
            for &(v, w) in gstar.out_edges(u) {
                if used[v] {
                    continue;
                }
                let nd = du + w;
                if next[v].is_none_or(|x| nd < x) {
                    next[v] = Some(nd);
                }
            }
        }
        cur = next;
    }
    cur
}

/// Exact-j-hop minimum walk weights INTO `t`, for j = 0..=h.
fn exact_hop_dp_backward(
    gstar: &WeightedDigraph,
    t: usize,
    h: usize,
    used: &[bool],
) -> Vec<Vec<Option<u64>>> {
    let n = gstar.n();
    let mut rows = Vec::with_capacity(h + 1);
    let mut cur = vec![None::<u64>; n];
    cur[t] = Some(0);
    rows.push(cur.clone());
    for _ in 0..h {
        let mut next = vec![None::<u64>; n];
        for u in 0..n {
            if used[u] {
                continue;
            }
            for &(v, w) in gstar.out_edges(u) {
                let Some(dv) = cur[v] else { continue };
                let nd = dv + w;
                if next[u].is_none_or(|x| nd < x) {
                    next[u] = Some(nd);
                }
            }
        }
        rows.push(next.clone());
        cur = next;
    }
    rows
}

/// Lexicographically smallest h-hop path s->t of total weight `length`.
/// Any prefix choice that keeps prefix + edge + suffix == length yields a
/// simple path automatically: positive weights make repeats overshoot.
fn reconstruct_lex_path(
    gstar: &WeightedDigraph,
    s: usize,
    t: usize,
    h: usize,
    length: u64,
    used: &[bool],
) -> NicePath {
    let back = exact_hop_dp_backward(gstar, t, h, used);
    let mut vertices = vec![s];
    let mut prefix_lengths = vec![0u64];
    let mut cur = s;
    let mut acc = 0u64;
    for pos in 1..h {
        let remaining = h - pos;
        let mut next: Option<(usize, u64)> = None;
        for &(v, w) in gstar.out_edges(cur) {
            if used[v] {
                continue;
            }
            if let Some(suffix) = back[remaining][v] {
                if acc + w + suffix == length && next.is_none_or(|(b, _)| v < b) {
                    next = Some((v, w));
                }
            }
        }
        let (v, w) = next.expect("eligible pair must reconstruct");
        acc += w;
        vertices.push(v);
        prefix_lengths.push(acc);
        cur = v;
    }
    let w_last = gstar
        .edge_weight(cur, t)
        .expect("final closure edge exists");
    debug_assert_eq!(acc + w_last, length);
    vertices.push(t);
    prefix_lengths.push(acc + w_last);
    NicePath {
        id: 0,
        vertices,
        prefix_lengths,
    }
}
