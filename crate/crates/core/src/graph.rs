//! Weighted digraph representation and exact shortest-path primitives.
//!
//! Distances are exact 64-bit integers throughout. Unreachable is a
//! distinguished sentinel (`None` at the API surface), never a large finite
//! stand-in, so triangle-inequality arithmetic can't be fooled.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard caps so that any path length n*W fits comfortably in u64.
/// MAX_WEIGHT applies to input graphs; derived edges (closure weights,
/// hopset edges) may reach n*W and are capped by MAX_DERIVED.
pub const MAX_VERTICES: usize = 1 << 21;
pub const MAX_WEIGHT: u64 = 1 << 40;
pub const MAX_DERIVED: u64 = 1 << 61;

const UNREACH: u64 = u64::MAX;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex id {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("no path from {0} to {1}")]
    NoPath(usize, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("edge weight {0} outside [1, {1}]")]
    BadWeight(u64, u64),
    #[error("graph too large: {0}")]
    TooLarge(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Directed graph with positive integer edge weights.
///
/// Parallel edges are deduplicated to the minimum weight on insertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDigraph {
    n: usize,
    w_max: u64,
    adj: Vec<Vec<(usize, u64)>>,
    m: usize,
}

impl WeightedDigraph {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooLarge(format!("n = {n}")));
        }
        Ok(WeightedDigraph {
            n,
            w_max: 0,
            adj: vec![Vec::new(); n],
            m: 0,
        })
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut g = WeightedDigraph::new(n)?;
        for (u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    /// Insert an edge, keeping the lighter weight if (u,v) already exists.
    pub fn add_edge(&mut self, u: usize, v: usize, w: u64) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange(u, self.n));
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if w == 0 || w > MAX_DERIVED {
            return Err(GraphError::BadWeight(w, MAX_DERIVED));
        }
        match self.adj[u].iter_mut().find(|(h, _)| *h == v) {
            Some((_, old)) => {
                if w < *old {
                    *old = w;
                }
            }
            None => {
                self.adj[u].push((v, w));
                self.m += 1;
            }
        }
        self.w_max = self.w_max.max(w);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Maximum edge weight present (0 for an edgeless graph).
    pub fn w_max(&self) -> u64 {
        self.w_max
    }

    pub fn out_edges(&self, u: usize) -> &[(usize, u64)] {
        &self.adj[u]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().map(move |&(v, w)| (u, v, w)))
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<u64> {
        self.adj[u].iter().find(|(h, _)| *h == v).map(|&(_, w)| w)
    }

    /// Reverse every edge.
    pub fn reversed(&self) -> WeightedDigraph {
        let mut g = WeightedDigraph::new(self.n).expect("same n");
        for (u, v, w) in self.edges() {
            g.add_edge(v, u, w).expect("valid edge");
        }
        g
    }

    /// This graph plus extra weighted edges (deduplicated to min weight).
    pub fn augmented<I>(&self, extra: I) -> WeightedDigraph
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut g = self.clone();
        for (u, v, w) in extra {
            g.add_edge(u, v, w).expect("augmentation edge in range");
        }
        g
    }

    /// Single-source shortest paths (Dijkstra). Entry v is `None` when
    /// unreachable.
    pub fn sssp_exact(&self, s: usize) -> Result<Vec<Option<u64>>, GraphError> {
        if s >= self.n {
            return Err(GraphError::VertexOutOfRange(s, self.n));
        }
        let mut dist = vec![UNREACH; self.n];
        dist[s] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, s)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        Ok(dist.into_iter().map(decode).collect())
    }

    /// All-pairs shortest paths via one Dijkstra per source.
    pub fn apsp(&self) -> DistanceMatrix {
        let rows: Vec<Vec<u64>> = (0..self.n)
            .into_par_iter()
            .map(|s| {
                let mut dist = vec![UNREACH; self.n];
                dist[s] = 0;
                let mut heap = BinaryHeap::new();
                heap.push(Reverse((0u64, s)));
                while let Some(Reverse((d, u))) = heap.pop() {
                    if d > dist[u] {
                        continue;
                    }
                    for &(v, w) in &self.adj[u] {
                        let nd = d + w;
                        if nd < dist[v] {
                            dist[v] = nd;
                            heap.push(Reverse((nd, v)));
                        }
                    }
                }
                dist
            })
            .collect();
        let mut d = Vec::with_capacity(self.n * self.n);
        for row in rows {
            d.extend(row);
        }
        DistanceMatrix { n: self.n, d }
    }

    /// Weighted transitive closure G*: an edge (u, v, dist(u,v)) for every
    /// ordered reachable pair u != v.
    pub fn transitive_closure_weighted(&self) -> WeightedDigraph {
        let dist = self.apsp();
        self.closure_from(&dist)
    }

    /// Closure built from a precomputed distance matrix.
    pub fn closure_from(&self, dist: &DistanceMatrix) -> WeightedDigraph {
        assert_eq!(dist.n, self.n);
        let mut g = WeightedDigraph::new(self.n).expect("same n");
        let mut adj = Vec::with_capacity(self.n);
        let mut m = 0usize;
        let mut w_max = 0u64;
        for u in 0..self.n {
            let mut row = Vec::new();
            for v in 0..self.n {
                if u == v {
                    continue;
                }
                if let Some(w) = dist.get(u, v) {
                    row.push((v, w));
                    w_max = w_max.max(w);
                }
            }
            m += row.len();
            adj.push(row);
        }
        g.adj = adj;
        g.m = m;
        g.w_max = w_max;
        g
    }

    /// Minimum weighted length over all s->v walks with at most `beta`
    /// edges, via the layered recurrence d_h(v) = min(d_{h-1}(v),
    /// min over edges (u,v) of d_{h-1}(u) + w).
    pub fn hop_bounded_dist(&self, s: usize, beta: usize) -> Vec<Option<u64>> {
        let mut cur = vec![UNREACH; self.n];
        cur[s] = 0;
        for _ in 0..beta {
            let mut next = cur.clone();
            let mut changed = false;
            for u in 0..self.n {
                let du = cur[u];
                if du == UNREACH {
                    continue;
                }
                for &(v, w) in &self.adj[u] {
                    let nd = du + w;
                    if nd < next[v] {
                        next[v] = nd;
                        changed = true;
                    }
                }
            }
            cur = next;
            if !changed {
                break;
            }
        }
        cur.into_iter().map(decode).collect()
    }

    /// Shortest-path tree from `s` minimizing (length, hops)
    /// lexicographically, parent ties broken toward the smallest vertex id.
    /// Every tree path is a road: a min-hop path among shortest paths.
    pub fn road_tree(&self, s: usize) -> RoadTree {
        let mut dist = vec![UNREACH; self.n];
        let mut hops = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        dist[s] = 0;
        hops[s] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, 0usize, s)));
        while let Some(Reverse((d, h, u))) = heap.pop() {
            if (d, h) > (dist[u], hops[u]) {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let cand = (d + w, h + 1);
                let cur = (dist[v], hops[v]);
                if cand < cur {
                    dist[v] = cand.0;
                    hops[v] = cand.1;
                    parent[v] = u;
                    heap.push(Reverse((cand.0, cand.1, v)));
                } else if cand == cur && u < parent[v] {
                    parent[v] = u;
                }
            }
        }
        RoadTree {
            source: s,
            dist,
            hops,
            parent,
        }
    }

    /// The road R(u,v): among shortest u->v paths, one with fewest hops,
    /// under the deterministic tie-break of [`road_tree`].
    pub fn road(&self, u: usize, v: usize) -> Result<Path, GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange(u, self.n));
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        self.road_tree(u).extract(v)
    }

    /// Strongly connected components (iterative Tarjan).
    /// Components are emitted in reverse topological order of the
    /// condensation and each is sorted by vertex id.
    pub fn tarjan_scc(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut counter = 0usize;
        // explicit DFS stack: (vertex, next out-edge index)
        let mut call: Vec<(usize, usize)> = Vec::new();

        for start in 0..n {
            if index[start] != usize::MAX {
                continue;
            }
            call.push((start, 0));
            index[start] = counter;
            low[start] = counter;
            counter += 1;
            stack.push(start);
            on_stack[start] = true;

            while let Some(&mut (v, ref mut ei)) = call.last_mut() {
                if *ei < self.adj[v].len() {
                    let (w, _) = self.adj[v][*ei];
                    *ei += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(p, _)) = call.last() {
                        low[p] = low[p].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps
    }

    /// Per-source reachable sets as bit rows.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .into_par_iter()
            .map(|s| {
                let mut seen = vec![false; self.n];
                let mut stack = vec![s];
                seen[s] = true;
                while let Some(u) = stack.pop() {
                    for &(v, _) in &self.adj[u] {
                        if !seen[v] {
                            seen[v] = true;
                            stack.push(v);
                        }
                    }
                }
                seen
            })
            .collect()
    }

    /// Parse the text format: first line "n m", then m lines "u v w".
    /// Lines starting with '#' are comments.
    pub fn parse_text(input: &str) -> Result<Self, GraphError> {
        let mut lines = input
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(GraphError::Parse {
            line: 0,
            msg: "empty input".into(),
        })?;
        let mut it = header.split_whitespace();
        let n: usize = parse_field(&mut it, line, "n")?;
        let m: usize = parse_field(&mut it, line, "m")?;
        let mut g = WeightedDigraph::new(n)?;
        let mut count = 0usize;
        for (line, l) in lines {
            let mut it = l.split_whitespace();
            let u: usize = parse_field(&mut it, line, "u")?;
            let v: usize = parse_field(&mut it, line, "v")?;
            let w: u64 = parse_field(&mut it, line, "w")?;
            if w > MAX_WEIGHT {
                return Err(GraphError::Parse {
                    line,
                    msg: GraphError::BadWeight(w, MAX_WEIGHT).to_string(),
                });
            }
            g.add_edge(u, v, w).map_err(|e| GraphError::Parse {
                line,
                msg: e.to_string(),
            })?;
            count += 1;
        }
        if count != m {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("header declared {m} edges, found {count}"),
            });
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.m);
        for (u, v, w) in self.edges() {
            let _ = writeln!(out, "{u} {v} {w}");
        }
        out
    }
}

fn parse_field<'a, T: std::str::FromStr>(
    it: &mut impl Iterator<Item = &'a str>,
    line: usize,
    name: &str,
) -> Result<T, GraphError> {
    it.next()
        .ok_or_else(|| GraphError::Parse {
            line,
            msg: format!("missing field {name}"),
        })?
        .parse()
        .map_err(|_| GraphError::Parse {
            line,
            msg: format!("bad field {name}"),
        })
}

fn decode(d: u64) -> Option<u64> {
    if d == UNREACH {
        None
    } else {
        Some(d)
    }
}

/// Dense n x n distance matrix with an unreachable sentinel.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u64>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Option<u64> {
        decode(self.d[u * self.n + v])
    }

    /// Largest finite entry (0 for an empty matrix).
    pub fn max_finite(&self) -> u64 {
        self.d.iter().copied().filter(|&x| x != UNREACH).max().unwrap_or(0)
    }
}

/// Shortest-path tree with (length, hops) keys from one source.
#[derive(Debug, Clone)]
pub struct RoadTree {
    source: usize,
    dist: Vec<u64>,
    hops: Vec<usize>,
    parent: Vec<usize>,
}

impl RoadTree {
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn dist(&self, v: usize) -> Option<u64> {
        decode(self.dist[v])
    }

    pub fn hops(&self, v: usize) -> Option<usize> {
        if self.dist[v] == UNREACH {
            None
        } else {
            Some(self.hops[v])
        }
    }

    /// Extract the road from the source to `v`.
    pub fn extract(&self, v: usize) -> Result<Path, GraphError> {
        if self.dist[v] == UNREACH {
            return Err(GraphError::NoPath(self.source, v));
        }
        let mut vertices = Vec::with_capacity(self.hops[v] + 1);
        let mut cur = v;
        while cur != self.source {
            vertices.push(cur);
            cur = self.parent[cur];
        }
        vertices.push(self.source);
        vertices.reverse();
        Ok(Path {
            vertices,
            length: self.dist[v],
        })
    }
}

/// A concrete path: ordered vertices plus its weighted length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub length: u64,
}

impl Path {
    pub fn hops(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().expect("non-empty path")
    }

    /// Check the path is edge-by-edge realizable in `g` and its length
    /// equals the sum of traversed edge weights.
    pub fn validate_in(&self, g: &WeightedDigraph) -> bool {
        let mut total = 0u64;
        for win in self.vertices.windows(2) {
            match g.edge_weight(win[0], win[1]) {
                Some(w) => total += w,
                None => return false,
            }
        }
        total == self.length
    }
}
