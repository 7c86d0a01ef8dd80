//! Deterministic graph generators for benchmarks and tests.
//!
//! Every family is a pure function of (n, m, W, seed); byte-identical
//! output across runs. `cycle-chain` stresses the strongly-connected
//! case (chained SCC cycles with forward cross edges); `path-noise`
//! plants a long shortest path and adds heavy back edges.

use crate::graph::{GraphError, WeightedDigraph};
use crate::rng::{self, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    RandomDigraph,
    LayeredDag,
    CycleChain,
    PathNoise,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::RandomDigraph,
        Family::LayeredDag,
        Family::CycleChain,
        Family::PathNoise,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Family::RandomDigraph => "random-digraph",
            Family::LayeredDag => "layered-dag",
            Family::CycleChain => "cycle-chain",
            Family::PathNoise => "path-noise",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random-digraph" => Ok(Family::RandomDigraph),
            "layered-dag" => Ok(Family::LayeredDag),
            "cycle-chain" => Ok(Family::CycleChain),
            "path-noise" => Ok(Family::PathNoise),
            other => Err(format!("unknown family '{other}'")),
        }
    }
}

/// Number of layers used by `layered-dag`: max(2, floor(sqrt(n))).
pub fn dag_layers(n: usize) -> usize {
    ((n as f64).sqrt().floor() as usize).max(2)
}

/// Cycle size used by `cycle-chain`.
pub const CYCLE_SIZE: usize = 4;

pub fn generate(
    family: Family,
    n: usize,
    m: usize,
    w_max: u64,
    seed: u64,
) -> Result<WeightedDigraph, GraphError> {
    if n < 2 {
        return Err(GraphError::TooLarge("need n >= 2".into()));
    }
    if m > n * (n - 1) {
        return Err(GraphError::TooLarge(format!(
            "m = {m} exceeds n(n-1) = {}",
            n * (n - 1)
        )));
    }
    if w_max < 1 {
        return Err(GraphError::BadWeight(w_max, 1));
    }
    let mut s = Stream::new(rng::derive2(seed, rng::tag::GENERATE, family as u64));
    let mut g = WeightedDigraph::new(n)?;
    match family {
        Family::RandomDigraph => {
            let mut added = 0usize;
            let mut attempts = 0usize;
            while added < m && attempts < 50 * m + 1000 {
                attempts += 1;
                let u = s.next_below(n as u64) as usize;
                let v = s.next_below(n as u64) as usize;
                if u == v || g.edge_weight(u, v).is_some() {
                    continue;
                }
                g.add_edge(u, v, s.next_range(1, w_max))?;
                added += 1;
            }
        }
        Family::LayeredDag => {
            let layers = dag_layers(n);
            let layer_of = |v: usize| v * layers / n;
            let mut added = 0usize;
            let mut attempts = 0usize;
            while added < m && attempts < 100 * m + 1000 {
                attempts += 1;
                let u = s.next_below(n as u64) as usize;
                let v = s.next_below(n as u64) as usize;
                if layer_of(u) >= layer_of(v) || g.edge_weight(u, v).is_some() {
                    continue;
                }
                g.add_edge(u, v, s.next_range(1, w_max))?;
                added += 1;
            }
        }
        Family::CycleChain => {
            // blocks of CYCLE_SIZE vertices, each a directed cycle; the
            // remaining budget becomes forward cross edges, keeping the
            // blocks as the SCCs
            let mut cycle_edges = 0usize;
            let mut start = 0usize;
            while start < n {
                let end = (start + CYCLE_SIZE).min(n);
                if end - start >= 2 {
                    for v in start..end {
                        let next = if v + 1 == end { start } else { v + 1 };
                        g.add_edge(v, next, s.next_range(1, w_max))?;
                        cycle_edges += 1;
                    }
                }
                start = end;
            }
            let block_of = |v: usize| v / CYCLE_SIZE;
            let mut added = cycle_edges;
            let mut attempts = 0usize;
            while added < m && attempts < 100 * m + 1000 {
                attempts += 1;
                let u = s.next_below(n as u64) as usize;
                let v = s.next_below(n as u64) as usize;
                if block_of(u) >= block_of(v) || g.edge_weight(u, v).is_some() {
                    continue;
                }
                g.add_edge(u, v, s.next_range(1, w_max))?;
                added += 1;
            }
        }
        Family::PathNoise => {
            // unit-weight forward path is the planted shortest path; any
            // extra edge goes backward with arbitrary weight, which can
            // never undercut the forward chain
            for v in 0..n - 1 {
                g.add_edge(v, v + 1, 1)?;
            }
            let mut added = n - 1;
            let mut attempts = 0usize;
            while added < m && attempts < 100 * m + 1000 {
                attempts += 1;
                let u = s.next_range(1, (n - 1) as u64) as usize;
                let v = s.next_below(u as u64) as usize;
                if g.edge_weight(u, v).is_some() {
                    continue;
                }
                g.add_edge(u, v, s.next_range(1, w_max))?;
                added += 1;
            }
        }
    }
    Ok(g)
}

/// Strongly connected harness graph: a seeded permutation cycle plus m
/// extra random edges. Used where the suite needs guaranteed strong
/// connectivity with long roads.
pub fn strongly_connected(n: usize, extra: usize, w_max: u64, seed: u64) -> WeightedDigraph {
    let mut s = Stream::new(rng::derive2(seed, rng::tag::GENERATE, 100));
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = s.next_below((i + 1) as u64) as usize;
        perm.swap(i, j);
    }
    let mut g = WeightedDigraph::new(n).expect("size checked by caller");
    for i in 0..n {
        g.add_edge(perm[i], perm[(i + 1) % n], s.next_range(1, w_max))
            .expect("cycle edge");
    }
    let mut added = 0usize;
    while added < extra {
        let u = s.next_below(n as u64) as usize;
        let v = s.next_below(n as u64) as usize;
        if u == v {
            continue;
        }
        g.add_edge(u, v, s.next_range(1, w_max)).expect("in range");
        added += 1;
    }
    g
}
