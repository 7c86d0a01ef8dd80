//! Beta-sweep benchmarking: build, verify, and emit one CSV row per
//! (beta, seed), plus folklore baseline rows for comparison.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builder::{build, build_folklore, BuildConfig, Hopset};
use crate::gen::Family;
use crate::graph::WeightedDigraph;
use crate::path_hopset::EdgeKind;
use crate::verify::{check_hop_stretch, VerifyMode};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub family: String,
    pub algo: String,
    pub beta: usize,
    pub eps: f64,
    pub seed: u64,
    pub hopset_size: usize,
    pub counts_by_kind: BTreeMap<String, usize>,
    pub achieved_hopbound: usize,
    pub max_stretch: f64,
    pub verified: bool,
    pub build_ms: u64,
    pub verify_ms: u64,
    pub error: Option<String>,
}

pub fn csv_header() -> String {
    let kinds: Vec<&str> = EdgeKind::ALL.iter().map(|k| k.label()).collect();
    format!(
        "n,m,family,algo,beta,eps,seed,hopset_size,{},achieved_hopbound,max_stretch,verified,build_ms,verify_ms,error",
        kinds.join(",")
    )
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        let kind_cols: Vec<String> = EdgeKind::ALL
            .iter()
            .map(|k| {
                self.counts_by_kind
                    .get(k.label())
                    .copied()
                    .unwrap_or(0)
                    .to_string()
            })
            .collect();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{:.6},{},{},{},{}",
            self.n,
            self.m,
            self.family,
            self.algo,
            self.beta,
            self.eps,
            self.seed,
            self.hopset_size,
            kind_cols.join(","),
            self.achieved_hopbound,
            self.max_stretch,
            self.verified,
            self.build_ms,
            self.verify_ms,
            self.error.as_deref().unwrap_or("")
        )
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub w_max: u64,
    pub eps: f64,
    pub beta_grid: Vec<usize>,
    pub seeds: Vec<u64>,
    pub graph_seed: u64,
    pub include_folklore: bool,
}

fn verified_row(
    g: &WeightedDigraph,
    family: &str,
    algo: &str,
    hopset: &Hopset,
    check_beta: usize,
    check_eps: f64,
    seed: u64,
) -> BenchRow {
    let t = Instant::now();
    let report = check_hop_stretch(g, &hopset.edges, check_beta, check_eps, VerifyMode::Auto, seed);
    BenchRow {
        n: g.n(),
        m: g.m(),
        family: family.into(),
        algo: algo.into(),
        beta: hopset.beta,
        eps: hopset.eps,
        seed,
        hopset_size: hopset.total_edges(),
        counts_by_kind: hopset.counts_by_kind(),
        achieved_hopbound: report.achieved_hopbound,
        max_stretch: report.max_stretch,
        verified: report.passed(),
        build_ms: hopset.runtime_ms,
        verify_ms: t.elapsed().as_millis() as u64,
        error: None,
    }
}

fn error_row(g: &WeightedDigraph, family: &str, algo: &str, beta: usize, eps: f64, seed: u64, msg: String) -> BenchRow {
    BenchRow {
        n: g.n(),
        m: g.m(),
        family: family.into(),
        algo: algo.into(),
        beta,
        eps,
        seed,
        hopset_size: 0,
        counts_by_kind: BTreeMap::new(),
        achieved_hopbound: 0,
        max_stretch: 0.0,
        verified: false,
        build_ms: 0,
        verify_ms: 0,
        error: Some(msg),
    }
}

/// Run the sweep over the (beta, seed) grid on one generated graph.
/// Rows come back in grid order; failures are recorded in-row.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<BenchRow>, crate::graph::GraphError> {
    let g = crate::gen::generate(spec.family, spec.n, spec.m, spec.w_max, spec.graph_seed)?;
    let family = spec.family.label();
    let mut grid: Vec<(usize, u64, bool)> = Vec::new();
    for &beta in &spec.beta_grid {
        for &seed in &spec.seeds {
            grid.push((beta, seed, false));
            if spec.include_folklore {
                grid.push((beta, seed, true));
            }
        }
    }
    let rows: Vec<BenchRow> = grid
        .par_iter()
        .map(|&(beta, seed, folklore)| {
            if folklore {
                let h = build_folklore(&g, beta, seed, 1.0);
                // the folklore contract is exactness within O(beta log n)
                let check_beta =
                    (4.0 * beta as f64 * (spec.n.max(2) as f64).log2()).ceil() as usize;
                verified_row(
                    &g,
                    family,
                    "folklore",
                    &h,
                    check_beta.min(spec.n.saturating_sub(1)),
                    0.0,
                    seed,
                )
            } else {
                let cfg = BuildConfig {
                    beta,
                    eps: spec.eps,
                    seed,
                    ..BuildConfig::new(beta, spec.eps, seed)
                };
                match build(&g, &cfg) {
                    Ok((h, _)) => verified_row(&g, family, &h.regime.clone(), &h, beta, spec.eps, seed),
                    Err(e) => error_row(&g, family, "build", beta, spec.eps, seed, e.to_string()),
                }
            }
        })
        .collect();
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = csv_header();
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}
