//! Construction and certification toolkit for (beta, eps)-hopsets on
//! weighted directed graphs.
//!
//! A (beta, eps)-hopset H for G is a set of weighted edges such that
//! G and G+H have identical distances, and every reachable pair has a
//! path in G+H with at most beta edges and length at most (1+eps) times
//! the true distance. The crate builds hopsets via a nice-path pipeline
//! (forward and backward path shortcutting plus hierarchical sampling),
//! provides folklore and shortcut-set baselines, and certifies every
//! output against exact brute-force oracles.

pub mod bench;
pub mod builder;
pub mod gen;
pub mod graph;
pub mod hierarchy;
pub mod path_hopset;
pub mod pathset;
pub mod rng;
pub mod verify;
pub mod witness;

pub use builder::{BuildAux, BuildConfig, Hopset, Regime};
pub use graph::{DistanceMatrix, GraphError, Path, RoadTree, WeightedDigraph};
pub use path_hopset::{EdgeKind, HopsetEdge};
pub use pathset::{NicePath, NicePathCollection};
pub use verify::{VerificationReport, VerifyMode};
pub use witness::{WitnessError, WitnessOutcome};
