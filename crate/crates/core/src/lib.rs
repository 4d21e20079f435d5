//! Exact combinatorics and Monte Carlo simulation for random distance graphs
//! `G_p(n, n/2, n/4)`.
//!
//! The complete distance graph has the `n`-bit words of weight `n/2` as
//! vertices, with an edge whenever two supports share exactly `n/4`
//! positions. [`distgraph`] builds it, [`patterns`] holds the small graphs
//! and rooted networks being counted, [`exactcount`] computes embedding and
//! extension counts exactly, [`sampler`] draws `G_p` and tests for copies and
//! extensions, and [`experiments`] turns those pieces into seeded,
//! reproducible measurements.

pub mod combinatorics;
pub mod distgraph;
pub mod error;
pub mod exactcount;
pub mod experiments;
pub mod patterns;
pub mod sampler;
pub mod stats;

/// Exact nonnegative counts.
pub type BigCount = num_bigint::BigUint;

pub use distgraph::{DistGraph, VertexWord};
pub use error::{Error, Result};
pub use exactcount::PartitionVector;
pub use experiments::{PoissonResult, SweepResult, UniformityResult};
pub use sampler::{RootFilter, SampledGraph};
pub use patterns::{PatternGraph, Rational, RootedNetwork};
