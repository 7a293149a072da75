//! Independent set sequences of random graphs.
//!
//! The crate covers the full pipeline used to study the shape of the sequence
//! `x_0, x_1, ..., x_alpha` of independent set counts on random trees, sparse
//! Erdős–Rényi graphs and random regular graphs:
//!
//! * [`graph`]: labelled simple graphs, tree codecs and elementary predicates.
//! * [`generators`]: seeded samplers for every random family, including the
//!   planted (size-biased) variants.
//! * [`count`]: exact independence sequences, uniform independent set sampling,
//!   matching polynomials and enumeration oracles.
//! * [`analysis`]: unimodality, log-concavity and exact real-rootedness checks.
//! * [`constants`]: closed-form expectations, rate functions and thresholds.
//! * [`estimators`]: Monte Carlo ratio estimation and measure-comparison checks.
//! * [`experiments`]: the reproducible experiment harness behind the CLI.

pub mod analysis;
pub mod constants;
pub mod count;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod poly;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{Graph, Tree, VertexSet};
pub use rng::Seed;
