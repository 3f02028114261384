//! Discrete modelling of 5-level opinion scores.
//!
//! This crate models per-stimulus subjective responses on the 5-level
//! Absolute Category Rating scale with the Generalised Score Distribution
//! (GSD), a two-parameter discrete distribution whose parameters are the mean
//! response and a confidence level linear in variance. Two reference models
//! ride along: the Ordered Probit (latent normal, discretized at
//! half-integer thresholds) and the Simplified Li2020 model (normal with
//! moment-matched parameters, discretized the same way).
//!
//! On top of the distributions sit:
//!
//! * constrained maximum-likelihood estimators for all three models
//!   ([`estimation`]),
//! * a bootstrapped G-test of goodness-of-fit with p-value histogram and
//!   P-P plot construction ([`gof`]),
//! * the bootstrapping effectiveness test that pits a model fitted to small
//!   subsamples against the subsample's own empirical distribution
//!   ([`bootstrap_eval`]),
//! * CSV/JSON ingestion and emission, deterministic RNG substreams and
//!   synthetic study generation ([`dataio`], [`rng`], [`synth`]).
//!
//! Everything randomized is a pure function of (data, seed): replicate
//! streams are derived per (seed, stimulus, replicate), so results do not
//! depend on thread count or scheduling.

pub mod bootstrap_eval;
pub mod dataio;
pub mod distributions;
pub mod error;
pub mod estimation;
pub mod gof;
pub mod rng;
pub mod svg;
pub mod synth;
pub mod types;

pub use error::{Error, Result};
pub use types::{ProbVector, ResponseCounts, ResponseScale};
