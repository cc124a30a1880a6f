//! Benchmark reliability toolkit.
//!
//! Loads per-example score records, aggregates them with Mean Win Rate,
//! measures how stable benchmark outcomes are under resampled design
//! decisions, and ranks new models with a coarse-to-fine tournament.

pub mod data;
pub mod flash;
pub mod metrics;
pub mod resampling;
pub mod scoring;
pub mod stats;
pub mod synth;
