//! Monte Carlo over the canonical joint distribution of `(Z₁, Z₂)`.
//!
//! Replicate `r` of a run draws from its own ChaCha8 stream keyed by
//! `(seed, r)`, and per-replicate results are reduced in replicate order, so
//! every summary is identical for any worker-thread count.

mod bootstrap;
mod histogram;
mod rng;
mod scenario;
mod summary;
mod sweep;

pub use bootstrap::{bootstrap_se, CONDITIONAL_SEED_OFFSET};
pub use histogram::{default_edges, export_histogram, Histogram};
pub use rng::{replicate_rng, GENERATOR_NAME};
pub use scenario::{
    run_scenario, simulate_records, simulate_replicate, stop_probability, Conditioning,
    ReplicateRecord, Scenario, ScenarioRun,
};
pub use summary::{MeanSd, ScenarioSummary};
pub use sweep::{bias_sweep, McCheck, McColumns, SweepRow};
