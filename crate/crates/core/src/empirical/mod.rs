//! Oracles that test the analytic bounds numerically: packing and cover
//! counts, Rademacher estimates, quadrature, the teacher-student gap
//! experiment and the invariant suites built on them.

mod cover;
mod gap;
mod quadrature;
mod rademacher;
mod rng;
pub mod sampling;
pub mod suites;

pub use cover::{
    greedy_cover, greedy_cover_number, greedy_packing, greedy_packing_number, hypothesis_distance, Cover,
    Euclidean, Frobenius, Metric, MetricSpaceSample, SampleL2, Spectral,
};
pub use gap::{median_gap, run_gap_cell, run_gap_experiment, GapExperiment, GapRecord, StudentInit, PROTOCOL};
pub use quadrature::{integrate, integrate_to_infinity, Quadrature};
pub use rademacher::{
    exhaustive_rademacher, monte_carlo_rademacher, HypothesisTable, RademacherEstimate, MAX_EXHAUSTIVE_SAMPLES,
};
pub use rng::stream_rng;
