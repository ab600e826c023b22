//! Random Dirichlet series `Rf = sum a_n X_n n^{-s}` under the Bernoulli,
//! Steinhaus and Gaussian models, and the membership experiments built on them.

mod experiment;
mod model;

pub use experiment::{
    classify, expected_norm_mc, khintchine_ratio, membership_scale_exponent,
    partial_sum_experiment, symbol_membership, ExperimentKind, ExperimentOptions, ExperimentReport,
    Generator, Schedule, TailReport, Verdict,
};
pub use model::{derive_seed, randomize, sample_sequence, ModelKind, RandomModel};
