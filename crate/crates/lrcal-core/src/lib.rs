//! Calibration of comparison scores into forensic log-likelihood-ratios.
//!
//! Given the symmetric pairwise scores an automatic comparison system emits
//! (e.g. a speaker-recognition back-end), this crate builds the training
//! score pools for a specific case (suspect-anchored or reference-anchored),
//! fits a score-to-LLR transform per proposition — either a
//! maximum-likelihood Gaussian or a fully-Bayesian normal-gamma model with a
//! Student's-t predictive — and measures LLR quality with the Cllr metric.
//! A seeded synthetic generator produces desk-scale datasets for sparsity
//! and anchoring experiments.
//!
//! The crate is `no_std` (with `alloc`); all float math goes through `libm`
//! so results are bit-identical across platforms. File handling, the
//! experiment sweep driver, and the command-line front-end live in the
//! companion `lrcal-cli` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod anchoring;
pub mod cllr;
pub mod error;
mod math;
pub mod model;
pub mod rng;
pub mod score;
pub mod synth;

pub use anchoring::{
    build_pool, build_pool_ra, build_pool_sa, eligible_suspects, format_pool, subsample_sp, Pool,
    Scheme,
};
pub use cllr::{cllr, format_report, parse_trials, CllrReport, LlrTrial};
pub use error::{Error, Result};
pub use model::{
    fit_ml, fit_transform, predictive, suff_stats, update_posterior, GaussianParams, LlrTransform,
    Method, NormalGammaHyper, NormalGammaPosterior, Provenance, StudentTParams, SufficientStats,
    VARIANCE_FLOOR,
};
pub use score::{
    format_metadata, format_scores, parse_metadata, parse_scores, CaseSpec, Label, LabeledScore,
    ScoreMatrix, ScoreSet, UtteranceRecord, SYMMETRY_TOLERANCE,
};
pub use synth::{generate, make_cases, LabeledCase, NoiseModel, SynthConfig};
