//! Error type shared by all modules of the crate.

use alloc::string::String;
use core::fmt;

use crate::score::Label;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A text input could not be parsed; `line` is 1-based.
    Parse { line: usize, message: String },
    /// An utterance id appeared twice in a metadata source.
    DuplicateUtterance { line: usize, utt_id: String },
    /// A score line or query referenced an utterance that is not in the metadata.
    UnknownUtterance { utt_id: String },
    /// The same unordered pair was given two scores that differ beyond tolerance.
    AsymmetricScore {
        utt_a: String,
        utt_b: String,
        first: f64,
        second: f64,
    },
    /// No score is stored for the queried pair.
    ScoreNotFound { utt_a: String, utt_b: String },
    /// A case specification violates its invariants.
    InvalidCase { message: String },
    /// Pool construction produced no scores for one side.
    EmptyPool { side: Label },
    /// Fewer scores are available than an operation requires.
    InsufficientData {
        side: Option<Label>,
        needed: usize,
        available: usize,
    },
    /// A score, LLR, or parameter that must be finite was not.
    NonFinite { context: String },
    /// A labeled score carried the wrong label for the set it was placed in.
    MixedLabels { expected: Label },
    /// The posterior (or predictive) is improper for the given prior and data.
    ImproperPosterior { message: String },
    /// A configuration value or argument is invalid.
    InvalidConfig { message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::DuplicateUtterance { line, utt_id } => {
                write!(f, "duplicate utterance id `{utt_id}` at line {line}")
            }
            Error::UnknownUtterance { utt_id } => {
                write!(f, "unknown utterance id `{utt_id}`")
            }
            Error::AsymmetricScore {
                utt_a,
                utt_b,
                first,
                second,
            } => write!(
                f,
                "asymmetric score for pair ({utt_a}, {utt_b}): {first} vs {second}"
            ),
            Error::ScoreNotFound { utt_a, utt_b } => {
                write!(f, "no score stored for pair ({utt_a}, {utt_b})")
            }
            Error::InvalidCase { message } => write!(f, "invalid case: {message}"),
            Error::EmptyPool { side } => {
                write!(f, "insufficient data: the {side} pool is empty")
            }
            Error::InsufficientData {
                side,
                needed,
                available,
            } => match side {
                Some(side) => write!(
                    f,
                    "insufficient data on the {side} side: need {needed}, have {available}"
                ),
                None => write!(f, "insufficient data: need {needed}, have {available}"),
            },
            Error::NonFinite { context } => write!(f, "non-finite value: {context}"),
            Error::MixedLabels { expected } => {
                write!(f, "mixed labels: expected every score to be labeled {expected}")
            }
            Error::ImproperPosterior { message } => {
                write!(f, "improper posterior: {message}")
            }
            Error::InvalidConfig { message } => write!(f, "invalid configuration: {message}"),
        }
    }
}

impl core::error::Error for Error {}
