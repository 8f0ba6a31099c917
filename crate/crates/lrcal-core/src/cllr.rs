//! Cllr: the proper-scoring-rule cost of a set of labeled LLRs, in bits.
//!
//! Cllr = 1/(2 Np) sum over Hp of log2(1 + e^-llr)
//!      + 1/(2 Nd) sum over Hd of log2(1 + e^+llr)
//!
//! with natural-log LLR inputs. The two proposition sums are weighted
//! equally regardless of class imbalance, so the metric is prior-neutral;
//! an LLR of zero everywhere costs exactly 1 bit, and values below 1 mean
//! the system is informative. The softplus terms are evaluated in their
//! stable form, so inputs up to |llr| of several thousand neither overflow
//! nor underflow.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::score::Label;

/// One evaluated trial: natural-log LLR plus the ground-truth proposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LlrTrial {
    pub llr: f64,
    pub label: Label,
}

/// Result of a Cllr evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CllrReport {
    /// Cost in bits; 0 is perfect, 1 matches the always-zero reference.
    pub cllr: f64,
    pub n_p: usize,
    pub n_d: usize,
    /// Whether cllr < 1.
    pub informative: bool,
}

/// log2(1 + e^x), stable for large |x|.
fn log2_1p_exp(x: f64) -> f64 {
    math::softplus(x) / core::f64::consts::LN_2
}

pub fn cllr(trials: &[LlrTrial]) -> Result<CllrReport> {
    if let Some(t) = trials.iter().find(|t| !t.llr.is_finite()) {
        return Err(Error::NonFinite {
            context: alloc::format!("LLR of a {} trial", t.label),
        });
    }
    let n_p = trials.iter().filter(|t| t.label == Label::Hp).count();
    let n_d = trials.len() - n_p;
    if n_p == 0 || n_d == 0 {
        let side = if n_p == 0 { Label::Hp } else { Label::Hd };
        return Err(Error::InsufficientData {
            side: Some(side),
            needed: 1,
            available: 0,
        });
    }
    let sum_p = math::sum_compensated(
        trials
            .iter()
            .filter(|t| t.label == Label::Hp)
            .map(|t| log2_1p_exp(-t.llr)),
    );
    let sum_d = math::sum_compensated(
        trials
            .iter()
            .filter(|t| t.label == Label::Hd)
            .map(|t| log2_1p_exp(t.llr)),
    );
    let cllr = 0.5 * (sum_p / n_p as f64 + sum_d / n_d as f64);
    Ok(CllrReport {
        cllr,
        n_p,
        n_d,
        informative: cllr < 1.0,
    })
}

/// Parse an LLR trial file: one `<case_id> <Hp|Hd> <llr>` per line,
/// `#` comments and blank lines ignored.
pub fn parse_trials(src: &str) -> Result<Vec<(String, LlrTrial)>> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(Error::Parse {
                line,
                message: alloc::format!(
                    "expected `<case_id> <Hp|Hd> <llr>`, got {} fields",
                    tokens.len()
                ),
            });
        }
        let label: Label = tokens[1].parse().map_err(|_| Error::Parse {
            line,
            message: alloc::format!("invalid label `{}` (expected Hp or Hd)", tokens[1]),
        })?;
        let llr: f64 = tokens[2].parse().map_err(|_| Error::Parse {
            line,
            message: alloc::format!("invalid LLR `{}`", tokens[2]),
        })?;
        if !llr.is_finite() {
            return Err(Error::Parse {
                line,
                message: "non-finite LLR".to_string(),
            });
        }
        out.push((tokens[0].to_string(), LlrTrial { llr, label }));
    }
    Ok(out)
}

/// Render a report as the single CSV row `n_p,n_d,cllr,informative`.
pub fn format_report(report: &CllrReport) -> String {
    alloc::format!(
        "{},{},{},{}",
        report.n_p,
        report.n_d,
        report.cllr,
        report.informative
    )
}
