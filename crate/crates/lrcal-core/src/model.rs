//! Score-to-LLR transforms.
//!
//! Two generative routes fit a univariate model per proposition and define
//! the LLR of a score as the log-density ratio:
//!
//! - **ML**: a Gaussian per class with the sample mean and the n-1
//!   (unbiased) variance. Note this denominator is the unbiased estimator,
//!   not the n-denominator solution of the strict maximum-likelihood
//!   derivative; it is implemented this way deliberately.
//! - **BAYES**: a fully-Bayesian Gaussian with a normal-gamma prior over
//!   (mean, precision). The posterior stays normal-gamma and the
//!   parameter-marginalized predictive density is a location-scale
//!   Student's t, whose heavier tails keep LLRs moderate where training
//!   data is sparse.
//!
//! The non-informative prior is the improper Jeffreys limit
//! (kappa0 -> 0, alpha0 -> -1/2, beta0 -> 0), under which the predictive
//! for n samples is t with nu = n-1, located at the sample mean, with
//! scale^2 = s^2 (1 + 1/n). Proper user-supplied hyperparameters are
//! supported as well.
//!
//! Everything is computed and composed in the log domain.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::math;
use crate::rng::RNG_ALGORITHM;
use crate::score::{Label, ScoreSet};

/// Lower bound applied to an ML variance estimate when the sample has zero
/// spread (in squared score units).
pub const VARIANCE_FLOOR: f64 = 1e-8;

/// Count, sample mean, and sum of squared deviations from the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SufficientStats {
    pub n: usize,
    pub mean: f64,
    pub ss: f64,
}

/// Compute sufficient statistics with a compensated two-pass scheme.
pub fn suff_stats(scores: &[f64]) -> Result<SufficientStats> {
    suff_stats_iter(scores.iter().copied(), scores.len())
}

pub(crate) fn suff_stats_iter(
    scores: impl Iterator<Item = f64> + Clone,
    n: usize,
) -> Result<SufficientStats> {
    if n == 0 {
        return Err(Error::InsufficientData {
            side: None,
            needed: 1,
            available: 0,
        });
    }
    if scores.clone().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite {
            context: "score passed to suff_stats".to_string(),
        });
    }
    let mean = math::sum_compensated(scores.clone()) / n as f64;
    let ss = math::sum_compensated(scores.map(|s| (s - mean) * (s - mean)));
    Ok(SufficientStats {
        n,
        mean,
        ss: ss.max(0.0),
    })
}

/// Gaussian location and variance for one proposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub mu: f64,
    pub sigma2: f64,
}

impl GaussianParams {
    pub fn log_pdf(&self, s: f64) -> f64 {
        -0.5 * (math::LN_2PI + math::ln(self.sigma2)) - (s - self.mu) * (s - self.mu) / (2.0 * self.sigma2)
    }
}

/// Fit a Gaussian per class: mean and n-1 variance, clamped to
/// [`VARIANCE_FLOOR`] when the sample is degenerate.
pub fn fit_ml(scores: &[f64]) -> Result<GaussianParams> {
    let st = suff_stats(scores)?;
    fit_ml_stats(&st)
}

pub(crate) fn fit_ml_stats(st: &SufficientStats) -> Result<GaussianParams> {
    if st.n < 2 {
        return Err(Error::InsufficientData {
            side: None,
            needed: 2,
            available: st.n,
        });
    }
    let sigma2 = (st.ss / (st.n as f64 - 1.0)).max(VARIANCE_FLOOR);
    Ok(GaussianParams { mu: st.mean, sigma2 })
}

/// Normal-gamma prior over (mean, precision).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalGammaHyper {
    /// Improper Jeffreys limit: kappa0 -> 0, alpha0 -> -1/2, beta0 -> 0.
    Jeffreys,
    Proper {
        mu0: f64,
        kappa0: f64,
        alpha0: f64,
        beta0: f64,
    },
}

impl NormalGammaHyper {
    pub fn proper(mu0: f64, kappa0: f64, alpha0: f64, beta0: f64) -> Result<Self> {
        let all_finite =
            mu0.is_finite() && kappa0.is_finite() && alpha0.is_finite() && beta0.is_finite();
        if !all_finite || kappa0 <= 0.0 || alpha0 <= 0.0 || beta0 <= 0.0 {
            return Err(Error::InvalidConfig {
                message: alloc::format!(
                    "proper normal-gamma prior needs finite mu0 and positive kappa0, alpha0, beta0 \
                     (got mu0={mu0}, kappa0={kappa0}, alpha0={alpha0}, beta0={beta0})"
                ),
            });
        }
        Ok(NormalGammaHyper::Proper {
            mu0,
            kappa0,
            alpha0,
            beta0,
        })
    }
}

/// Normal-gamma posterior hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalGammaPosterior {
    pub mu_n: f64,
    pub kappa_n: f64,
    pub alpha_n: f64,
    pub beta_n: f64,
}

/// Conjugate update of the normal-gamma prior with observed sufficient
/// statistics.
pub fn update_posterior(
    hyper: &NormalGammaHyper,
    st: &SufficientStats,
) -> Result<NormalGammaPosterior> {
    let n = st.n as f64;
    match *hyper {
        NormalGammaHyper::Jeffreys => {
            if st.n < 2 {
                return Err(Error::ImproperPosterior {
                    message: alloc::format!(
                        "the non-informative prior needs at least 2 samples, got {}",
                        st.n
                    ),
                });
            }
            if st.ss <= 0.0 {
                return Err(Error::ImproperPosterior {
                    message: "the non-informative prior needs samples with non-zero spread"
                        .to_string(),
                });
            }
            Ok(NormalGammaPosterior {
                mu_n: st.mean,
                kappa_n: n,
                alpha_n: (n - 1.0) / 2.0,
                beta_n: st.ss / 2.0,
            })
        }
        NormalGammaHyper::Proper {
            mu0,
            kappa0,
            alpha0,
            beta0,
        } => {
            let kappa_n = kappa0 + n;
            let mu_n = (kappa0 * mu0 + n * st.mean) / kappa_n;
            let alpha_n = alpha0 + n / 2.0;
            let beta_n =
                beta0 + st.ss / 2.0 + kappa0 * n * (st.mean - mu0) * (st.mean - mu0) / (2.0 * kappa_n);
            Ok(NormalGammaPosterior {
                mu_n,
                kappa_n,
                alpha_n,
                beta_n,
            })
        }
    }
}

/// Location-scale Student's-t parameters of the predictive density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudentTParams {
    pub nu: f64,
    pub loc: f64,
    pub scale: f64,
}

impl StudentTParams {
    pub fn log_pdf(&self, s: f64) -> f64 {
        let z = (s - self.loc) / self.scale;
        math::lgamma((self.nu + 1.0) / 2.0)
            - math::lgamma(self.nu / 2.0)
            - 0.5 * math::ln(self.nu * core::f64::consts::PI * self.scale * self.scale)
            - (self.nu + 1.0) / 2.0 * math::ln_1p(z * z / self.nu)
    }
}

/// Marginalize the Gaussian over the normal-gamma posterior:
/// nu = 2 alpha_n, loc = mu_n, scale^2 = beta_n (kappa_n + 1) / (alpha_n kappa_n).
pub fn predictive(post: &NormalGammaPosterior) -> Result<StudentTParams> {
    if post.alpha_n <= 0.0 {
        return Err(Error::ImproperPosterior {
            message: alloc::format!("predictive needs alpha_n > 0, got {}", post.alpha_n),
        });
    }
    let scale2 = post.beta_n * (post.kappa_n + 1.0) / (post.alpha_n * post.kappa_n);
    if !(scale2 > 0.0 && scale2.is_finite()) {
        return Err(Error::ImproperPosterior {
            message: alloc::format!("predictive scale^2 is not a positive finite value: {scale2}"),
        });
    }
    Ok(StudentTParams {
        nu: 2.0 * post.alpha_n,
        loc: post.mu_n,
        scale: math::sqrt(scale2),
    })
}

/// Which generative route fitted a transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Ml,
    Bayes,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Ml => write!(f, "ML"),
            Method::Bayes => write!(f, "BAYES"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ML" | "ml" => Ok(Method::Ml),
            "BAYES" | "bayes" => Ok(Method::Bayes),
            other => Err(Error::InvalidConfig {
                message: alloc::format!("unknown method `{other}` (expected ML or BAYES)"),
            }),
        }
    }
}

/// How a transform was fitted: training set sizes, the subsampling seed (if
/// any), and the prior (for the Bayesian route).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub np: usize,
    pub nd: usize,
    pub seed: Option<u64>,
    pub prior: Option<NormalGammaHyper>,
}

/// A fitted score-to-LLR transform: a density per proposition, of matching
/// kind, plus a record of how it was produced.
#[derive(Debug, Clone, PartialEq)]
pub enum LlrTransform {
    Ml {
        numerator: GaussianParams,
        denominator: GaussianParams,
        provenance: Provenance,
    },
    Bayes {
        numerator: StudentTParams,
        denominator: StudentTParams,
        provenance: Provenance,
    },
}

impl LlrTransform {
    pub fn method(&self) -> Method {
        match self {
            LlrTransform::Ml { .. } => Method::Ml,
            LlrTransform::Bayes { .. } => Method::Bayes,
        }
    }

    pub fn provenance(&self) -> &Provenance {
        match self {
            LlrTransform::Ml { provenance, .. } => provenance,
            LlrTransform::Bayes { provenance, .. } => provenance,
        }
    }

    /// Log-density of the given side at score `s`.
    pub fn log_pdf(&self, side: Label, s: f64) -> f64 {
        match (self, side) {
            (LlrTransform::Ml { numerator, .. }, Label::Hp) => numerator.log_pdf(s),
            (LlrTransform::Ml { denominator, .. }, Label::Hd) => denominator.log_pdf(s),
            (LlrTransform::Bayes { numerator, .. }, Label::Hp) => numerator.log_pdf(s),
            (LlrTransform::Bayes { denominator, .. }, Label::Hd) => denominator.log_pdf(s),
        }
    }

    /// Natural-log likelihood ratio of score `s`.
    pub fn llr(&self, s: f64) -> f64 {
        self.log_pdf(Label::Hp, s) - self.log_pdf(Label::Hd, s)
    }
}

fn tag_side(err: Error, side: Label) -> Error {
    match err {
        Error::InsufficientData {
            side: None,
            needed,
            available,
        } => Error::InsufficientData {
            side: Some(side),
            needed,
            available,
        },
        Error::ImproperPosterior { message } => Error::ImproperPosterior {
            message: alloc::format!("{side} side: {message}"),
        },
        other => other,
    }
}

/// Fit numerator (from `sp`) and denominator (from `sd`) independently.
/// `hyper` is only consulted by the Bayesian route. `seed` is recorded in
/// the provenance when the same-origin side was subsampled.
pub fn fit_transform(
    set: &ScoreSet,
    method: Method,
    hyper: &NormalGammaHyper,
    seed: Option<u64>,
) -> Result<LlrTransform> {
    for (side, n) in [(Label::Hp, set.np()), (Label::Hd, set.nd())] {
        if n < 2 {
            return Err(Error::InsufficientData {
                side: Some(side),
                needed: 2,
                available: n,
            });
        }
    }
    let sp_stats = suff_stats_iter(set.sp_values(), set.np()).map_err(|e| tag_side(e, Label::Hp))?;
    let sd_stats = suff_stats_iter(set.sd_values(), set.nd()).map_err(|e| tag_side(e, Label::Hd))?;
    match method {
        Method::Ml => Ok(LlrTransform::Ml {
            numerator: fit_ml_stats(&sp_stats).map_err(|e| tag_side(e, Label::Hp))?,
            denominator: fit_ml_stats(&sd_stats).map_err(|e| tag_side(e, Label::Hd))?,
            provenance: Provenance {
                np: set.np(),
                nd: set.nd(),
                seed,
                prior: None,
            },
        }),
        Method::Bayes => {
            let fit_side = |st: &SufficientStats, side: Label| -> Result<StudentTParams> {
                let post = update_posterior(hyper, st).map_err(|e| tag_side(e, side))?;
                predictive(&post).map_err(|e| tag_side(e, side))
            };
            Ok(LlrTransform::Bayes {
                numerator: fit_side(&sp_stats, Label::Hp)?,
                denominator: fit_side(&sd_stats, Label::Hd)?,
                provenance: Provenance {
                    np: set.np(),
                    nd: set.nd(),
                    seed,
                    prior: Some(*hyper),
                },
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Text serialization: flat `key = value` block, parameters at 17 significant
// digits so parsing round-trips bit-exactly.
// ---------------------------------------------------------------------------

fn push_kv_f64(out: &mut String, key: &str, v: f64) {
    out.push_str(&alloc::format!("{key} = {v:.16e}\n"));
}

impl LlrTransform {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&alloc::format!("method = {}\n", self.method()));
        match self {
            LlrTransform::Ml {
                numerator,
                denominator,
                ..
            } => {
                for (name, g) in [("numerator", numerator), ("denominator", denominator)] {
                    out.push_str(&alloc::format!("{name}.kind = gaussian\n"));
                    push_kv_f64(&mut out, &alloc::format!("{name}.mu"), g.mu);
                    push_kv_f64(&mut out, &alloc::format!("{name}.sigma2"), g.sigma2);
                }
            }
            LlrTransform::Bayes {
                numerator,
                denominator,
                ..
            } => {
                for (name, t) in [("numerator", numerator), ("denominator", denominator)] {
                    out.push_str(&alloc::format!("{name}.kind = student_t\n"));
                    push_kv_f64(&mut out, &alloc::format!("{name}.nu"), t.nu);
                    push_kv_f64(&mut out, &alloc::format!("{name}.loc"), t.loc);
                    push_kv_f64(&mut out, &alloc::format!("{name}.scale"), t.scale);
                }
            }
        }
        let prov = self.provenance();
        out.push_str(&alloc::format!("provenance.np = {}\n", prov.np));
        out.push_str(&alloc::format!("provenance.nd = {}\n", prov.nd));
        if let Some(seed) = prov.seed {
            out.push_str(&alloc::format!("provenance.seed = {seed}\n"));
        }
        out.push_str(&alloc::format!("provenance.rng = {RNG_ALGORITHM}\n"));
        match prov.prior {
            None => out.push_str("provenance.prior = none\n"),
            Some(NormalGammaHyper::Jeffreys) => out.push_str("provenance.prior = jeffreys\n"),
            Some(NormalGammaHyper::Proper {
                mu0,
                kappa0,
                alpha0,
                beta0,
            }) => {
                out.push_str("provenance.prior = proper\n");
                push_kv_f64(&mut out, "provenance.prior.mu0", mu0);
                push_kv_f64(&mut out, "provenance.prior.kappa0", kappa0);
                push_kv_f64(&mut out, "provenance.prior.alpha0", alpha0);
                push_kv_f64(&mut out, "provenance.prior.beta0", beta0);
            }
        }
        out
    }

    pub fn from_text(src: &str) -> Result<Self> {
        let mut kv: Vec<(String, String)> = Vec::new();
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: "expected `key = value`".to_string(),
            })?;
            let key = key.trim().to_string();
            if kv.iter().any(|(k, _)| *k == key) {
                return Err(Error::Parse {
                    line,
                    message: alloc::format!("duplicate key `{key}`"),
                });
            }
            kv.push((key, value.trim().to_string()));
        }
        let take = |key: &str| -> Result<&str> {
            kv.iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::Parse {
                    line: 0,
                    message: alloc::format!("missing key `{key}`"),
                })
        };
        let take_f64 = |key: &str| -> Result<f64> {
            let raw = take(key)?;
            raw.parse().map_err(|_| Error::Parse {
                line: 0,
                message: alloc::format!("invalid number `{raw}` for key `{key}`"),
            })
        };

        let method: Method = take("method")?.parse()?;
        let expected_kind = match method {
            Method::Ml => "gaussian",
            Method::Bayes => "student_t",
        };
        for name in ["numerator", "denominator"] {
            let kind = take(&alloc::format!("{name}.kind"))?;
            if kind != expected_kind {
                return Err(Error::Parse {
                    line: 0,
                    message: alloc::format!(
                        "{name}.kind `{kind}` does not match method {method} (expected {expected_kind})"
                    ),
                });
            }
        }

        let prior = match take("provenance.prior")? {
            "none" => None,
            "jeffreys" => Some(NormalGammaHyper::Jeffreys),
            "proper" => Some(NormalGammaHyper::proper(
                take_f64("provenance.prior.mu0")?,
                take_f64("provenance.prior.kappa0")?,
                take_f64("provenance.prior.alpha0")?,
                take_f64("provenance.prior.beta0")?,
            )?),
            other => {
                return Err(Error::Parse {
                    line: 0,
                    message: alloc::format!("unknown prior tag `{other}`"),
                })
            }
        };
        let parse_usize = |key: &str| -> Result<usize> {
            let raw = take(key)?;
            raw.parse().map_err(|_| Error::Parse {
                line: 0,
                message: alloc::format!("invalid count `{raw}` for key `{key}`"),
            })
        };
        let seed = match kv.iter().find(|(k, _)| k == "provenance.seed") {
            Some((_, v)) => Some(v.parse().map_err(|_| Error::Parse {
                line: 0,
                message: alloc::format!("invalid seed `{v}`"),
            })?),
            None => None,
        };
        let provenance = Provenance {
            np: parse_usize("provenance.np")?,
            nd: parse_usize("provenance.nd")?,
            seed,
            prior,
        };

        // Reject unknown keys so typos never pass silently.
        let known_prefix = |k: &str| {
            matches!(
                k,
                "method"
                    | "provenance.np"
                    | "provenance.nd"
                    | "provenance.seed"
                    | "provenance.rng"
                    | "provenance.prior"
                    | "provenance.prior.mu0"
                    | "provenance.prior.kappa0"
                    | "provenance.prior.alpha0"
                    | "provenance.prior.beta0"
            ) || k.starts_with("numerator.") || k.starts_with("denominator.")
        };
        if let Some((k, _)) = kv.iter().find(|(k, _)| !known_prefix(k)) {
            return Err(Error::Parse {
                line: 0,
                message: alloc::format!("unknown key `{k}`"),
            });
        }

        match method {
            Method::Ml => {
                let side = |name: &str| -> Result<GaussianParams> {
                    Ok(GaussianParams {
                        mu: take_f64(&alloc::format!("{name}.mu"))?,
                        sigma2: take_f64(&alloc::format!("{name}.sigma2"))?,
                    })
                };
                Ok(LlrTransform::Ml {
                    numerator: side("numerator")?,
                    denominator: side("denominator")?,
                    provenance,
                })
            }
            Method::Bayes => {
                let side = |name: &str| -> Result<StudentTParams> {
                    Ok(StudentTParams {
                        nu: take_f64(&alloc::format!("{name}.nu"))?,
                        loc: take_f64(&alloc::format!("{name}.loc"))?,
                        scale: take_f64(&alloc::format!("{name}.scale"))?,
                    })
                };
                Ok(LlrTransform::Bayes {
                    numerator: side("numerator")?,
                    denominator: side("denominator")?,
                    provenance,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn suff_stats_examples() {
        let st = suff_stats(&[-1.0, 1.0]).unwrap();
        assert_eq!((st.n, st.mean, st.ss), (2, 0.0, 2.0));

        let st = suff_stats(&[5.0]).unwrap();
        assert_eq!((st.n, st.mean, st.ss), (1, 5.0, 0.0));

        let st = suff_stats(&[2.0, 4.0, 6.0]).unwrap();
        assert_eq!((st.n, st.mean, st.ss), (3, 4.0, 8.0));

        assert!(matches!(
            suff_stats(&[]),
            Err(Error::InsufficientData { .. })
        ));
        assert!(matches!(
            suff_stats(&[1.0, f64::INFINITY]),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn suff_stats_is_accurate_with_large_offset() {
        // large common offset: a naive one-pass sum of squares would lose
        // everything; the two-pass scheme must stay at ~1e-12 relative
        let offset = 1e9;
        let scores: Vec<f64> = (0..1000).map(|i| offset + (i % 7) as f64).collect();
        let st = suff_stats(&scores).unwrap();
        // reference computed by sorting magnitudes and pairwise summation
        let mean_ref = {
            let mut vals: Vec<f64> = scores.iter().map(|s| s - offset).collect();
            vals.sort_by(f64::total_cmp);
            offset + vals.iter().sum::<f64>() / scores.len() as f64
        };
        let ss_ref = {
            let mut sq: Vec<f64> = scores.iter().map(|s| (s - mean_ref) * (s - mean_ref)).collect();
            sq.sort_by(f64::total_cmp);
            sq.iter().sum::<f64>()
        };
        assert!(close(st.mean, mean_ref, 1e-6));
        assert!((st.ss - ss_ref).abs() / ss_ref < 1e-12);
    }

    #[test]
    fn fit_ml_examples() {
        let g = fit_ml(&[-1.0, 1.0]).unwrap();
        assert_eq!((g.mu, g.sigma2), (0.0, 2.0));

        let g = fit_ml(&[3.0, 3.0]).unwrap();
        assert_eq!((g.mu, g.sigma2), (3.0, VARIANCE_FLOOR));

        let g = fit_ml(&[2.0, 4.0, 6.0]).unwrap();
        assert_eq!((g.mu, g.sigma2), (4.0, 4.0));

        assert_eq!(
            fit_ml(&[5.0]).unwrap_err(),
            Error::InsufficientData {
                side: None,
                needed: 2,
                available: 1
            }
        );
    }

    #[test]
    fn gaussian_log_pdf_reference_values() {
        // mpmath: -0.5 ln(2 pi), ln(1/sqrt(4 pi)), and an off-center point
        let std = GaussianParams { mu: 0.0, sigma2: 1.0 };
        assert!(close(std.log_pdf(0.0), -0.918_938_533_204_672_74, 1e-12));

        let wide = GaussianParams { mu: 0.0, sigma2: 2.0 };
        assert!(close(wide.log_pdf(0.0), -1.265_512_123_484_645_4, 1e-12));

        let g = GaussianParams { mu: 1.5, sigma2: 0.7 };
        assert!(close(g.log_pdf(-0.3), -3.054_886_775_521_020_8, 1e-12));

        // symmetry about the mean
        for d in [0.1, 1.0, 7.5] {
            assert_eq!(g.log_pdf(g.mu + d), g.log_pdf(g.mu - d));
        }
    }

    #[test]
    fn jeffreys_posterior_example() {
        let st = suff_stats(&[-1.0, 1.0]).unwrap();
        let post = update_posterior(&NormalGammaHyper::Jeffreys, &st).unwrap();
        assert_eq!(post.mu_n, 0.0);
        assert_eq!(post.kappa_n, 2.0);
        assert_eq!(post.alpha_n, 0.5);
        assert_eq!(post.beta_n, 1.0);
    }

    #[test]
    fn proper_posterior_example() {
        let hyper = NormalGammaHyper::proper(0.0, 1.0, 1.0, 1.0).unwrap();
        let st = suff_stats(&[-1.0, 1.0]).unwrap();
        let post = update_posterior(&hyper, &st).unwrap();
        assert_eq!(post.mu_n, 0.0);
        assert_eq!(post.kappa_n, 3.0);
        assert_eq!(post.alpha_n, 2.0);
        assert_eq!(post.beta_n, 2.0);
    }

    #[test]
    fn improper_posterior_errors() {
        let one = suff_stats(&[4.0]).unwrap();
        assert!(matches!(
            update_posterior(&NormalGammaHyper::Jeffreys, &one),
            Err(Error::ImproperPosterior { .. })
        ));
        let tied = suff_stats(&[4.0, 4.0]).unwrap();
        assert!(matches!(
            update_posterior(&NormalGammaHyper::Jeffreys, &tied),
            Err(Error::ImproperPosterior { .. })
        ));
    }

    #[test]
    fn batch_update_equals_sequential_updates() {
        // proper prior: one batch of two samples vs two single-sample steps
        let hyper = NormalGammaHyper::proper(0.3, 1.5, 2.0, 1.2).unwrap();
        let batch = update_posterior(&hyper, &suff_stats(&[-1.0, 2.0]).unwrap()).unwrap();

        let step1 = update_posterior(&hyper, &suff_stats(&[-1.0]).unwrap()).unwrap();
        let mid = NormalGammaHyper::proper(step1.mu_n, step1.kappa_n, step1.alpha_n, step1.beta_n)
            .unwrap();
        let step2 = update_posterior(&mid, &suff_stats(&[2.0]).unwrap()).unwrap();

        assert!(close(batch.mu_n, step2.mu_n, 1e-12));
        assert!(close(batch.kappa_n, step2.kappa_n, 1e-12));
        assert!(close(batch.alpha_n, step2.alpha_n, 1e-12));
        assert!(close(batch.beta_n, step2.beta_n, 1e-12));
    }

    #[test]
    fn sequential_updates_are_permutation_invariant() {
        let hyper = NormalGammaHyper::proper(0.0, 0.7, 1.3, 0.9).unwrap();
        let data = [1.0, -2.5, 0.25, 3.75];
        let run = |order: &[usize]| {
            let mut h = hyper;
            for &i in order {
                let post = update_posterior(&h, &suff_stats(&[data[i]]).unwrap()).unwrap();
                h = NormalGammaHyper::proper(post.mu_n, post.kappa_n, post.alpha_n, post.beta_n)
                    .unwrap();
            }
            h
        };
        let a = run(&[0, 1, 2, 3]);
        let b = run(&[3, 1, 0, 2]);
        match (a, b) {
            (
                NormalGammaHyper::Proper {
                    mu0: m1,
                    kappa0: k1,
                    alpha0: a1,
                    beta0: b1,
                },
                NormalGammaHyper::Proper {
                    mu0: m2,
                    kappa0: k2,
                    alpha0: a2,
                    beta0: b2,
                },
            ) => {
                assert!(close(m1, m2, 1e-12));
                assert!(close(k1, k2, 1e-12));
                assert!(close(a1, a2, 1e-12));
                assert!(close(b1, b2, 1e-12));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn jeffreys_predictive_example() {
        let st = suff_stats(&[-1.0, 1.0]).unwrap();
        let post = update_posterior(&NormalGammaHyper::Jeffreys, &st).unwrap();
        let t = predictive(&post).unwrap();
        assert_eq!(t.nu, 1.0);
        assert_eq!(t.loc, 0.0);
        assert!(close(t.scale, math::sqrt(3.0), 1e-15));
        // density at 0: 1/(pi sqrt(3)), mpmath reference
        assert!(close(math::exp(t.log_pdf(0.0)), 0.183_776_298_473_930_68, 1e-12));
    }

    #[test]
    fn student_t_log_pdf_reference_values() {
        let cauchy = StudentTParams {
            nu: 1.0,
            loc: 0.0,
            scale: 1.0,
        };
        assert!(close(cauchy.log_pdf(0.0), -1.144_729_885_849_400_2, 1e-12));

        let t = StudentTParams {
            nu: 3.0,
            loc: 1.0,
            scale: 2.0,
        };
        assert!(close(t.log_pdf(4.0), -2.813_267_606_054_300_4, 1e-12));

        // symmetry about loc
        for d in [0.5, 2.0, 40.0] {
            assert_eq!(t.log_pdf(t.loc + d), t.log_pdf(t.loc - d));
        }
    }

    #[test]
    fn improper_predictive_is_rejected() {
        let post = NormalGammaPosterior {
            mu_n: 0.0,
            kappa_n: 1.0,
            alpha_n: 0.0,
            beta_n: 1.0,
        };
        assert!(matches!(
            predictive(&post),
            Err(Error::ImproperPosterior { .. })
        ));
    }

    fn mirror_set() -> ScoreSet {
        ScoreSet::from_values(vec![2.0, 4.0], vec![-4.0, -2.0]).unwrap()
    }

    #[test]
    fn fit_transform_ml_example() {
        let t = fit_transform(&mirror_set(), Method::Ml, &NormalGammaHyper::Jeffreys, None).unwrap();
        match &t {
            LlrTransform::Ml {
                numerator,
                denominator,
                provenance,
            } => {
                assert_eq!((numerator.mu, numerator.sigma2), (3.0, 2.0));
                assert_eq!((denominator.mu, denominator.sigma2), (-3.0, 2.0));
                assert_eq!((provenance.np, provenance.nd), (2, 2));
                assert_eq!(provenance.prior, None);
            }
            _ => panic!("expected ML transform"),
        }
    }

    #[test]
    fn fit_transform_bayes_example() {
        let t = fit_transform(&mirror_set(), Method::Bayes, &NormalGammaHyper::Jeffreys, None)
            .unwrap();
        match &t {
            LlrTransform::Bayes {
                numerator,
                denominator,
                ..
            } => {
                assert_eq!((numerator.nu, numerator.loc), (1.0, 3.0));
                assert!(close(numerator.scale, math::sqrt(3.0), 1e-15));
                assert_eq!((denominator.nu, denominator.loc), (1.0, -3.0));
                assert!(close(denominator.scale, math::sqrt(3.0), 1e-15));
            }
            _ => panic!("expected BAYES transform"),
        }
    }

    #[test]
    fn fit_transform_insufficient_side_is_named() {
        let set = ScoreSet::from_values(vec![1.0], vec![-1.0, -2.0]).unwrap();
        assert_eq!(
            fit_transform(&set, Method::Ml, &NormalGammaHyper::Jeffreys, None).unwrap_err(),
            Error::InsufficientData {
                side: Some(Label::Hp),
                needed: 2,
                available: 1
            }
        );
    }

    #[test]
    fn llr_examples() {
        let ml = fit_transform(&mirror_set(), Method::Ml, &NormalGammaHyper::Jeffreys, None)
            .unwrap();
        // mirror symmetry at 0
        assert!(close(ml.llr(0.0), 0.0, 1e-12));
        // closed form: the normalizers cancel, (s+3)^2/4 - (s-3)^2/4 at s=3 is 9
        assert!(close(ml.llr(3.0), 9.0, 1e-12));

        let bayes = fit_transform(&mirror_set(), Method::Bayes, &NormalGammaHyper::Jeffreys, None)
            .unwrap();
        assert!(bayes.llr(30.0).abs() < ml.llr(30.0).abs());
    }

    #[test]
    fn class_fits_are_independent() {
        let a = ScoreSet::from_values(vec![2.0, 4.0, 5.5], vec![-4.0, -2.0]).unwrap();
        let b = ScoreSet::from_values(vec![2.0, 4.0, 5.5], vec![-10.0, -7.5, 0.25, 1.0]).unwrap();
        for method in [Method::Ml, Method::Bayes] {
            let ta = fit_transform(&a, method, &NormalGammaHyper::Jeffreys, None).unwrap();
            let tb = fit_transform(&b, method, &NormalGammaHyper::Jeffreys, None).unwrap();
            match (&ta, &tb) {
                (
                    LlrTransform::Ml { numerator: na, .. },
                    LlrTransform::Ml { numerator: nb, .. },
                ) => {
                    assert_eq!(na.mu.to_bits(), nb.mu.to_bits());
                    assert_eq!(na.sigma2.to_bits(), nb.sigma2.to_bits());
                }
                (
                    LlrTransform::Bayes { numerator: na, .. },
                    LlrTransform::Bayes { numerator: nb, .. },
                ) => {
                    assert_eq!(na.nu.to_bits(), nb.nu.to_bits());
                    assert_eq!(na.loc.to_bits(), nb.loc.to_bits());
                    assert_eq!(na.scale.to_bits(), nb.scale.to_bits());
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn transform_text_round_trip() {
        let set = ScoreSet::from_values(vec![2.0, 4.0, 4.5], vec![-4.0, -2.0, -1.25]).unwrap();
        for method in [Method::Ml, Method::Bayes] {
            let t = fit_transform(&set, method, &NormalGammaHyper::Jeffreys, Some(42)).unwrap();
            let text = t.to_text();
            let back = LlrTransform::from_text(&text).unwrap();
            assert_eq!(t, back);
        }
        // proper prior variant
        let hyper = NormalGammaHyper::proper(0.1, 2.0, 3.0, 4.0).unwrap();
        let t = fit_transform(&set, Method::Bayes, &hyper, None).unwrap();
        assert_eq!(LlrTransform::from_text(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn transform_text_rejects_unknown_and_mismatched_keys() {
        let set = mirror_set();
        let t = fit_transform(&set, Method::Ml, &NormalGammaHyper::Jeffreys, None).unwrap();
        let mut text = t.to_text();
        text.push_str("bogus.key = 1\n");
        assert!(matches!(
            LlrTransform::from_text(&text),
            Err(Error::Parse { .. })
        ));
        let swapped = t.to_text().replace("gaussian", "student_t");
        assert!(matches!(
            LlrTransform::from_text(&swapped),
            Err(Error::Parse { .. })
        ));
    }
}
