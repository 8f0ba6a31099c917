//! Synthetic speaker populations and score matrices.
//!
//! The generator draws a complete symmetric matrix over a population of
//! speakers: same-speaker comparisons around `mu_tar` (plus a per-speaker
//! offset that makes speakers individually easier or harder, and so makes
//! anchoring choices matter), different-speaker comparisons around
//! `mu_non`, and an additive penalty on any comparison whose two
//! utterances carry different condition tags. Noise is Gaussian by
//! default; a heavy-tailed Student's-t variant is available to exercise
//! the calibration models off-assumption.
//!
//! Everything is a pure function of the seed: conditions are assigned
//! first (one draw per utterance), then speaker offsets (one per speaker),
//! then pair noise in index order.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::anchoring::eligible_suspects;
use crate::error::{Error, Result};
use crate::rng;
use crate::score::{CaseSpec, ScoreMatrix, UtteranceRecord};

/// Noise family for the score draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    Gaussian,
    /// Student's-t noise with the given degrees of freedom, scaled by the
    /// configured spread (the spread is then a scale, not a standard
    /// deviation).
    StudentT { nu: f64 },
}

/// Configuration of one synthetic dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_speakers: u32,
    pub utts_per_speaker: u32,
    /// Condition tags with their per-utterance assignment probabilities;
    /// empty means utterances carry no condition tag.
    pub conditions: Vec<(String, f64)>,
    pub mu_tar: f64,
    pub sigma_tar: f64,
    pub mu_non: f64,
    pub sigma_non: f64,
    /// Standard deviation of the per-speaker offset added to that
    /// speaker's same-speaker scores.
    pub speaker_shift_sigma: f64,
    /// Penalty subtracted from any score whose utterances differ in condition.
    pub mismatch_shift: f64,
    pub noise: NoiseModel,
    pub seed: u64,
}

impl SynthConfig {
    /// The reference experiment configuration shipped with the crate.
    pub fn reference() -> Self {
        SynthConfig {
            n_speakers: 50,
            utts_per_speaker: 12,
            conditions: alloc::vec![("a".to_string(), 0.5), ("b".to_string(), 0.5)],
            mu_tar: 4.0,
            sigma_tar: 1.0,
            mu_non: -4.0,
            sigma_non: 1.0,
            speaker_shift_sigma: 1.0,
            mismatch_shift: 2.0,
            noise: NoiseModel::Gaussian,
            seed: 42,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |message: String| Err(Error::InvalidConfig { message });
        if self.n_speakers < 2 {
            return bad(alloc::format!("n_speakers must be >= 2, got {}", self.n_speakers));
        }
        if self.utts_per_speaker < 2 {
            return bad(alloc::format!(
                "utts_per_speaker must be >= 2, got {}",
                self.utts_per_speaker
            ));
        }
        if !(self.sigma_tar > 0.0) || !(self.sigma_non > 0.0) {
            return bad("sigma_tar and sigma_non must be positive".to_string());
        }
        if !(self.mu_tar > self.mu_non) {
            return bad(alloc::format!(
                "mu_tar ({}) must exceed mu_non ({})",
                self.mu_tar,
                self.mu_non
            ));
        }
        if self.speaker_shift_sigma < 0.0 {
            return bad("speaker_shift_sigma must be non-negative".to_string());
        }
        if !self.conditions.is_empty() {
            if self.conditions.iter().any(|(_, p)| *p < 0.0) {
                return bad("condition probabilities must be non-negative".to_string());
            }
            let total: f64 = self.conditions.iter().map(|(_, p)| p).sum();
            if (total - 1.0).abs() > 1e-9 {
                return bad(alloc::format!(
                    "condition probabilities must sum to 1, got {total}"
                ));
            }
        }
        if let NoiseModel::StudentT { nu } = self.noise {
            if !(nu > 0.0) {
                return bad(alloc::format!("student-t noise needs nu > 0, got {nu}"));
            }
        }
        Ok(())
    }
}

fn noise_draw(rng: &mut impl RngCore, noise: NoiseModel) -> f64 {
    match noise {
        NoiseModel::Gaussian => rng::standard_normal(rng),
        NoiseModel::StudentT { nu } => rng::student_t(rng, nu),
    }
}

fn decimal_width(n: u32) -> usize {
    let mut width = 1;
    let mut value = n;
    while value >= 10 {
        width += 1;
        value /= 10;
    }
    width.max(2)
}

/// Generate a complete symmetric score matrix; the utterance metadata is
/// carried inside the returned matrix.
pub fn generate(config: &SynthConfig) -> Result<ScoreMatrix> {
    config.validate()?;
    let mut rng = rng::rng_from_seed(config.seed);

    let spk_width = decimal_width(config.n_speakers);
    let utt_width = decimal_width(config.utts_per_speaker);

    let n_utts = (config.n_speakers * config.utts_per_speaker) as usize;
    let mut records = Vec::with_capacity(n_utts);
    let mut speaker_of = Vec::with_capacity(n_utts);
    let mut condition_of: Vec<Option<usize>> = Vec::with_capacity(n_utts);

    for spk in 0..config.n_speakers {
        let speaker_id = alloc::format!("s{:0width$}", spk + 1, width = spk_width);
        for utt in 0..config.utts_per_speaker {
            let utt_id =
                alloc::format!("{speaker_id}_u{:0width$}", utt + 1, width = utt_width);
            let condition = if config.conditions.is_empty() {
                None
            } else {
                let draw = rng::uniform_f64(&mut rng);
                let mut acc = 0.0;
                let mut chosen = config.conditions.len() - 1;
                for (ci, (_, p)) in config.conditions.iter().enumerate() {
                    acc += p;
                    if draw < acc {
                        chosen = ci;
                        break;
                    }
                }
                Some(chosen)
            };
            condition_of.push(condition);
            records.push(UtteranceRecord {
                utt_id,
                speaker_id: speaker_id.clone(),
                condition: condition.map(|ci| config.conditions[ci].0.clone()),
            });
        }
    }

    let offsets: Vec<f64> = (0..config.n_speakers)
        .map(|_| rng::standard_normal(&mut rng) * config.speaker_shift_sigma)
        .collect();

    let mut matrix = ScoreMatrix::new(records)?;
    for i in 0..n_utts as u32 {
        speaker_of.push(i / config.utts_per_speaker);
    }
    for i in 0..n_utts as u32 {
        for j in (i + 1)..n_utts as u32 {
            let same_speaker = speaker_of[i as usize] == speaker_of[j as usize];
            let mismatch = match (condition_of[i as usize], condition_of[j as usize]) {
                (Some(a), Some(b)) if a != b => -config.mismatch_shift,
                _ => 0.0,
            };
            let z = noise_draw(&mut rng, config.noise);
            let value = if same_speaker {
                config.mu_tar + offsets[speaker_of[i as usize] as usize] + mismatch
                    + z * config.sigma_tar
            } else {
                config.mu_non + mismatch + z * config.sigma_non
            };
            let (a, b) = (
                matrix.utterances()[i as usize].utt_id.clone(),
                matrix.utterances()[j as usize].utt_id.clone(),
            );
            matrix.insert_score_idx(i, j, value, &a, &b)?;
        }
    }
    Ok(matrix)
}

/// A drawn case with its ground-truth origin.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledCase {
    pub case: CaseSpec,
    pub same_origin: bool,
}

/// Draw cases uniformly: pick an eligible suspect, pick `r` from the
/// suspect's utterances, and pick `q` either from the suspect (same-origin)
/// or from another speaker, according to `same_origin_fraction`.
pub fn make_cases(
    meta: &[UtteranceRecord],
    n_cases: usize,
    same_origin_fraction: f64,
    min_suspect_utts: usize,
    seed: u64,
) -> Result<Vec<LabeledCase>> {
    if !(0.0..=1.0).contains(&same_origin_fraction) {
        return Err(Error::InvalidConfig {
            message: alloc::format!(
                "same_origin_fraction must be in [0, 1], got {same_origin_fraction}"
            ),
        });
    }
    let eligible = eligible_suspects(meta, min_suspect_utts);
    if eligible.is_empty() {
        return Err(Error::InvalidConfig {
            message: alloc::format!(
                "no speaker has more than {min_suspect_utts} utterances; cannot draw cases"
            ),
        });
    }
    // utterances per speaker, in metadata order
    let utts_of = |speaker: &str| -> Vec<&UtteranceRecord> {
        meta.iter().filter(|r| r.speaker_id == speaker).collect()
    };
    let mut speakers: Vec<&str> = Vec::new();
    for rec in meta {
        if !speakers.contains(&rec.speaker_id.as_str()) {
            speakers.push(&rec.speaker_id);
        }
    }

    let mut rng = rng::rng_from_seed(seed);
    let mut cases = Vec::with_capacity(n_cases);
    for _ in 0..n_cases {
        let same_origin = rng::uniform_f64(&mut rng) < same_origin_fraction;
        let suspect = &eligible[rng::uniform_index(&mut rng, eligible.len())];
        let own = utts_of(suspect);
        let r = own[rng::uniform_index(&mut rng, own.len())];
        let q = if same_origin {
            if own.len() < 2 {
                return Err(Error::InvalidCase {
                    message: alloc::format!(
                        "suspect `{suspect}` has a single utterance; cannot draw a same-origin case"
                    ),
                });
            }
            loop {
                let cand = own[rng::uniform_index(&mut rng, own.len())];
                if cand.utt_id != r.utt_id {
                    break cand;
                }
            }
        } else {
            let others: Vec<&str> = speakers
                .iter()
                .copied()
                .filter(|s| s != &suspect.as_str())
                .collect();
            if others.is_empty() {
                return Err(Error::InvalidCase {
                    message: "a different-origin case needs a second speaker".to_string(),
                });
            }
            let other = others[rng::uniform_index(&mut rng, others.len())];
            let pool = utts_of(other);
            pool[rng::uniform_index(&mut rng, pool.len())]
        };
        cases.push(LabeledCase {
            case: CaseSpec {
                q: q.utt_id.clone(),
                r: r.utt_id.clone(),
                suspect: suspect.clone(),
            },
            same_origin,
        });
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tiny_config() -> SynthConfig {
        SynthConfig {
            n_speakers: 2,
            utts_per_speaker: 2,
            conditions: vec![],
            mu_tar: 4.0,
            sigma_tar: 1.0,
            mu_non: -4.0,
            sigma_non: 1.0,
            speaker_shift_sigma: 0.0,
            mismatch_shift: 0.0,
            noise: NoiseModel::Gaussian,
            seed: 7,
        }
    }

    #[test]
    fn tiny_matrix_counts() {
        let m = generate(&tiny_config()).unwrap();
        // C(4,2) = 6 scores: 2 same-speaker, 4 different-speaker
        assert_eq!(m.num_utterances(), 4);
        assert_eq!(m.num_scores(), 6);
        let same: Vec<f64> = m
            .iter_scores()
            .filter(|(a, b, _)| a.speaker_id == b.speaker_id)
            .map(|(_, _, v)| v)
            .collect();
        assert_eq!(same.len(), 2);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate(&SynthConfig::reference()).unwrap();
        let b = generate(&SynthConfig::reference()).unwrap();
        assert_eq!(a, b);
        let mut different = SynthConfig::reference();
        different.seed = 43;
        assert_ne!(generate(&different).unwrap(), a);
    }

    #[test]
    fn config_validation() {
        let mut c = tiny_config();
        c.n_speakers = 1;
        assert!(matches!(generate(&c), Err(Error::InvalidConfig { .. })));
        let mut c = tiny_config();
        c.utts_per_speaker = 1;
        assert!(matches!(generate(&c), Err(Error::InvalidConfig { .. })));
        let mut c = tiny_config();
        c.mu_tar = -5.0;
        assert!(matches!(generate(&c), Err(Error::InvalidConfig { .. })));
        let mut c = tiny_config();
        c.conditions = vec![("a".into(), 0.7), ("b".into(), 0.7)];
        assert!(matches!(generate(&c), Err(Error::InvalidConfig { .. })));
    }

    #[test]
    fn moments_match_configuration() {
        // no speaker effect, single condition: raw class distributions
        let config = SynthConfig {
            n_speakers: 24,
            utts_per_speaker: 10,
            conditions: vec![],
            speaker_shift_sigma: 0.0,
            mismatch_shift: 0.0,
            seed: 11,
            ..SynthConfig::reference()
        };
        let m = generate(&config).unwrap();
        let mut same = Vec::new();
        let mut diff = Vec::new();
        for (a, b, v) in m.iter_scores() {
            if a.speaker_id == b.speaker_id {
                same.push(v);
            } else {
                diff.push(v);
            }
        }
        assert!(same.len() > 1000);
        assert!(diff.len() > 10_000);
        for (vals, mu, sigma) in [(&same, 4.0, 1.0), (&diff, -4.0, 1.0)] {
            let n = vals.len() as f64;
            let mean: f64 = vals.iter().sum::<f64>() / n;
            let var: f64 = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
            assert!(
                (mean - mu).abs() < 4.0 * sigma / n.sqrt(),
                "mean {mean} vs {mu}"
            );
            assert!((var - sigma * sigma).abs() < 0.1 * sigma * sigma, "var {var}");
        }
    }

    #[test]
    fn condition_mismatch_shifts_scores() {
        let config = SynthConfig {
            n_speakers: 30,
            utts_per_speaker: 10,
            speaker_shift_sigma: 0.0,
            mismatch_shift: 2.0,
            seed: 3,
            ..SynthConfig::reference()
        };
        let m = generate(&config).unwrap();
        let mut matched = Vec::new();
        let mut mismatched = Vec::new();
        for (a, b, v) in m.iter_scores() {
            if a.speaker_id != b.speaker_id {
                if a.condition == b.condition {
                    matched.push(v);
                } else {
                    mismatched.push(v);
                }
            }
        }
        let mean = |v: &Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
        let se = |v: &Vec<f64>| 1.0 / (v.len() as f64).sqrt();
        let gap = mean(&mismatched) - mean(&matched);
        let tol = 4.0 * (se(&matched) + se(&mismatched));
        assert!(
            (gap + config.mismatch_shift).abs() < tol,
            "gap {gap} vs {} (tol {tol})",
            -config.mismatch_shift
        );
    }

    #[test]
    fn student_t_noise_generates_and_validates() {
        let config = SynthConfig {
            noise: NoiseModel::StudentT { nu: 3.0 },
            n_speakers: 5,
            utts_per_speaker: 4,
            ..SynthConfig::reference()
        };
        let m = generate(&config).unwrap();
        assert_eq!(m.num_scores(), 190);
    }

    #[test]
    fn make_cases_fractions() {
        let m = generate(&SynthConfig {
            n_speakers: 8,
            utts_per_speaker: 6,
            ..SynthConfig::reference()
        })
        .unwrap();
        let meta = m.utterances();

        let all_same = make_cases(meta, 50, 1.0, 5, 1).unwrap();
        assert!(all_same.iter().all(|c| c.same_origin));
        for c in &all_same {
            let q_speaker = &meta[m.index_of(&c.case.q).unwrap() as usize].speaker_id;
            assert_eq!(q_speaker, &c.case.suspect);
            assert_ne!(c.case.q, c.case.r);
        }

        let all_diff = make_cases(meta, 50, 0.0, 5, 2).unwrap();
        assert!(all_diff.iter().all(|c| !c.same_origin));
        for c in &all_diff {
            let q_speaker = &meta[m.index_of(&c.case.q).unwrap() as usize].speaker_id;
            assert_ne!(q_speaker, &c.case.suspect);
        }
    }

    #[test]
    fn make_cases_binomial_fraction() {
        let m = generate(&SynthConfig {
            n_speakers: 6,
            utts_per_speaker: 8,
            ..SynthConfig::reference()
        })
        .unwrap();
        let cases = make_cases(m.utterances(), 10_000, 0.5, 5, 99).unwrap();
        let frac = cases.iter().filter(|c| c.same_origin).count() as f64 / cases.len() as f64;
        assert!((frac - 0.5).abs() < 0.02, "fraction {frac}");
    }

    #[test]
    fn make_cases_is_deterministic_and_validates() {
        let m = generate(&SynthConfig {
            n_speakers: 4,
            utts_per_speaker: 5,
            ..SynthConfig::reference()
        })
        .unwrap();
        let a = make_cases(m.utterances(), 20, 0.4, 2, 5).unwrap();
        let b = make_cases(m.utterances(), 20, 0.4, 2, 5).unwrap();
        assert_eq!(a, b);

        assert!(matches!(
            make_cases(m.utterances(), 5, 0.5, 100, 1),
            Err(Error::InvalidConfig { .. })
        ));
        assert!(matches!(
            make_cases(m.utterances(), 5, 1.5, 2, 1),
            Err(Error::InvalidConfig { .. })
        ));
    }

    #[test]
    fn make_cases_impossible_draw_errors() {
        // single speaker: different-origin cases are impossible
        let meta = crate::score::parse_metadata("a1 A\na2 A\na3 A").unwrap();
        let err = make_cases(&meta, 10, 0.0, 1, 7).unwrap_err();
        assert!(matches!(err, Error::InvalidCase { .. }));
    }
}
