//! Utterance metadata, symmetric score matrices, case specifications, and
//! labeled score sets.
//!
//! Text formats:
//! - metadata: one utterance per line, `<utt_id> <speaker_id> [<condition>]`,
//!   whitespace-separated, `#` comment lines and blank lines ignored;
//! - scores: one comparison per line, `<utt_id_1> <utt_id_2> <score>`.
//!
//! Scores are stored under unordered pair keys, so a lookup is symmetric in
//! its arguments by construction. Floats are written with Rust's shortest
//! round-trip formatting, so parse(format(m)) reproduces every stored score
//! bit-exactly.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Two stored values for the same unordered pair may differ by at most this
/// much before loading fails with an asymmetry error.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Proposition label attached to a training score or an evaluated LLR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    /// Same-origin proposition: the questioned material comes from the suspect.
    Hp,
    /// Different-origin proposition: it comes from another member of the population.
    Hd,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Hp => write!(f, "Hp"),
            Label::Hd => write!(f, "Hd"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Hp" => Ok(Label::Hp),
            "Hd" => Ok(Label::Hd),
            other => Err(Error::InvalidConfig {
                message: alloc::format!("unknown label `{other}` (expected Hp or Hd)"),
            }),
        }
    }
}

/// One recording with its speaker identity and optional condition tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtteranceRecord {
    pub utt_id: String,
    pub speaker_id: String,
    pub condition: Option<String>,
}

/// A forensic case: questioned recording `q`, reference recording `r`,
/// and the suspect who is known to have produced `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseSpec {
    pub q: String,
    pub r: String,
    pub suspect: String,
}

/// A single training score with its proposition label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledScore {
    pub value: f64,
    pub label: Label,
}

/// The training material for one case: same-origin scores `sp` (all labeled
/// `Hp`) and different-origin scores `sd` (all labeled `Hd`).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSet {
    sp: Vec<LabeledScore>,
    sd: Vec<LabeledScore>,
}

impl ScoreSet {
    /// Build from pre-labeled scores, validating label purity and finiteness.
    pub fn new(sp: Vec<LabeledScore>, sd: Vec<LabeledScore>) -> Result<Self> {
        if sp.iter().any(|s| s.label != Label::Hp) {
            return Err(Error::MixedLabels { expected: Label::Hp });
        }
        if sd.iter().any(|s| s.label != Label::Hd) {
            return Err(Error::MixedLabels { expected: Label::Hd });
        }
        if sp.iter().chain(sd.iter()).any(|s| !s.value.is_finite()) {
            return Err(Error::NonFinite {
                context: "training score".to_string(),
            });
        }
        Ok(ScoreSet { sp, sd })
    }

    /// Build from raw values, attaching the labels.
    pub fn from_values(sp: Vec<f64>, sd: Vec<f64>) -> Result<Self> {
        let sp = sp
            .into_iter()
            .map(|value| LabeledScore {
                value,
                label: Label::Hp,
            })
            .collect();
        let sd = sd
            .into_iter()
            .map(|value| LabeledScore {
                value,
                label: Label::Hd,
            })
            .collect();
        ScoreSet::new(sp, sd)
    }

    pub fn sp(&self) -> &[LabeledScore] {
        &self.sp
    }

    pub fn sd(&self) -> &[LabeledScore] {
        &self.sd
    }

    /// Number of same-origin training scores.
    pub fn np(&self) -> usize {
        self.sp.len()
    }

    /// Number of different-origin training scores.
    pub fn nd(&self) -> usize {
        self.sd.len()
    }

    pub fn sp_values(&self) -> impl Iterator<Item = f64> + Clone + '_ {
        self.sp.iter().map(|s| s.value)
    }

    pub fn sd_values(&self) -> impl Iterator<Item = f64> + Clone + '_ {
        self.sd.iter().map(|s| s.value)
    }
}

/// Symmetric pairwise score storage over a fixed utterance list.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    utterances: Vec<UtteranceRecord>,
    index: BTreeMap<String, u32>,
    scores: BTreeMap<(u32, u32), f64>,
}

impl ScoreMatrix {
    pub fn new(utterances: Vec<UtteranceRecord>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, rec) in utterances.iter().enumerate() {
            if rec.speaker_id.is_empty() {
                return Err(Error::InvalidConfig {
                    message: alloc::format!("utterance `{}` has an empty speaker id", rec.utt_id),
                });
            }
            if index.insert(rec.utt_id.clone(), i as u32).is_some() {
                return Err(Error::DuplicateUtterance {
                    line: 0,
                    utt_id: rec.utt_id.clone(),
                });
            }
        }
        Ok(ScoreMatrix {
            utterances,
            index,
            scores: BTreeMap::new(),
        })
    }

    pub fn utterances(&self) -> &[UtteranceRecord] {
        &self.utterances
    }

    pub fn num_utterances(&self) -> usize {
        self.utterances.len()
    }

    pub fn num_scores(&self) -> usize {
        self.scores.len()
    }

    pub fn index_of(&self, utt_id: &str) -> Option<u32> {
        self.index.get(utt_id).copied()
    }

    fn require_index(&self, utt_id: &str) -> Result<u32> {
        self.index_of(utt_id).ok_or_else(|| Error::UnknownUtterance {
            utt_id: utt_id.to_string(),
        })
    }

    /// Store a score under the unordered pair key. A repeated pair (in either
    /// order) is accepted if it agrees with the stored value within
    /// [`SYMMETRY_TOLERANCE`]; the first value is kept.
    pub fn insert_score(&mut self, utt_a: &str, utt_b: &str, value: f64) -> Result<()> {
        let ia = self.require_index(utt_a)?;
        let ib = self.require_index(utt_b)?;
        self.insert_score_idx(ia, ib, value, utt_a, utt_b)
    }

    pub(crate) fn insert_score_idx(
        &mut self,
        ia: u32,
        ib: u32,
        value: f64,
        utt_a: &str,
        utt_b: &str,
    ) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFinite {
                context: alloc::format!("score for pair ({utt_a}, {utt_b})"),
            });
        }
        let key = if ia <= ib { (ia, ib) } else { (ib, ia) };
        if let Some(&existing) = self.scores.get(&key) {
            if (existing - value).abs() <= SYMMETRY_TOLERANCE {
                return Ok(()); // first value kept
            }
            return Err(Error::AsymmetricScore {
                utt_a: utt_a.to_string(),
                utt_b: utt_b.to_string(),
                first: existing,
                second: value,
            });
        }
        self.scores.insert(key, value);
        Ok(())
    }

    /// Symmetric lookup: `get(q, r) == get(r, q)` for every stored pair.
    pub fn get(&self, q: &str, r: &str) -> Result<f64> {
        let iq = self.require_index(q)?;
        let ir = self.require_index(r)?;
        self.get_idx(iq, ir).ok_or_else(|| Error::ScoreNotFound {
            utt_a: q.to_string(),
            utt_b: r.to_string(),
        })
    }

    pub(crate) fn get_idx(&self, i: u32, j: u32) -> Option<f64> {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.scores.get(&key).copied()
    }

    /// Stored pairs in deterministic (index-ordered) sequence.
    pub fn iter_scores(&self) -> impl Iterator<Item = (&UtteranceRecord, &UtteranceRecord, f64)> {
        self.scores.iter().map(move |(&(i, j), &v)| {
            (
                &self.utterances[i as usize],
                &self.utterances[j as usize],
                v,
            )
        })
    }
}

/// Parse utterance metadata. Order is preserved; duplicate ids and malformed
/// lines are reported with their 1-based line number.
pub fn parse_metadata(src: &str) -> Result<Vec<UtteranceRecord>> {
    let mut records = Vec::new();
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(Error::Parse {
                line,
                message: alloc::format!(
                    "expected `<utt_id> <speaker_id> [<condition>]`, got {} fields",
                    tokens.len()
                ),
            });
        }
        if seen.insert(tokens[0], line).is_some() {
            return Err(Error::DuplicateUtterance {
                line,
                utt_id: tokens[0].to_string(),
            });
        }
        records.push(UtteranceRecord {
            utt_id: tokens[0].to_string(),
            speaker_id: tokens[1].to_string(),
            condition: tokens.get(2).map(|s| s.to_string()),
        });
    }
    Ok(records)
}

/// Parse a score file against already-loaded metadata.
pub fn parse_scores(src: &str, meta: Vec<UtteranceRecord>) -> Result<ScoreMatrix> {
    let mut matrix = ScoreMatrix::new(meta)?;
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
                    "expected `<utt_id_1> <utt_id_2> <score>`, got {} fields",
                    tokens.len()
                ),
            });
        }
        let value: f64 = tokens[2].parse().map_err(|_| Error::Parse {
            line,
            message: alloc::format!("invalid score `{}`", tokens[2]),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line,
                message: alloc::format!("non-finite score `{}`", tokens[2]),
            });
        }
        matrix.insert_score(tokens[0], tokens[1], value)?;
    }
    Ok(matrix)
}

pub fn format_metadata(records: &[UtteranceRecord]) -> String {
    let mut out = String::new();
    for rec in records {
        out.push_str(&rec.utt_id);
        out.push(' ');
        out.push_str(&rec.speaker_id);
        if let Some(cond) = &rec.condition {
            out.push(' ');
            out.push_str(cond);
        }
        out.push('\n');
    }
    out
}

pub fn format_scores(matrix: &ScoreMatrix) -> String {
    let mut out = String::new();
    for (a, b, v) in matrix.iter_scores() {
        out.push_str(&alloc::format!("{} {} {}\n", a.utt_id, b.utt_id, v));
    }
    out
}
