//! Construction of the training score pools for a case.
//!
//! Two anchoring schemes are supported. Suspect-anchored (SA) pools pair the
//! suspect's recordings with each other (same-origin side) and with
//! population recordings (different-origin side). Reference-anchored (RA)
//! pools fix the case's reference recording `r` as one member of every
//! comparison. In both schemes the case's own recordings are excluded: `q`
//! and `r` never appear on the suspect side, and `q` is excluded from the
//! population side. The case pair itself therefore never leaks into
//! training.
//!
//! An optional condition filter restricts the trace-side utterance of every
//! generated comparison to an exact condition tag (there is no notion of
//! condition distance). For SA same-origin pairs, where both members come
//! from the suspect, a pair qualifies when at least one member carries the
//! filter tag; that member plays the pseudo-trace role.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::rng;
use crate::score::{CaseSpec, Label, LabeledScore, ScoreMatrix, ScoreSet, UtteranceRecord};

/// Which recordings anchor the training comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    SuspectAnchored,
    ReferenceAnchored,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::SuspectAnchored => write!(f, "SA"),
            Scheme::ReferenceAnchored => write!(f, "RA"),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SA" | "sa" => Ok(Scheme::SuspectAnchored),
            "RA" | "ra" => Ok(Scheme::ReferenceAnchored),
            other => Err(Error::InvalidConfig {
                message: alloc::format!("unknown anchoring scheme `{other}` (expected SA or RA)"),
            }),
        }
    }
}

/// A built pool: the labeled score set plus the utterance pairs each score
/// came from (index pairs into the matrix) and how many comparisons were
/// dropped because the score file had no entry for them.
#[derive(Debug, Clone)]
pub struct Pool {
    pub set: ScoreSet,
    sp_pairs: Vec<(u32, u32)>,
    sd_pairs: Vec<(u32, u32)>,
    pub skipped_sp: usize,
    pub skipped_sd: usize,
}

impl Pool {
    /// Utterance-id pairs behind the same-origin scores, aligned with `set.sp()`.
    pub fn sp_pair_ids<'a>(&'a self, m: &'a ScoreMatrix) -> Vec<(&'a str, &'a str)> {
        self.sp_pairs
            .iter()
            .map(|&(i, j)| {
                (
                    m.utterances()[i as usize].utt_id.as_str(),
                    m.utterances()[j as usize].utt_id.as_str(),
                )
            })
            .collect()
    }

    /// Utterance-id pairs behind the different-origin scores, aligned with `set.sd()`.
    pub fn sd_pair_ids<'a>(&'a self, m: &'a ScoreMatrix) -> Vec<(&'a str, &'a str)> {
        self.sd_pairs
            .iter()
            .map(|&(i, j)| {
                (
                    m.utterances()[i as usize].utt_id.as_str(),
                    m.utterances()[j as usize].utt_id.as_str(),
                )
            })
            .collect()
    }
}

/// Speakers with strictly more than `min_utts` utterances, sorted
/// lexicographically.
pub fn eligible_suspects(meta: &[UtteranceRecord], min_utts: usize) -> Vec<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for rec in meta {
        *counts.entry(rec.speaker_id.as_str()).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .filter(|&(_, n)| n > min_utts)
        .map(|(spk, _)| spk.to_string())
        .collect()
}

struct CaseIndices {
    q: u32,
    r: u32,
}

fn resolve_case(m: &ScoreMatrix, case: &CaseSpec) -> Result<CaseIndices> {
    let q = m.index_of(&case.q).ok_or_else(|| Error::UnknownUtterance {
        utt_id: case.q.clone(),
    })?;
    let r = m.index_of(&case.r).ok_or_else(|| Error::UnknownUtterance {
        utt_id: case.r.clone(),
    })?;
    if q == r {
        return Err(Error::InvalidCase {
            message: alloc::format!("questioned and reference recordings are both `{}`", case.q),
        });
    }
    let r_speaker = &m.utterances()[r as usize].speaker_id;
    if *r_speaker != case.suspect {
        return Err(Error::InvalidCase {
            message: alloc::format!(
                "reference `{}` belongs to speaker `{r_speaker}`, not suspect `{}`",
                case.r,
                case.suspect
            ),
        });
    }
    Ok(CaseIndices { q, r })
}

fn condition_matches(rec: &UtteranceRecord, filter: Option<&str>) -> bool {
    match filter {
        None => true,
        Some(tag) => rec.condition.as_deref() == Some(tag),
    }
}

/// Build the training pools for `case` under `scheme`.
pub fn build_pool(
    m: &ScoreMatrix,
    case: &CaseSpec,
    scheme: Scheme,
    condition_filter: Option<&str>,
) -> Result<Pool> {
    match scheme {
        Scheme::SuspectAnchored => build_pool_sa(m, case, condition_filter),
        Scheme::ReferenceAnchored => build_pool_ra(m, case, condition_filter),
    }
}

/// Suspect-anchored pools: `sp` holds every unordered pair of suspect
/// utterances outside the case, `sd` pairs each of those suspect utterances
/// with every population utterance other than `q`.
pub fn build_pool_sa(m: &ScoreMatrix, case: &CaseSpec, condition_filter: Option<&str>) -> Result<Pool> {
    let ids = resolve_case(m, case)?;
    let utts = m.utterances();

    let suspect_utts: Vec<u32> = (0..utts.len() as u32)
        .filter(|&i| i != ids.q && i != ids.r && utts[i as usize].speaker_id == case.suspect)
        .collect();
    let population: Vec<u32> = (0..utts.len() as u32)
        .filter(|&i| i != ids.q && utts[i as usize].speaker_id != case.suspect)
        .collect();

    let mut sp_pairs = Vec::new();
    let mut sp_values = Vec::new();
    let mut skipped_sp = 0;
    for (a, &u) in suspect_utts.iter().enumerate() {
        for &v in &suspect_utts[a + 1..] {
            let trace_ok = condition_matches(&utts[u as usize], condition_filter)
                || condition_matches(&utts[v as usize], condition_filter);
            if !trace_ok {
                continue;
            }
            match m.get_idx(u, v) {
                Some(s) => {
                    sp_pairs.push((u, v));
                    sp_values.push(s);
                }
                None => skipped_sp += 1,
            }
        }
    }

    let mut sd_pairs = Vec::new();
    let mut sd_values = Vec::new();
    let mut skipped_sd = 0;
    for &u in &suspect_utts {
        for &x in &population {
            if !condition_matches(&utts[x as usize], condition_filter) {
                continue;
            }
            match m.get_idx(u, x) {
                Some(s) => {
                    sd_pairs.push((u, x));
                    sd_values.push(s);
                }
                None => skipped_sd += 1,
            }
        }
    }

    finish_pool(sp_values, sd_values, sp_pairs, sd_pairs, skipped_sp, skipped_sd)
}

/// Reference-anchored pools: every comparison includes the case's reference
/// recording `r`. `sp` pairs the suspect's other utterances with `r`; `sd`
/// pairs population utterances (excluding `q`) with `r`.
pub fn build_pool_ra(m: &ScoreMatrix, case: &CaseSpec, condition_filter: Option<&str>) -> Result<Pool> {
    let ids = resolve_case(m, case)?;
    let utts = m.utterances();

    let mut sp_pairs = Vec::new();
    let mut sp_values = Vec::new();
    let mut skipped_sp = 0;
    let mut sd_pairs = Vec::new();
    let mut sd_values = Vec::new();
    let mut skipped_sd = 0;

    for i in 0..utts.len() as u32 {
        if i == ids.q || i == ids.r {
            continue;
        }
        if !condition_matches(&utts[i as usize], condition_filter) {
            continue;
        }
        let same_speaker = utts[i as usize].speaker_id == case.suspect;
        match m.get_idx(i, ids.r) {
            Some(s) => {
                if same_speaker {
                    sp_pairs.push((i, ids.r));
                    sp_values.push(s);
                } else {
                    sd_pairs.push((i, ids.r));
                    sd_values.push(s);
                }
            }
            None => {
                if same_speaker {
                    skipped_sp += 1;
                } else {
                    skipped_sd += 1;
                }
            }
        }
    }

    finish_pool(sp_values, sd_values, sp_pairs, sd_pairs, skipped_sp, skipped_sd)
}

fn finish_pool(
    sp_values: Vec<f64>,
    sd_values: Vec<f64>,
    sp_pairs: Vec<(u32, u32)>,
    sd_pairs: Vec<(u32, u32)>,
    skipped_sp: usize,
    skipped_sd: usize,
) -> Result<Pool> {
    if sp_values.is_empty() {
        return Err(Error::EmptyPool { side: Label::Hp });
    }
    if sd_values.is_empty() {
        return Err(Error::EmptyPool { side: Label::Hd });
    }
    Ok(Pool {
        set: ScoreSet::from_values(sp_values, sd_values)?,
        sp_pairs,
        sd_pairs,
        skipped_sp,
        skipped_sd,
    })
}

/// Draw `np` same-origin scores uniformly without replacement (seeded,
/// reproducible); the different-origin side is returned unchanged.
pub fn subsample_sp(set: &ScoreSet, np: usize, seed: u64) -> Result<ScoreSet> {
    if np < 2 {
        return Err(Error::InvalidConfig {
            message: alloc::format!("np must be at least 2, got {np}"),
        });
    }
    if np > set.np() {
        return Err(Error::InsufficientData {
            side: Some(Label::Hp),
            needed: np,
            available: set.np(),
        });
    }
    let mut rng = rng::rng_from_seed(seed);
    let chosen = rng::sample_without_replacement(&mut rng, set.np(), np);
    let sp: Vec<LabeledScore> = chosen.into_iter().map(|i| set.sp()[i]).collect();
    ScoreSet::new(sp, set.sd().to_vec())
}

/// Render a pool in the score-file format with an extra `Hp|Hd` label column.
pub fn format_pool(pool: &Pool, m: &ScoreMatrix) -> String {
    let mut out = String::new();
    for (&(i, j), score) in pool.sp_pairs.iter().zip(pool.set.sp()) {
        out.push_str(&alloc::format!(
            "{} {} {} {}\n",
            m.utterances()[i as usize].utt_id,
            m.utterances()[j as usize].utt_id,
            score.value,
            score.label
        ));
    }
    for (&(i, j), score) in pool.sd_pairs.iter().zip(pool.set.sd()) {
        out.push_str(&alloc::format!(
            "{} {} {} {}\n",
            m.utterances()[i as usize].utt_id,
            m.utterances()[j as usize].utt_id,
            score.value,
            score.label
        ));
    }
    out
}
