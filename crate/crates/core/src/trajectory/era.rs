use chrono::{DateTime, NaiveDate, Utc};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::summary::{median, CheckpointMetrics};
use crate::error::{Error, Result};

/// Minimum checkpoints required on each side of the cutoff.
pub const MIN_PER_ERA: usize = 3;

pub fn default_cutoff() -> NaiveDate {
    NaiveDate::from_ymd_opt(2024, 1, 1).expect("valid date")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EraMedians {
    pub erosion: f64,
    pub verbosity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EraShift {
    pub cutoff_date: NaiveDate,
    pub n_pre: usize,
    pub n_post: usize,
    pub eligible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre_median: Option<EraMedians>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub post_median: Option<EraMedians>,
    /// Post minus pre medians; present only when eligible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<EraMedians>,
}

fn cutoff_instant(cutoff: NaiveDate) -> DateTime<Utc> {
    cutoff.and_hms_opt(0, 0, 0).expect("midnight").and_utc()
}

fn medians(points: &[&CheckpointMetrics]) -> EraMedians {
    let e: Vec<f64> = points.iter().map(|c| c.erosion.score).collect();
    let v: Vec<f64> = points.iter().map(|c| c.verbosity.score).collect();
    EraMedians {
        erosion: median(&e).unwrap_or(0.0),
        verbosity: median(&v).unwrap_or(0.0),
    }
}

/// Splits a trajectory at midnight UTC of `cutoff` and compares era medians.
///
/// Checkpoints strictly before the cutoff are pre, the rest post. Every
/// checkpoint needs a timestamp.
pub fn era_split(series: &[CheckpointMetrics], cutoff: NaiveDate) -> Result<EraShift> {
    let missing: Vec<usize> = series
        .iter()
        .filter(|c| c.timestamp.is_none())
        .map(|c| c.index)
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingTimestamps(missing));
    }
    let at = cutoff_instant(cutoff);
    let (pre, post): (Vec<&CheckpointMetrics>, Vec<&CheckpointMetrics>) =
        series.iter().partition(|c| c.timestamp.expect("checked") < at);
    let eligible = pre.len() >= MIN_PER_ERA && post.len() >= MIN_PER_ERA;
    let (pre_median, post_median, shift) = if eligible {
        let (a, b) = (medians(&pre), medians(&post));
        let shift = EraMedians {
            erosion: b.erosion - a.erosion,
            verbosity: b.verbosity - a.verbosity,
        };
        (Some(a), Some(b), Some(shift))
    } else {
        (None, None, None)
    };
    Ok(EraShift {
        cutoff_date: cutoff,
        n_pre: pre.len(),
        n_post: post.len(),
        eligible,
        pre_median,
        post_median,
        shift,
    })
}
