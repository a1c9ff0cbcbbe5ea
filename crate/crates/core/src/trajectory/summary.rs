use chrono::{DateTime, Utc};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::phase::Phase;
use crate::analysis::SnapshotAnalysis;
use crate::erosion::ErosionReport;
use crate::error::{Error, Result};
use crate::source::SkippedFile;
use crate::verbosity::VerbosityBreakdown;

/// Metric bundle of one measured checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct CheckpointMetrics {
    pub index: usize,
    pub label: String,
    pub timestamp: Option<DateTime<Utc>>,
    pub phase: Phase,
    pub erosion: ErosionReport,
    pub verbosity: VerbosityBreakdown,
    pub loc: u64,
    pub high_cc_count: u32,
    pub max_cc: u32,
    /// Files left out of this checkpoint's metrics.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedFile>,
}

impl CheckpointMetrics {
    pub fn from_analysis(
        index: usize,
        label: impl Into<String>,
        timestamp: Option<DateTime<Utc>>,
        phase: Phase,
        analysis: &SnapshotAnalysis,
    ) -> Self {
        Self {
            index,
            label: label.into(),
            timestamp,
            phase,
            erosion: analysis.erosion.clone(),
            verbosity: analysis.verbosity,
            loc: analysis.loc(),
            high_cc_count: analysis.erosion.high_cc_count,
            max_cc: analysis.erosion.max_cc,
            skipped: analysis.inventory.skipped.clone(),
        }
    }

    pub fn erosion_score(&self) -> f64 {
        self.erosion.score
    }

    pub fn verbosity_score(&self) -> f64 {
        self.verbosity.score
    }
}

/// Scalar metric values at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MetricValues {
    pub erosion: f64,
    pub verbosity: f64,
    pub loc: u64,
    pub high_cc_count: u32,
    pub max_cc: u32,
}

impl From<&CheckpointMetrics> for MetricValues {
    fn from(c: &CheckpointMetrics) -> Self {
        Self {
            erosion: c.erosion.score,
            verbosity: c.verbosity.score,
            loc: c.loc,
            high_cc_count: c.high_cc_count,
            max_cc: c.max_cc,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct TrajectorySummary {
    pub n_checkpoints: usize,
    pub n_present: usize,
    pub first: MetricValues,
    pub last: MetricValues,
    pub rising_erosion: bool,
    pub rising_verbosity: bool,
    /// Least-squares slope per checkpoint index.
    pub slope_erosion: f64,
    pub slope_verbosity: f64,
    /// `None` when the first value is zero.
    pub growth_pct_erosion: Option<f64>,
    pub growth_pct_verbosity: Option<f64>,
    pub missing_checkpoints: Vec<usize>,
}

/// Ordinary least-squares slope of `y` on `x`; 0 for fewer than two points.
pub fn ols_slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Median of a slice; `None` when empty.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    })
}

fn growth_pct(first: f64, last: f64, single: bool) -> Option<f64> {
    if single {
        Some(0.0)
    } else if first > 0.0 {
        Some((last - first) / first * 100.0)
    } else {
        None
    }
}

/// Summarizes the present checkpoints of a trajectory of `n_checkpoints`.
///
/// Checkpoints are identified by `index`; indices below `n_checkpoints` that
/// do not appear in `series` are missing and excluded from every statistic.
pub fn trajectory_summary(series: &[CheckpointMetrics], n_checkpoints: usize) -> Result<TrajectorySummary> {
    let mut present: Vec<&CheckpointMetrics> = series.iter().collect();
    present.sort_by_key(|c| c.index);
    present.dedup_by_key(|c| c.index);
    let (Some(first), Some(last)) = (present.first(), present.last()) else {
        return Err(Error::EmptyTrajectory);
    };
    let n_checkpoints = n_checkpoints.max(last.index + 1);
    let missing = (0..n_checkpoints)
        .filter(|i| present.binary_search_by_key(i, |c| c.index).is_err())
        .collect();

    let points = |f: fn(&CheckpointMetrics) -> f64| -> Vec<(f64, f64)> {
        present.iter().map(|c| (c.index as f64, f(c))).collect()
    };
    let first = MetricValues::from(*first);
    let last = MetricValues::from(*last);
    let single = present.len() == 1;
    Ok(TrajectorySummary {
        n_checkpoints,
        n_present: present.len(),
        first,
        last,
        rising_erosion: last.erosion > first.erosion,
        rising_verbosity: last.verbosity > first.verbosity,
        slope_erosion: ols_slope(&points(CheckpointMetrics::erosion_score)),
        slope_verbosity: ols_slope(&points(CheckpointMetrics::verbosity_score)),
        growth_pct_erosion: growth_pct(first.erosion, last.erosion, single),
        growth_pct_verbosity: growth_pct(first.verbosity, last.verbosity, single),
        missing_checkpoints: missing,
    })
}
