use std::collections::BTreeMap;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::era::EraShift;
use super::history::FailedRepo;
use super::summary::{median, CheckpointMetrics, TrajectorySummary};

/// Popularity tier by GitHub star count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, JsonSchema)]
pub enum StarTier {
    Hobby,
    Niche,
    Established,
    Major,
}

impl StarTier {
    pub const ALL: [StarTier; 4] = [StarTier::Hobby, StarTier::Niche, StarTier::Established, StarTier::Major];

    pub fn from_stars(stars: u64) -> Self {
        match stars {
            0..=99 => StarTier::Hobby,
            100..=999 => StarTier::Niche,
            1_000..=9_999 => StarTier::Established,
            _ => StarTier::Major,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StarTier::Hobby => "Hobby",
            StarTier::Niche => "Niche",
            StarTier::Established => "Established",
            StarTier::Major => "Major",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct RepoPanelEntry {
    pub repo_id: String,
    pub stars: u64,
    pub star_tier: StarTier,
    /// Metrics at the most recent measured checkpoint.
    pub head_metrics: CheckpointMetrics,
    pub trajectory: TrajectorySummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub era: Option<EraShift>,
}

/// Reference means to compare HEAD metrics against.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ReferenceMeans {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verbosity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub erosion: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MeanStd {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Some(Self { mean, std })
    }
}

/// Mean and median of one statistic across repositories.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Center {
    pub mean: f64,
    pub median: f64,
}

impl Center {
    fn of(values: &[f64]) -> Option<Self> {
        Some(Self {
            mean: MeanStd::of(values)?.mean,
            median: median(values)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MetricAggregate {
    pub head: MeanStd,
    pub rising_fraction: f64,
    pub slope: Center,
    /// Median first-to-last growth over repos where it is defined.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub median_growth_pct: Option<f64>,
    /// Median era shift over eligible repos.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub median_era_shift: Option<f64>,
    /// Fraction of repos whose HEAD value exceeds the reference mean.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exceeds_reference: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct PanelGroup {
    pub n_repos: usize,
    pub n_era_eligible: usize,
    pub verbosity: MetricAggregate,
    pub erosion: MetricAggregate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct PanelReport {
    pub reference: ReferenceMeans,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overall: Option<PanelGroup>,
    /// Tiers with at least one repo.
    pub tiers: BTreeMap<StarTier, PanelGroup>,
    pub entries: Vec<RepoPanelEntry>,
    pub failed: Vec<FailedRepo>,
    pub failed_count: usize,
}

struct Column {
    head: Vec<f64>,
    rising: usize,
    slope: Vec<f64>,
    growth: Vec<f64>,
    era: Vec<f64>,
}

fn aggregate(column: Column, reference: Option<f64>) -> MetricAggregate {
    let n = column.head.len() as f64;
    MetricAggregate {
        head: MeanStd::of(&column.head).expect("non-empty group"),
        rising_fraction: column.rising as f64 / n,
        slope: Center::of(&column.slope).expect("non-empty group"),
        median_growth_pct: median(&column.growth),
        median_era_shift: median(&column.era),
        exceeds_reference: reference.map(|r| column.head.iter().filter(|&&v| v > r).count() as f64 / n),
    }
}

fn group(entries: &[&RepoPanelEntry], reference: ReferenceMeans) -> PanelGroup {
    let eligible: Vec<&EraShift> = entries
        .iter()
        .filter_map(|e| e.era.as_ref())
        .filter(|e| e.eligible)
        .collect();
    let verbosity = Column {
        head: entries.iter().map(|e| e.head_metrics.verbosity.score).collect(),
        rising: entries.iter().filter(|e| e.trajectory.rising_verbosity).count(),
        slope: entries.iter().map(|e| e.trajectory.slope_verbosity).collect(),
        growth: entries.iter().filter_map(|e| e.trajectory.growth_pct_verbosity).collect(),
        era: eligible.iter().filter_map(|e| e.shift).map(|s| s.verbosity).collect(),
    };
    let erosion = Column {
        head: entries.iter().map(|e| e.head_metrics.erosion.score).collect(),
        rising: entries.iter().filter(|e| e.trajectory.rising_erosion).count(),
        slope: entries.iter().map(|e| e.trajectory.slope_erosion).collect(),
        growth: entries.iter().filter_map(|e| e.trajectory.growth_pct_erosion).collect(),
        era: eligible.iter().filter_map(|e| e.shift).map(|s| s.erosion).collect(),
    };
    PanelGroup {
        n_repos: entries.len(),
        n_era_eligible: eligible.len(),
        verbosity: aggregate(verbosity, reference.verbosity),
        erosion: aggregate(erosion, reference.erosion),
    }
}

/// Overall and per-tier aggregates. Entries are ordered by repo id first, so
/// the result does not depend on input order.
pub fn panel_aggregate(mut entries: Vec<RepoPanelEntry>, reference: ReferenceMeans) -> PanelReport {
    entries.sort_by(|a, b| a.repo_id.cmp(&b.repo_id).then(a.stars.cmp(&b.stars)));
    let all: Vec<&RepoPanelEntry> = entries.iter().collect();
    let overall = (!all.is_empty()).then(|| group(&all, reference));
    let tiers = StarTier::ALL
        .iter()
        .filter_map(|&tier| {
            let members: Vec<&RepoPanelEntry> = entries.iter().filter(|e| e.star_tier == tier).collect();
            (!members.is_empty()).then(|| (tier, group(&members, reference)))
        })
        .collect();
    PanelReport {
        reference,
        overall,
        tiers,
        entries,
        failed: Vec::new(),
        failed_count: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::summary::{tests::checkpoint, trajectory_summary};

    fn entry(id: &str, stars: u64, series: &[f64]) -> RepoPanelEntry {
        let cps: Vec<_> = series
            .iter()
            .enumerate()
            .map(|(i, &v)| checkpoint(i, v, v))
            .collect();
        RepoPanelEntry {
            repo_id: id.into(),
            stars,
            star_tier: StarTier::from_stars(stars),
            head_metrics: cps.last().unwrap().clone(),
            trajectory: trajectory_summary(&cps, cps.len()).unwrap(),
            era: None,
        }
    }

    #[test]
    fn tier_boundaries() {
        assert_eq!(StarTier::from_stars(0), StarTier::Hobby);
        assert_eq!(StarTier::from_stars(99), StarTier::Hobby);
        assert_eq!(StarTier::from_stars(100), StarTier::Niche);
        assert_eq!(StarTier::from_stars(999), StarTier::Niche);
        assert_eq!(StarTier::from_stars(1000), StarTier::Established);
        assert_eq!(StarTier::from_stars(9999), StarTier::Established);
        assert_eq!(StarTier::from_stars(10_000), StarTier::Major);
    }

    #[test]
    fn single_repo_equals_its_values() {
        let r = panel_aggregate(vec![entry("a", 5, &[0.1, 0.3])], ReferenceMeans::default());
        let o = r.overall.unwrap();
        assert_eq!(o.verbosity.head, MeanStd { mean: 0.3, std: 0.0 });
        assert_eq!(o.verbosity.rising_fraction, 1.0);
        assert_eq!(r.tiers.len(), 1);
    }

    #[test]
    fn two_repo_mean_and_exceedance() {
        let reference = ReferenceMeans {
            verbosity: Some(0.2),
            erosion: None,
        };
        let r = panel_aggregate(vec![entry("a", 5, &[0.1]), entry("b", 50_000, &[0.3])], reference);
        let o = r.overall.unwrap();
        assert!((o.verbosity.head.mean - 0.2).abs() < 1e-15);
        assert_eq!(o.verbosity.exceeds_reference, Some(0.5));
        assert_eq!(o.erosion.exceeds_reference, None);
        assert_eq!(r.tiers.keys().copied().collect::<Vec<_>>(), [StarTier::Hobby, StarTier::Major]);
    }

    #[test]
    fn permutation_invariant() {
        let es = vec![
            entry("c", 10, &[0.1, 0.7, 0.2]),
            entry("a", 500, &[0.3, 0.1]),
            entry("b", 5000, &[0.05, 0.15, 0.25, 0.9]),
        ];
        let mut rev = es.clone();
        rev.reverse();
        let a = panel_aggregate(es, ReferenceMeans::default());
        let b = panel_aggregate(rev, ReferenceMeans::default());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
