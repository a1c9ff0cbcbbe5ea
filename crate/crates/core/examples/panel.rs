//! Panel aggregation: per-tier means, rising fractions and comparison
//! with a reference population.
//!
//! With a panel config argument the repositories are measured from git;
//! without one, the bundled synthetic panel is aggregated directly.

use std::path::PathBuf;

use chrono::{DateTime, NaiveDate, Utc};
use serde::Deserialize;
use slopscope::erosion::ErosionReport;
use slopscope::report::to_canonical_json;
use slopscope::trajectory::{
    bin_phases, era_split, load_panel_config, panel_aggregate, run_panel, trajectory_summary, CheckpointMetrics,
    HistoryOptions, PanelReport, ReferenceMeans, RepoPanelEntry, StarTier,
};
use slopscope::verbosity::VerbosityBreakdown;
use slopscope::Analyzer;

#[derive(Deserialize)]
struct Repo {
    repo_id: String,
    stars: u64,
    checkpoints: Vec<(DateTime<Utc>, f64, f64)>,
}

#[derive(Deserialize)]
struct Synthetic {
    cutoff_date: NaiveDate,
    repos: Vec<Repo>,
}

fn synthetic(reference: ReferenceMeans) -> anyhow::Result<PanelReport> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/panel/repos.json");
    let panel: Synthetic = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let mut entries = Vec::new();
    for repo in panel.repos {
        let phases = bin_phases(repo.checkpoints.len())?;
        let series: Vec<CheckpointMetrics> = repo
            .checkpoints
            .iter()
            .zip(phases)
            .enumerate()
            .map(|(index, (&(t, e, v), phase))| CheckpointMetrics {
                index,
                label: format!("{}@{index}", repo.repo_id),
                timestamp: Some(t),
                phase,
                erosion: ErosionReport { score: e, ..Default::default() },
                verbosity: VerbosityBreakdown { score: v, ..Default::default() },
                loc: 0,
                high_cc_count: 0,
                max_cc: 0,
                skipped: Vec::new(),
            })
            .collect();
        entries.push(RepoPanelEntry {
            star_tier: StarTier::from_stars(repo.stars),
            head_metrics: series.last().cloned().expect("non-empty"),
            trajectory: trajectory_summary(&series, series.len())?,
            era: Some(era_split(&series, panel.cutoff_date)?),
            repo_id: repo.repo_id,
            stars: repo.stars,
        });
    }
    Ok(panel_aggregate(entries, reference))
}

fn main() -> anyhow::Result<()> {
    let reference = ReferenceMeans {
        verbosity: Some(0.44),
        erosion: Some(0.68),
    };
    let report = match std::env::args_os().nth(1) {
        Some(config) => {
            let repos = load_panel_config(&PathBuf::from(config))?;
            run_panel(&repos, &Analyzer::with_defaults(), &HistoryOptions::default(), reference)
        }
        None => synthetic(reference)?,
    };

    println!("tier         repos  verbosity(mean)  rising  erosion(mean)  rising");
    let overall = report.overall.iter().map(|g| ("overall", g));
    for (name, g) in overall.chain(report.tiers.iter().map(|(t, g)| (t.as_str(), g))) {
        println!(
            "{:<12} {:>5}  {:>15.3}  {:>6.2}  {:>13.3}  {:>6.2}",
            name, g.n_repos, g.verbosity.head.mean, g.verbosity.rising_fraction, g.erosion.head.mean, g.erosion.rising_fraction
        );
    }
    for f in &report.failed {
        println!("failed: {} ({})", f.repo_id, f.reason);
    }
    if std::env::var_os("PANEL_JSON").is_some() {
        print!("{}", to_canonical_json(&report)?);
    }
    Ok(())
}
