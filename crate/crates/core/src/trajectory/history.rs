//! Measuring whole trajectories: sampled git histories, explicit checkpoint
//! directories, and panels of repositories.

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::era::{default_cutoff, era_split, EraShift};
use super::git::{head_commit, open_repository, sample_commits, snapshot_files, DEFAULT_MAX_COMMITS};
use super::panel::{panel_aggregate, PanelReport, ReferenceMeans, RepoPanelEntry, StarTier};
use super::phase::{bin_phases, Phase};
use super::summary::{trajectory_summary, CheckpointMetrics, TrajectorySummary};
use crate::analysis::{Analyzer, SnapshotAnalysis};
use crate::error::{Error, Result};

/// Globs that `--exclude-tests` adds to the scan excludes.
pub const TEST_GLOBS: &[&str] = &["**/test_*.py", "**/*_test.py", "**/tests/**", "**/test/**", "**/conftest.py"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct HistoryOptions {
    pub max_commits: usize,
    pub seed: u64,
    pub cutoff_date: NaiveDate,
}

impl Default for HistoryOptions {
    fn default() -> Self {
        Self {
            max_commits: DEFAULT_MAX_COMMITS,
            seed: 0,
            cutoff_date: default_cutoff(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct HistoryReport {
    /// Repository path or checkpoint root as given.
    pub source: String,
    /// Source-modifying commits available for sampling; absent for
    /// checkpoint directories.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eligible_commits: Option<usize>,
    pub checkpoints: Vec<CheckpointMetrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<TrajectorySummary>,
    /// Present when every measured checkpoint has a timestamp.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub era: Option<EraShift>,
    pub warnings: Vec<String>,
}

/// Measures one materialized snapshot.
pub fn measure_checkpoint(analyzer: &Analyzer, root: &Path) -> Result<SnapshotAnalysis> {
    analyzer.analyze_dir(root)
}

fn finish(
    source: String,
    eligible_commits: Option<usize>,
    n: usize,
    checkpoints: Vec<CheckpointMetrics>,
    cutoff: NaiveDate,
    warnings: Vec<String>,
) -> HistoryReport {
    let summary = (!checkpoints.is_empty()).then(|| trajectory_summary(&checkpoints, n).expect("non-empty"));
    let era = if checkpoints.is_empty() || checkpoints.iter().any(|c| c.timestamp.is_none()) {
        None
    } else {
        Some(era_split(&checkpoints, cutoff).expect("timestamps present"))
    };
    HistoryReport {
        source,
        eligible_commits,
        checkpoints,
        summary,
        era,
        warnings,
    }
}

/// Samples and measures a git history.
///
/// A checkpoint whose snapshot cannot be read is reported missing rather
/// than aborting the run.
pub fn run_history(repo_path: &Path, analyzer: &Analyzer, options: &HistoryOptions) -> Result<HistoryReport> {
    let sample = sample_commits(repo_path, options.max_commits, options.seed, &analyzer.scan)?;
    let repo = open_repository(repo_path)?;
    let mut warnings = sample.warnings;
    let n = sample.commits.len();
    let phases = if n == 0 { Vec::new() } else { bin_phases(n)? };
    let mut checkpoints = Vec::with_capacity(n);
    for (index, (commit, phase)) in sample.commits.iter().zip(phases).enumerate() {
        match snapshot_files(&repo, &commit.id, &analyzer.scan) {
            Ok(files) => {
                let analysis = analyzer.analyze_files(files);
                checkpoints.push(CheckpointMetrics::from_analysis(
                    index,
                    commit.id.clone(),
                    Some(commit.time),
                    phase,
                    &analysis,
                ));
            }
            Err(e) => warnings.push(format!("checkpoint {index} ({}) missing: {e}", commit.id)),
        }
    }
    Ok(finish(
        repo_path.display().to_string(),
        Some(sample.eligible),
        n,
        checkpoints,
        options.cutoff_date,
        warnings,
    ))
}

/// Measures explicit checkpoint directories in the given order.
///
/// Unreadable directories become missing checkpoints.
pub fn run_checkpoints(label: &str, dirs: &[PathBuf], analyzer: &Analyzer) -> Result<HistoryReport> {
    let phases = bin_phases(dirs.len())?;
    let mut checkpoints = Vec::new();
    let mut warnings = Vec::new();
    for (index, (dir, phase)) in dirs.iter().zip(phases).enumerate() {
        let name = dir
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| dir.display().to_string());
        match measure_checkpoint(analyzer, dir) {
            Ok(a) => checkpoints.push(CheckpointMetrics::from_analysis(index, name, None, phase, &a)),
            Err(e) => warnings.push(format!("checkpoint {index} ({name}) missing: {e}")),
        }
    }
    Ok(finish(label.to_string(), None, dirs.len(), checkpoints, default_cutoff(), warnings))
}

/// One repository in a panel config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PanelRepoConfig {
    /// Relative paths resolve against the config file's directory.
    pub repo_path: PathBuf,
    pub repo_id: String,
    pub stars: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_commits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PanelFile {
    List(Vec<PanelRepoConfig>),
    Wrapped { repos: Vec<PanelRepoConfig> },
}

/// Reads a YAML or JSON panel config, resolving relative repo paths.
pub fn load_panel_config(path: &Path) -> Result<Vec<PanelRepoConfig>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let parsed: PanelFile = if is_json {
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
    } else {
        serde_yaml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
    };
    let mut repos = match parsed {
        PanelFile::List(r) | PanelFile::Wrapped { repos: r } => r,
    };
    let base = path.parent().unwrap_or(Path::new(""));
    for r in &mut repos {
        if r.repo_path.is_relative() {
            r.repo_path = base.join(&r.repo_path);
        }
    }
    Ok(repos)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
pub struct FailedRepo {
    pub repo_id: String,
    pub reason: String,
}

/// Measures one panel repository: its sampled trajectory plus HEAD.
pub fn panel_entry(
    repo: &PanelRepoConfig,
    analyzer: &Analyzer,
    defaults: &HistoryOptions,
) -> Result<RepoPanelEntry, String> {
    let options = HistoryOptions {
        max_commits: repo.max_commits.unwrap_or(defaults.max_commits),
        seed: repo.seed.unwrap_or(defaults.seed),
        cutoff_date: defaults.cutoff_date,
    };
    let history = run_history(&repo.repo_path, analyzer, &options).map_err(|e| e.to_string())?;
    let summary = history
        .summary
        .ok_or_else(|| "no source-modifying commits".to_string())?;
    let git = open_repository(&repo.repo_path).map_err(|e| e.to_string())?;
    let head = head_commit(&git).ok_or_else(|| "repository has no HEAD".to_string())?;
    let head_metrics = match history.checkpoints.last() {
        Some(last) if last.label == head.id => last.clone(),
        _ => {
            let files = snapshot_files(&git, &head.id, &analyzer.scan).map_err(|e| e.to_string())?;
            let analysis = analyzer.analyze_files(files);
            CheckpointMetrics::from_analysis(summary.n_checkpoints, head.id, Some(head.time), Phase::Final, &analysis)
        }
    };
    Ok(RepoPanelEntry {
        repo_id: repo.repo_id.clone(),
        stars: repo.stars,
        star_tier: StarTier::from_stars(repo.stars),
        head_metrics,
        trajectory: summary,
        era: history.era,
    })
}

/// Measures every repository of a panel and aggregates the ones that succeed.
pub fn run_panel(
    repos: &[PanelRepoConfig],
    analyzer: &Analyzer,
    defaults: &HistoryOptions,
    reference: ReferenceMeans,
) -> PanelReport {
    let mut entries = Vec::new();
    let mut failed = Vec::new();
    for repo in repos {
        match panel_entry(repo, analyzer, defaults) {
            Ok(e) => entries.push(e),
            Err(reason) => failed.push(FailedRepo {
                repo_id: repo.repo_id.clone(),
                reason,
            }),
        }
    }
    let mut report = panel_aggregate(entries, reference);
    failed.sort();
    report.failed_count = failed.len();
    report.failed = failed;
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_checkpoint_dir_is_zero() {
        let dir = tempfile::tempdir().unwrap();
        let a = measure_checkpoint(&Analyzer::with_defaults(), dir.path()).unwrap();
        assert_eq!((a.erosion.score, a.verbosity.score, a.loc()), (0.0, 0.0, 0));
    }

    #[test]
    fn missing_directory_is_a_missing_checkpoint() {
        let dir = tempfile::tempdir().unwrap();
        let dirs = vec![dir.path().to_path_buf(), dir.path().join("nope"), dir.path().to_path_buf()];
        let r = run_checkpoints("x", &dirs, &Analyzer::with_defaults()).unwrap();
        assert_eq!(r.checkpoints.len(), 2);
        assert_eq!(r.summary.unwrap().missing_checkpoints, [1]);
        assert_eq!(r.warnings.len(), 1);
        assert!(r.era.is_none());
    }

    #[test]
    fn not_a_repository() {
        let dir = tempfile::tempdir().unwrap();
        let err = run_history(dir.path(), &Analyzer::with_defaults(), &HistoryOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NotARepository { .. }));
    }

    #[test]
    fn panel_config_forms() {
        let dir = tempfile::tempdir().unwrap();
        let yaml = dir.path().join("p.yaml");
        std::fs::write(&yaml, "- {repo_path: r1, repo_id: a, stars: 5}\n").unwrap();
        let r = load_panel_config(&yaml).unwrap();
        assert_eq!(r[0].repo_path, dir.path().join("r1"));
        let json = dir.path().join("p.json");
        std::fs::write(&json, r#"{"repos": [{"repo_path": "/abs", "repo_id": "b", "stars": 7, "seed": 3}]}"#).unwrap();
        let r = load_panel_config(&json).unwrap();
        assert_eq!(r[0].repo_path, PathBuf::from("/abs"));
        assert_eq!(r[0].seed, Some(3));
    }
}
