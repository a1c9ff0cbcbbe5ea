//! Checkpoint series: phases, per-trajectory summaries, era splits, git
//! commit sampling and repository panels.

pub mod era;
pub mod git;
pub mod history;
pub mod panel;
pub mod phase;
pub mod summary;

pub use era::{default_cutoff, era_split, EraMedians, EraShift};
pub use git::{sample_commits, CommitRef, CommitSample};
pub use history::{
    load_panel_config, measure_checkpoint, run_checkpoints, run_history, run_panel, FailedRepo, HistoryOptions,
    HistoryReport, PanelRepoConfig,
};
pub use panel::{panel_aggregate, PanelReport, ReferenceMeans, RepoPanelEntry, StarTier};
pub use phase::{bin_phases, Phase};
pub use summary::{ols_slope, trajectory_summary, CheckpointMetrics, TrajectorySummary};
