//! Sample commits from a git repository and measure each one.
//!
//! With no argument a small demo repository is built from the bundled
//! snapshots in a temporary directory.

use std::path::{Path, PathBuf};

use git2::{Oid, Repository, Signature, Time};
use slopscope::trajectory::{run_history, HistoryOptions};
use slopscope::Analyzer;

fn write_tree(repo: &Repository, dir: &Path) -> anyhow::Result<Oid> {
    let mut builder = repo.treebuilder(None)?;
    let mut entries: Vec<_> = std::fs::read_dir(dir)?.collect::<Result<_, _>>()?;
    entries.sort_by_key(|e| e.file_name());
    for entry in entries {
        let path = entry.path();
        let (oid, mode) = if path.is_dir() {
            (write_tree(repo, &path)?, 0o040000)
        } else {
            (repo.blob(&std::fs::read(&path)?)?, 0o100644)
        };
        builder.insert(entry.file_name(), oid, mode)?;
    }
    Ok(builder.write()?)
}

fn demo_repo(dest: &Path) -> anyhow::Result<()> {
    let snaps = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/history/snapshots");
    let repo = Repository::init(dest)?;
    let mut parent: Option<Oid> = None;
    for (i, snap) in ["01", "02", "03", "04", "05", "06", "07"].iter().enumerate() {
        let tree = repo.find_tree(write_tree(&repo, &snaps.join(snap))?)?;
        let sig = Signature::new("demo", "demo@example.com", &Time::new(1_680_000_000 + i as i64 * 5_000_000, 0))?;
        let parents: Vec<_> = parent.map(|p| repo.find_commit(p)).transpose()?.into_iter().collect();
        let refs: Vec<_> = parents.iter().collect();
        parent = Some(repo.commit(Some("HEAD"), &sig, &sig, &format!("snapshot {snap}"), &tree, &refs)?);
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    let temp = tempfile::tempdir()?;
    let repo = match std::env::args_os().nth(1) {
        Some(p) => PathBuf::from(p),
        None => {
            demo_repo(temp.path())?;
            temp.path().to_path_buf()
        }
    };
    let options = HistoryOptions {
        max_commits: 10,
        seed: 7,
        ..Default::default()
    };
    let report = run_history(&repo, &Analyzer::with_defaults(), &options)?;

    println!("{} commits touch source; measured {}", report.eligible_commits.unwrap_or(0), report.checkpoints.len());
    for c in &report.checkpoints {
        let when = c.timestamp.map(|t| t.date_naive().to_string()).unwrap_or_default();
        println!("  {} {}  {:<5} erosion {:.3} verbosity {:.3}", &c.label[..8], when, c.phase, c.erosion.score, c.verbosity.score);
    }
    if let Some(s) = &report.summary {
        println!("rising: erosion {} verbosity {}", s.rising_erosion, s.rising_verbosity);
    }
    if let Some(era) = &report.era {
        println!("era split: {} before, {} after, eligible {}", era.n_pre, era.n_post, era.eligible);
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
