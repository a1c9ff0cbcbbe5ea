//! Commit sampling and snapshot extraction from a local git repository.

use std::path::Path;

use chrono::{DateTime, TimeZone, Utc};
use git2::{ObjectType, Oid, Repository, Sort, TreeWalkMode, TreeWalkResult};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::source::{CompiledScan, SourceFile};

/// Default sample size per repository.
pub const DEFAULT_MAX_COMMITS: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct CommitRef {
    pub id: String,
    /// Committer time.
    pub time: DateTime<Utc>,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct CommitSample {
    /// Sampled commits, oldest first.
    pub commits: Vec<CommitRef>,
    /// Number of commits that touched at least one source file.
    pub eligible: usize,
    pub warnings: Vec<String>,
}

pub fn open_repository(path: &Path) -> Result<Repository> {
    Repository::open(path).map_err(|e| Error::NotARepository {
        path: path.to_path_buf(),
        reason: e.message().to_string(),
    })
}

fn is_hidden(path: &str) -> bool {
    path.split('/').any(|c| c.starts_with('.'))
}

fn commit_time(commit: &git2::Commit<'_>) -> DateTime<Utc> {
    let secs = commit.committer().when().seconds();
    Utc.timestamp_opt(secs, 0).single().unwrap_or_default()
}

fn touches_source(repo: &Repository, commit: &git2::Commit<'_>, scan: &CompiledScan) -> Result<bool> {
    let tree = commit.tree()?;
    let parent = match commit.parents().next() {
        Some(p) => Some(p.tree()?),
        None => None,
    };
    let diff = repo.diff_tree_to_tree(parent.as_ref(), Some(&tree), None)?;
    let relevant = |p: Option<&Path>| {
        p.and_then(Path::to_str)
            .is_some_and(|s| !is_hidden(s) && scan.accepts(s))
    };
    Ok(diff
        .deltas()
        .any(|d| relevant(d.old_file().path()) || relevant(d.new_file().path())))
}

/// Samples up to `max_commits` commits reachable from HEAD that modify a
/// source file, uniformly without replacement, returned oldest first.
///
/// A commit modifies a source file when its diff against its first parent
/// (or the empty tree, for a root commit) touches a path the scan accepts.
pub fn sample_commits(repo_path: &Path, max_commits: usize, seed: u64, scan: &CompiledScan) -> Result<CommitSample> {
    let repo = open_repository(repo_path)?;
    let mut warnings = Vec::new();
    let head = match repo.head().ok().and_then(|h| h.target()) {
        Some(oid) => oid,
        None => {
            warnings.push("repository has no commits".to_string());
            return Ok(CommitSample {
                commits: Vec::new(),
                eligible: 0,
                warnings,
            });
        }
    };
    let mut walk = repo.revwalk()?;
    walk.set_sorting(Sort::TOPOLOGICAL | Sort::TIME | Sort::REVERSE)?;
    walk.push(head)?;

    let mut eligible = Vec::new();
    for oid in walk {
        let commit = repo.find_commit(oid?)?;
        if touches_source(&repo, &commit, scan)? {
            eligible.push(CommitRef {
                id: commit.id().to_string(),
                time: commit_time(&commit),
                summary: commit.summary().ok().flatten().unwrap_or("").to_string(),
            });
        }
    }
    let n = eligible.len();
    if n == 0 {
        warnings.push("no commits modify a source file".to_string());
    }

    let mut picked: Vec<usize> = if n <= max_commits {
        (0..n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::index::sample(&mut rng, n, max_commits).into_vec()
    };
    // Walk order breaks committer-time ties.
    picked.sort_unstable();
    picked.sort_by_key(|&i| eligible[i].time);
    let commits = picked.into_iter().map(|i| eligible[i].clone()).collect();
    Ok(CommitSample {
        commits,
        eligible: n,
        warnings,
    })
}

/// Accepted, non-hidden source files in the tree of `commit`.
pub fn snapshot_files(repo: &Repository, commit: &str, scan: &CompiledScan) -> Result<Vec<SourceFile>> {
    let oid = Oid::from_str(commit)?;
    let tree = repo.find_commit(oid)?.tree()?;
    let mut blobs = Vec::new();
    tree.walk(TreeWalkMode::PreOrder, |dir, entry| {
        let name = entry.name().unwrap_or("");
        if name.starts_with('.') {
            return TreeWalkResult::Skip;
        }
        if entry.kind() == Some(ObjectType::Blob) {
            let path = format!("{dir}{name}");
            if scan.accepts(&path) {
                blobs.push((path, entry.id()));
            }
        }
        TreeWalkResult::Ok
    })?;
    blobs
        .into_iter()
        .map(|(path, id)| {
            let blob = repo.find_blob(id)?;
            Ok(SourceFile {
                path,
                bytes: blob.content().to_vec(),
            })
        })
        .collect()
}

/// Id and committer time of HEAD, if the repository has any commit.
pub fn head_commit(repo: &Repository) -> Option<CommitRef> {
    let commit = repo.head().ok()?.peel_to_commit().ok()?;
    Some(CommitRef {
        id: commit.id().to_string(),
        time: commit_time(&commit),
        summary: commit.summary().ok().flatten().unwrap_or("").to_string(),
    })
}
