#![allow(dead_code)]

pub mod clone_oracle;

use std::path::{Path, PathBuf};

use chrono::DateTime;
use git2::{Oid, Repository, Signature, Time};
use serde::Deserialize;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[derive(Debug, Deserialize)]
pub struct CommitSpec {
    pub snapshot: String,
    pub time: String,
    pub message: String,
    pub modifies_source: bool,
}

#[derive(Debug, Deserialize)]
pub struct Expected {
    pub snapshot: String,
    pub phase: String,
    pub erosion: f64,
    pub verbosity: f64,
    pub loc: u64,
    pub high_cc_count: u32,
    pub max_cc: u32,
    pub flagged_lines: u32,
    pub clone_lines: u32,
    pub union_lines: u32,
}

#[derive(Debug, Deserialize)]
pub struct HistoryManifest {
    pub commits: Vec<CommitSpec>,
    pub expected: Vec<Expected>,
    pub rising_erosion: bool,
    pub rising_verbosity: bool,
}

pub fn history_manifest() -> HistoryManifest {
    let text = std::fs::read_to_string(fixtures().join("history/manifest.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn write_tree(repo: &Repository, dir: &Path) -> Oid {
    let mut builder = repo.treebuilder(None).unwrap();
    let mut entries: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap()).collect();
    entries.sort_by_key(|e| e.file_name());
    for entry in entries {
        let name = entry.file_name();
        let path = entry.path();
        if path.is_dir() {
            let oid = write_tree(repo, &path);
            builder.insert(&name, oid, 0o040000).unwrap();
        } else {
            let oid = repo.blob(&std::fs::read(&path).unwrap()).unwrap();
            builder.insert(&name, oid, 0o100644).unwrap();
        }
    }
    builder.write().unwrap()
}

/// Builds the fixture history as a git repository at `dest` and returns the
/// commit ids in manifest order.
pub fn build_history_repo(dest: &Path) -> Vec<String> {
    let manifest = history_manifest();
    let repo = Repository::init(dest).unwrap();
    let mut parent: Option<Oid> = None;
    let mut ids = Vec::new();
    for c in &manifest.commits {
        let tree_id = write_tree(&repo, &fixtures().join("history/snapshots").join(&c.snapshot));
        let tree = repo.find_tree(tree_id).unwrap();
        let secs = DateTime::parse_from_rfc3339(&c.time).unwrap().timestamp();
        let sig = Signature::new("Fixture Author", "fixture@example.com", &Time::new(secs, 0)).unwrap();
        let parents: Vec<_> = parent.iter().map(|p| repo.find_commit(*p).unwrap()).collect();
        let parent_refs: Vec<_> = parents.iter().collect();
        let oid = repo.commit(Some("HEAD"), &sig, &sig, &c.message, &tree, &parent_refs).unwrap();
        ids.push(oid.to_string());
        parent = Some(oid);
    }
    ids
}

pub mod gen {
    //! Random but syntactically valid Python modules.

    use rand::seq::SliceRandom;
    use rand::Rng;

    const NAMES: &[&str] = &[
        "alpha", "beta", "gamma", "delta", "total", "count", "items", "value", "result", "buffer", "index", "limit",
        "offset", "record", "entry", "cache", "queue", "node", "parent", "child", "weight", "score", "label", "flag",
    ];
    const FUNCS: &[&str] = &["load", "store", "merge", "split", "check", "emit", "scale", "fetch"];

    fn name(rng: &mut impl Rng) -> &'static str {
        NAMES.choose(rng).unwrap()
    }

    fn statement(rng: &mut impl Rng, indent: usize, depth: usize, out: &mut Vec<String>) {
        let pad = " ".repeat(indent);
        let (a, b, c) = (name(rng), name(rng), name(rng));
        let n = rng.gen_range(0..100);
        match rng.gen_range(0..if depth < 3 { 12 } else { 7 }) {
            0 => out.push(format!("{pad}{a} = {b} + {n}")),
            1 => out.push(format!("{pad}{a} = {}({b}, {c})", FUNCS.choose(rng).unwrap())),
            2 => out.push(format!("{pad}{a}.append({b} * {n})")),
            3 => out.push(format!("{pad}print(\"{a} {b}\", {c})")),
            4 => out.push(format!("{pad}# note about {a}")),
            5 => out.push(format!("{pad}{a} = [{b} * {n} for {b} in {c} if {b} > {n}]")),
            6 => out.push(format!("{pad}{a} = {b} if {c} else {n}")),
            7 => {
                out.push(format!("{pad}if {a} > {n} and {b}:"));
                block(rng, indent + 4, depth + 1, out);
                if rng.gen_bool(0.5) {
                    out.push(format!("{pad}else:"));
                    block(rng, indent + 4, depth + 1, out);
                }
            }
            8 => {
                out.push(format!("{pad}for {a} in {b}:"));
                block(rng, indent + 4, depth + 1, out);
            }
            9 => {
                out.push(format!("{pad}while {a} < {n}:"));
                out.push(format!("{pad}    {a} += 1"));
                block(rng, indent + 4, depth + 1, out);
            }
            10 => {
                out.push(format!("{pad}try:"));
                block(rng, indent + 4, depth + 1, out);
                out.push(format!("{pad}except ValueError:"));
                out.push(format!("{pad}    {a} = None"));
            }
            _ => {
                out.push(format!("{pad}if {a}:"));
                block(rng, indent + 4, depth + 1, out);
                out.push(format!("{pad}elif {b} or {c}:"));
                block(rng, indent + 4, depth + 1, out);
            }
        }
    }

    fn block(rng: &mut impl Rng, indent: usize, depth: usize, out: &mut Vec<String>) {
        for _ in 0..rng.gen_range(1..4) {
            statement(rng, indent, depth, out);
        }
    }

    /// One function of roughly `target` lines.
    pub fn function(rng: &mut impl Rng, fname: &str, target: usize) -> Vec<String> {
        let mut out = vec![format!("def {fname}({}, {}):", name(rng), name(rng))];
        while out.len() < target {
            statement(rng, 4, 0, &mut out);
        }
        out.push(format!("    return {}", name(rng)));
        out
    }

    /// A module of about `lines` lines made of random functions.
    pub fn module(rng: &mut impl Rng, prefix: &str, lines: usize) -> String {
        let mut out: Vec<String> = vec![format!("\"\"\"Module {prefix}.\"\"\""), String::new()];
        let mut i = 0;
        while out.len() < lines {
            out.push(String::new());
            let target = rng.gen_range(4..30);
            out.extend(function(rng, &format!("{prefix}_f{i}"), target));
            i += 1;
        }
        out.push(String::new());
        out.join("\n")
    }

    /// Renames every identifier in `lines` consistently, leaving keywords and
    /// builtins used by the generator alone.
    pub fn rename(lines: &[String], suffix: &str) -> Vec<String> {
        let re = regex::Regex::new(r"\b[a-z_][a-z0-9_]*\b").unwrap();
        let keep = [
            "def", "return", "if", "else", "elif", "for", "in", "while", "try", "except", "and", "or", "not", "print",
            "None", "append", "note", "about",
        ];
        lines
            .iter()
            .map(|l| {
                if l.trim_start().starts_with('#') || l.contains('"') {
                    return l.clone();
                }
                re.replace_all(l, |c: &regex::Captures<'_>| {
                    let w = &c[0];
                    if keep.contains(&w) {
                        w.to_string()
                    } else {
                        format!("{w}_{suffix}")
                    }
                })
                .into_owned()
            })
            .collect()
    }
}
