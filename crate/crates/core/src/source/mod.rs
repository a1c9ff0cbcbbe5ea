//! Source model: files, callables, and the per-snapshot inventory.

pub mod adapter;
pub mod lines;
pub mod python;

use std::path::Path;
use std::sync::Arc;

use globset::{Glob, GlobSet, GlobSetBuilder};
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use tree_sitter::{Node, Tree};

use crate::error::{Error, Result};
pub use adapter::{AdapterRegistry, GrammarAdapter, TokenClass};
pub use lines::LineMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct FileRecord {
    pub path: String,
    pub language: String,
    pub loc: u32,
    pub line_count: u32,
    pub decode_ok: bool,
}

/// Inclusive 1-based line range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, JsonSchema)]
pub struct LineSpan {
    pub start: u32,
    pub end: u32,
}

impl LineSpan {
    pub fn new(start: u32, end: u32) -> Self {
        debug_assert!(start <= end);
        Self { start, end }
    }

    pub fn len(&self) -> u32 {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lines(&self) -> impl Iterator<Item = u32> {
        self.start..=self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct CallableRecord {
    pub qualified_name: String,
    pub file: String,
    pub span: LineSpan,
    pub cc: u32,
    pub sloc: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "lowercase")]
pub enum SkipReason {
    Decode,
    Parse,
    Minified,
    Io,
}

impl std::fmt::Display for SkipReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SkipReason::Decode => "decode",
            SkipReason::Parse => "parse",
            SkipReason::Minified => "minified",
            SkipReason::Io => "io",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
pub struct SkippedFile {
    pub path: String,
    pub reason: SkipReason,
}

/// Every file and callable of one workspace snapshot.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct SourceInventory {
    pub files: Vec<FileRecord>,
    pub callables: Vec<CallableRecord>,
    pub skipped: Vec<SkippedFile>,
}

impl SourceInventory {
    /// Merges partial inventories. The result does not depend on the order
    /// of `parts`.
    pub fn merge(parts: impl IntoIterator<Item = SourceInventory>) -> Self {
        let mut out = SourceInventory::default();
        for part in parts {
            out.files.extend(part.files);
            out.callables.extend(part.callables);
            out.skipped.extend(part.skipped);
        }
        out.canonicalize();
        out
    }

    fn canonicalize(&mut self) {
        self.files.sort_by(|a, b| a.path.cmp(&b.path));
        self.callables.sort_by(|a, b| {
            (&a.file, a.span.start, a.span.end, &a.qualified_name)
                .cmp(&(&b.file, b.span.start, b.span.end, &b.qualified_name))
        });
        self.skipped.sort();
    }

    pub fn loc(&self) -> u64 {
        self.files.iter().map(|f| f.loc as u64).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Utf8,
    Latin1,
    Ascii,
}

impl Encoding {
    pub fn from_label(label: &str) -> Result<Self> {
        match label.to_ascii_lowercase().replace('_', "-").as_str() {
            "utf-8" | "utf8" => Ok(Encoding::Utf8),
            "latin-1" | "latin1" | "iso-8859-1" => Ok(Encoding::Latin1),
            "ascii" | "us-ascii" => Ok(Encoding::Ascii),
            other => Err(Error::Config(format!("unsupported encoding `{other}`"))),
        }
    }

    pub fn decode(self, bytes: Vec<u8>) -> Option<String> {
        match self {
            Encoding::Utf8 => String::from_utf8(bytes).ok(),
            Encoding::Ascii => bytes.is_ascii().then(|| String::from_utf8(bytes).ok()).flatten(),
            Encoding::Latin1 => Some(bytes.iter().map(|&b| b as char).collect()),
        }
    }
}

fn default_languages() -> Vec<String> {
    vec!["python".to_string()]
}

fn default_encoding() -> String {
    "utf-8".to_string()
}

fn default_minified() -> usize {
    500
}

/// Scan settings, loadable from a JSON or YAML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    #[serde(default = "default_languages")]
    pub languages: Vec<String>,
    #[serde(default = "default_encoding")]
    pub encoding: String,
    #[serde(default)]
    pub exclude: Vec<String>,
    #[serde(default = "default_minified")]
    pub minified_line_threshold: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            languages: default_languages(),
            encoding: default_encoding(),
            exclude: Vec::new(),
            minified_line_threshold: default_minified(),
        }
    }
}

impl ScanConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let config: ScanConfig = if is_json {
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        } else {
            serde_yaml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        };
        config.compile()?;
        Ok(config)
    }

    /// Validates the config and resolves it against the builtin adapters.
    pub fn compile(&self) -> Result<CompiledScan> {
        let encoding = Encoding::from_label(&self.encoding)?;
        let registry = AdapterRegistry::builtin().restrict(&self.languages)?;
        let mut builder = GlobSetBuilder::new();
        for pattern in &self.exclude {
            let glob = Glob::new(pattern)
                .map_err(|e| Error::Config(format!("bad exclude glob `{pattern}`: {e}")))?;
            builder.add(glob);
        }
        let exclude = builder
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        if self.minified_line_threshold == 0 {
            return Err(Error::Config("minified_line_threshold must be positive".into()));
        }
        Ok(CompiledScan {
            registry,
            encoding,
            exclude,
            minified_line_threshold: self.minified_line_threshold,
        })
    }
}

/// A validated [`ScanConfig`].
#[derive(Debug, Clone)]
pub struct CompiledScan {
    pub registry: AdapterRegistry,
    pub encoding: Encoding,
    pub exclude: GlobSet,
    pub minified_line_threshold: usize,
}

impl CompiledScan {
    /// Whether a workspace-relative path takes part in the scan.
    pub fn accepts(&self, path: &str) -> bool {
        self.registry.for_path(path).is_some() && !self.exclude.is_match(path)
    }
}

/// Raw bytes of one workspace file.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub path: String,
    pub bytes: Vec<u8>,
}

/// A decoded and parsed file, kept for the rule engine and clone detector.
pub struct ParsedFile {
    pub record: FileRecord,
    pub text: String,
    pub tree: Tree,
    pub lines: LineMap,
    pub adapter: Arc<dyn GrammarAdapter>,
}

impl std::fmt::Debug for ParsedFile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParsedFile").field("record", &self.record).finish()
    }
}

/// A scanned snapshot: the inventory plus the parsed files behind it.
#[derive(Debug, Default)]
pub struct Workspace {
    pub inventory: SourceInventory,
    pub parsed: Vec<ParsedFile>,
}

/// Scans a directory tree into an inventory.
pub fn scan_tree(root: &Path, config: &ScanConfig) -> Result<SourceInventory> {
    Ok(load_tree(root, &config.compile()?)?.inventory)
}

/// Scans a directory tree, keeping parsed files.
pub fn load_tree(root: &Path, scan: &CompiledScan) -> Result<Workspace> {
    let meta = std::fs::metadata(root).map_err(|e| Error::RootUnreadable {
        path: root.to_path_buf(),
        reason: e.to_string(),
    })?;
    if !meta.is_dir() {
        return Err(Error::RootUnreadable {
            path: root.to_path_buf(),
            reason: "not a directory".into(),
        });
    }
    std::fs::read_dir(root).map_err(|e| Error::RootUnreadable {
        path: root.to_path_buf(),
        reason: e.to_string(),
    })?;

    let mut paths = Vec::new();
    let mut unreadable = Vec::new();
    let walker = walkdir::WalkDir::new(root)
        .follow_links(false)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !e.file_name().to_string_lossy().starts_with('.'));
    for entry in walker {
        let entry = match entry {
            Ok(entry) => entry,
            Err(err) => {
                if let Some(path) = err.path().and_then(|p| relative_path(root, p)) {
                    if scan.accepts(&path) {
                        unreadable.push(SkippedFile {
                            path,
                            reason: SkipReason::Io,
                        });
                    }
                }
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let Some(rel) = relative_path(root, entry.path()) else {
            continue;
        };
        if scan.accepts(&rel) {
            paths.push((rel, entry.into_path()));
        }
    }

    let reads: Vec<_> = paths
        .into_par_iter()
        .map(|(rel, abs)| match std::fs::read(&abs) {
            Ok(bytes) => Ok(SourceFile { path: rel, bytes }),
            Err(_) => Err(SkippedFile {
                path: rel,
                reason: SkipReason::Io,
            }),
        })
        .collect();
    let mut files = Vec::with_capacity(reads.len());
    for read in reads {
        match read {
            Ok(file) => files.push(file),
            Err(skip) => unreadable.push(skip),
        }
    }

    let mut workspace = analyze_sources(files, scan);
    workspace.inventory.skipped.extend(unreadable);
    workspace.inventory.canonicalize();
    Ok(workspace)
}

/// Workspace-relative path with `/` separators; `None` for paths outside root.
pub fn relative_path(root: &Path, path: &Path) -> Option<String> {
    let rel = path.strip_prefix(root).ok()?;
    let mut parts = Vec::new();
    for comp in rel.components() {
        match comp {
            std::path::Component::Normal(s) => parts.push(s.to_string_lossy().into_owned()),
            _ => return None,
        }
    }
    (!parts.is_empty()).then(|| parts.join("/"))
}

/// Parses in-memory files. Files the config does not accept are ignored.
pub fn analyze_sources(files: Vec<SourceFile>, scan: &CompiledScan) -> Workspace {
    let results: Vec<_> = files
        .into_par_iter()
        .filter(|f| scan.accepts(&f.path))
        .map(|f| {
            let adapter = scan.registry.for_path(&f.path).expect("accepted path").clone();
            parse_file(f, adapter, scan)
        })
        .collect();

    let mut parsed = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(p) => parsed.push(p),
            Err(s) => skipped.push(s),
        }
    }
    parsed.sort_by(|a, b| a.record.path.cmp(&b.record.path));

    let callables = parsed.par_iter().flat_map_iter(enumerate_callables).collect();
    let mut inventory = SourceInventory {
        files: parsed.iter().map(|p| p.record.clone()).collect(),
        callables,
        skipped,
    };
    inventory.canonicalize();
    Workspace { inventory, parsed }
}

/// Decodes and parses one file, or reports why it was skipped.
pub fn parse_file(
    file: SourceFile,
    adapter: Arc<dyn GrammarAdapter>,
    scan: &CompiledScan,
) -> Result<ParsedFile, SkippedFile> {
    let SourceFile { path, bytes } = file;
    let skip = |reason| SkippedFile {
        path: path.clone(),
        reason,
    };
    let Some(text) = scan.encoding.decode(bytes) else {
        return Err(skip(SkipReason::Decode));
    };
    let physical = text.lines().count();
    if physical > 0 && text.chars().count() > scan.minified_line_threshold * physical {
        return Err(skip(SkipReason::Minified));
    }
    let Some(tree) = adapter.parse(&text) else {
        return Err(skip(SkipReason::Parse));
    };
    if tree.root_node().has_error() {
        return Err(skip(SkipReason::Parse));
    }
    let comments = lines::collect_ranges(tree.root_node(), |n| adapter.is_comment(n));
    let lines = LineMap::new(&text, &comments);
    let record = FileRecord {
        path,
        language: adapter.language().to_string(),
        loc: lines.loc(),
        line_count: lines.line_count(),
        decode_ok: true,
    };
    Ok(ParsedFile {
        record,
        text,
        tree,
        lines,
        adapter,
    })
}

/// One record per named callable of a parsed file.
pub fn enumerate_callables(file: &ParsedFile) -> Vec<CallableRecord> {
    file.adapter
        .callables(&file.tree, &file.text)
        .into_iter()
        .map(|c| {
            let span = node_span(&c.node);
            CallableRecord {
                qualified_name: c.qualified_name,
                file: file.record.path.clone(),
                span,
                cc: cyclomatic_complexity(file.adapter.as_ref(), c.node),
                sloc: source_lines(&file.lines, span).max(1),
            }
        })
        .collect()
}

pub fn cyclomatic_complexity(adapter: &dyn GrammarAdapter, callable: Node<'_>) -> u32 {
    adapter.cyclomatic_complexity(callable).max(1)
}

/// Non-blank, non-comment lines within a span.
pub fn source_lines(lines: &LineMap, span: LineSpan) -> u32 {
    lines.code_lines_in(span.start, span.end)
}

pub(crate) fn node_span(node: &Node<'_>) -> LineSpan {
    let start = node.start_position().row as u32 + 1;
    let mut end = node.end_position().row as u32 + 1;
    // A node ending at column 0 stops before that line.
    if node.end_position().column == 0 && end > start {
        end -= 1;
    }
    LineSpan::new(start, end)
}
