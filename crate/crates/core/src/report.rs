//! Report payloads, the envelope around them, and their canonical JSON and
//! CSV encodings.

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::SnapshotAnalysis;
use crate::erosion::{erosion_over, erosion_sensitivity, ErosionParams, ErosionReport, SweepRow};
use crate::error::Result;
use crate::source::{CallableRecord, SkippedFile};
use crate::trajectory::{HistoryReport, PanelReport};
use crate::verbosity::{verbosity_by_file, CloneRegion, RuleMatch, VerbosityBreakdown};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Header of the per-file scan CSV. The last row has path `TOTAL`.
pub const SCAN_CSV_HEADER: [&str; 11] = [
    "path",
    "language",
    "loc",
    "callables",
    "max_cc",
    "high_cc_count",
    "erosion",
    "flagged_lines",
    "clone_lines",
    "union_lines",
    "verbosity",
];

/// Header of the per-checkpoint history CSV.
pub const HISTORY_CSV_HEADER: [&str; 13] = [
    "index",
    "label",
    "timestamp",
    "phase",
    "erosion",
    "verbosity",
    "loc",
    "high_cc_count",
    "max_cc",
    "flagged_lines",
    "clone_lines",
    "union_lines",
    "skipped_files",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ReportEnvelope {
    pub tool_version: String,
    /// SHA-256 of the canonical JSON of the effective configuration.
    pub config_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created_at: Option<DateTime<Utc>>,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", content = "report", rename_all = "lowercase")]
pub enum Payload {
    Scan(ScanReport),
    History(HistoryReport),
    Panel(PanelReport),
}

impl ReportEnvelope {
    pub fn new<C: Serialize>(config: &C, payload: Payload, deterministic: bool) -> Result<Self> {
        Ok(Self {
            tool_version: TOOL_VERSION.to_string(),
            config_digest: config_digest(config)?,
            created_at: (!deterministic).then(Utc::now),
            payload,
        })
    }
}

/// Sensitivity of erosion to its cutoff and size exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SweepReport {
    /// Score at the default parameters.
    pub default_score: f64,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct FileSummary {
    pub path: String,
    pub language: String,
    pub loc: u32,
    pub line_count: u32,
    pub callables: u32,
    pub max_cc: u32,
    pub high_cc_count: u32,
    pub erosion: f64,
    pub verbosity: VerbosityBreakdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct ScanTotals {
    pub files: usize,
    pub skipped: usize,
    pub callables: usize,
    pub loc: u64,
    pub clone_classes: usize,
    pub clone_regions: usize,
    pub rule_matches: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ScanReport {
    pub root: String,
    pub totals: ScanTotals,
    pub erosion: ErosionReport,
    pub verbosity: VerbosityBreakdown,
    /// Files in path order.
    pub files: Vec<FileSummary>,
    pub skipped: Vec<SkippedFile>,
    /// Match count per rule id, for rules with at least one match.
    pub rule_hits: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matches: Option<Vec<RuleMatch>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clones: Option<Vec<CloneRegion>>,
}

impl ScanReport {
    pub fn from_analysis(
        root: impl Into<String>,
        analysis: &SnapshotAnalysis,
        params: ErosionParams,
        sweep: bool,
        emit_matches: bool,
    ) -> Self {
        let mut by_file: BTreeMap<&str, Vec<CallableRecord>> = BTreeMap::new();
        for c in &analysis.inventory.callables {
            by_file.entry(c.file.as_str()).or_default().push(c.clone());
        }
        let verbosity = verbosity_by_file(&analysis.line_maps, &analysis.matches, &analysis.clones)
            .expect("matches and clones come from the same files");
        let files = analysis
            .inventory
            .files
            .iter()
            .map(|f| {
                let callables = by_file.get(f.path.as_str()).map(Vec::as_slice).unwrap_or_default();
                let erosion = erosion_over(callables, params, 0);
                FileSummary {
                    path: f.path.clone(),
                    language: f.language.clone(),
                    loc: f.loc,
                    line_count: f.line_count,
                    callables: callables.len() as u32,
                    max_cc: erosion.max_cc,
                    high_cc_count: erosion.high_cc_count,
                    erosion: erosion.score,
                    verbosity: verbosity.get(&f.path).copied().unwrap_or_default(),
                }
            })
            .collect();
        let mut rule_hits = BTreeMap::new();
        for m in &analysis.matches {
            *rule_hits.entry(m.rule_id.clone()).or_insert(0) += 1;
        }
        let classes: std::collections::BTreeSet<u32> = analysis.clones.iter().map(|c| c.clone_class_id).collect();
        let sweep = sweep.then(|| SweepReport {
            default_score: analysis.erosion.score,
            rows: erosion_sensitivity(&analysis.inventory),
        });
        Self {
            root: root.into(),
            totals: ScanTotals {
                files: analysis.inventory.files.len(),
                skipped: analysis.inventory.skipped.len(),
                callables: analysis.inventory.callables.len(),
                loc: analysis.loc(),
                clone_classes: classes.len(),
                clone_regions: analysis.clones.len(),
                rule_matches: analysis.matches.len(),
            },
            erosion: analysis.erosion.clone(),
            verbosity: analysis.verbosity,
            files,
            skipped: analysis.inventory.skipped.clone(),
            rule_hits,
            sweep,
            matches: emit_matches.then(|| analysis.matches.clone()),
            clones: emit_matches.then(|| analysis.clones.clone()),
        }
    }
}

/// JSON schemas for every document the tool writes, keyed by file name.
pub fn json_schemas() -> Vec<(&'static str, serde_json::Value)> {
    fn of<T: JsonSchema>() -> serde_json::Value {
        serde_json::to_value(schemars::schema_for!(T)).expect("schemas serialize")
    }
    vec![
        ("report.schema.json", of::<ReportEnvelope>()),
        ("rule-match.schema.json", of::<crate::verbosity::RuleMatch>()),
    ]
}

/// JSON with object keys sorted lexicographically, pretty-printed, with a
/// trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let value = serde_json::to_value(value)?;
    let mut out = serde_json::to_string_pretty(&value)?;
    out.push('\n');
    Ok(out)
}

/// One compact canonical JSON document per line.
pub fn to_json_lines<T: Serialize>(items: &[T]) -> Result<String> {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(&serde_json::to_value(item)?)?);
        out.push('\n');
    }
    Ok(out)
}

/// Hex SHA-256 of the compact canonical JSON of `config`.
pub fn config_digest<T: Serialize>(config: &T) -> Result<String> {
    let canonical = serde_json::to_string(&serde_json::to_value(config)?)?;
    let digest = Sha256::digest(canonical.as_bytes());
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

fn csv_string(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields")
}

/// Per-file rows followed by a `TOTAL` row.
pub fn scan_csv(report: &ScanReport) -> String {
    let mut rows = vec![SCAN_CSV_HEADER.iter().map(|s| s.to_string()).collect()];
    for f in &report.files {
        rows.push(vec![
            f.path.clone(),
            f.language.clone(),
            f.loc.to_string(),
            f.callables.to_string(),
            f.max_cc.to_string(),
            f.high_cc_count.to_string(),
            f.erosion.to_string(),
            f.verbosity.flagged_lines.to_string(),
            f.verbosity.clone_lines.to_string(),
            f.verbosity.union_lines.to_string(),
            f.verbosity.score.to_string(),
        ]);
    }
    rows.push(vec![
        "TOTAL".to_string(),
        String::new(),
        report.totals.loc.to_string(),
        report.totals.callables.to_string(),
        report.erosion.max_cc.to_string(),
        report.erosion.high_cc_count.to_string(),
        report.erosion.score.to_string(),
        report.verbosity.flagged_lines.to_string(),
        report.verbosity.clone_lines.to_string(),
        report.verbosity.union_lines.to_string(),
        report.verbosity.score.to_string(),
    ]);
    csv_string(rows)
}

/// One row per measured checkpoint.
pub fn history_csv(report: &HistoryReport) -> String {
    let mut rows = vec![HISTORY_CSV_HEADER.iter().map(|s| s.to_string()).collect()];
    for c in &report.checkpoints {
        rows.push(vec![
            c.index.to_string(),
            c.label.clone(),
            c.timestamp.map(|t| t.to_rfc3339()).unwrap_or_default(),
            c.phase.to_string(),
            c.erosion.score.to_string(),
            c.verbosity.score.to_string(),
            c.loc.to_string(),
            c.high_cc_count.to_string(),
            c.max_cc.to_string(),
            c.verbosity.flagged_lines.to_string(),
            c.verbosity.clone_lines.to_string(),
            c.verbosity.union_lines.to_string(),
            c.skipped.len().to_string(),
        ]);
    }
    csv_string(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Analyzer;
    use crate::source::SourceFile;

    fn analysis() -> SnapshotAnalysis {
        let text = "def f(xs):\n    return [x for x in xs]\n\n\ndef g(a):\n    if a:\n        return 1\n    return 2\n";
        Analyzer::with_defaults().analyze_files(vec![SourceFile {
            path: "pkg/m.py".into(),
            bytes: text.as_bytes().to_vec(),
        }])
    }

    #[test]
    fn canonical_json_sorts_keys() {
        #[derive(Serialize)]
        struct S {
            zeta: u8,
            alpha: u8,
        }
        let s = to_canonical_json(&S { zeta: 1, alpha: 2 }).unwrap();
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
    }

    #[test]
    fn digest_is_order_independent() {
        let a: BTreeMap<&str, u8> = BTreeMap::from([("a", 1), ("b", 2)]);
        let b = serde_json::json!({"b": 2, "a": 1});
        assert_eq!(config_digest(&a).unwrap(), config_digest(&b).unwrap());
        assert_eq!(config_digest(&a).unwrap().len(), 64);
    }

    #[test]
    fn scan_report_round_trips() {
        let report = ScanReport::from_analysis(".", &analysis(), ErosionParams::default(), true, true);
        assert_eq!(report.sweep.as_ref().unwrap().rows.len(), 9);
        assert_eq!(report.rule_hits["identity-list-comprehension"], 1);
        let env = ReportEnvelope::new(&"cfg", Payload::Scan(report), true).unwrap();
        let text = to_canonical_json(&env).unwrap();
        let back: ReportEnvelope = serde_json::from_str(&text).unwrap();
        assert_eq!(back, env);
        assert_eq!(to_canonical_json(&back).unwrap(), text);
    }

    #[test]
    fn scan_csv_has_total_row() {
        let report = ScanReport::from_analysis(".", &analysis(), ErosionParams::default(), false, false);
        let csv = scan_csv(&report);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SCAN_CSV_HEADER.join(","));
        assert!(lines[1].starts_with("pkg/m.py,python,6,2,2,0,0,"));
        assert!(lines.last().unwrap().starts_with("TOTAL,,6,2,"));
    }
}
