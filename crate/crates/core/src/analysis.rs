//! One-snapshot measurement: inventory, erosion, rule matches, clones and
//! verbosity for a directory or an in-memory file set.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use crate::erosion::{erosion_over, ErosionParams, ErosionReport};
use crate::error::Result;
use crate::source::{
    analyze_sources, load_tree, CompiledScan, LineMap, ScanConfig, SourceFile, SourceInventory, Workspace,
};
use crate::verbosity::{
    detect_clones, match_rules, normalize_file, rules::sort_matches, verbosity_score, CloneRegion, RuleMatch,
    RuleSet, VerbosityBreakdown, DEFAULT_MIN_WINDOW,
};

/// Number of hotspots kept in reports.
pub const DEFAULT_HOTSPOTS: usize = 10;

#[derive(Debug, Clone)]
pub struct Analyzer {
    pub scan: CompiledScan,
    pub rules: RuleSet,
    pub erosion: ErosionParams,
    pub min_window: usize,
    pub normalize_clones: bool,
    pub hotspots: usize,
}

impl Analyzer {
    pub fn new(config: &ScanConfig, rules: RuleSet) -> Result<Self> {
        Ok(Self {
            scan: config.compile()?,
            rules,
            erosion: ErosionParams::default(),
            min_window: DEFAULT_MIN_WINDOW,
            normalize_clones: true,
            hotspots: DEFAULT_HOTSPOTS,
        })
    }

    /// Builtin Python adapter, starter rules, default parameters.
    pub fn with_defaults() -> Self {
        Self::new(&ScanConfig::default(), RuleSet::starter()).expect("default config is valid")
    }

    pub fn analyze_dir(&self, root: &Path) -> Result<SnapshotAnalysis> {
        Ok(self.analyze_workspace(load_tree(root, &self.scan)?))
    }

    pub fn analyze_files(&self, files: Vec<SourceFile>) -> SnapshotAnalysis {
        self.analyze_workspace(analyze_sources(files, &self.scan))
    }

    pub fn analyze_workspace(&self, workspace: Workspace) -> SnapshotAnalysis {
        let Workspace { inventory, parsed } = workspace;
        let per_file: Vec<_> = parsed
            .par_iter()
            .map(|p| {
                (
                    match_rules(p, &self.rules),
                    normalize_file(p, self.normalize_clones),
                )
            })
            .collect();
        let mut matches = Vec::new();
        let mut normalized = Vec::with_capacity(per_file.len());
        for (m, n) in per_file {
            matches.extend(m);
            normalized.push(n);
        }
        sort_matches(&mut matches);
        let clones = detect_clones(&normalized, self.min_window);
        let line_maps: BTreeMap<String, LineMap> = parsed
            .into_iter()
            .map(|p| (p.record.path, p.lines))
            .collect();
        let verbosity = verbosity_score(&line_maps, &matches, &clones)
            .expect("matches and clones come from the same files");
        let erosion = erosion_over(&inventory.callables, self.erosion, self.hotspots);
        SnapshotAnalysis {
            inventory,
            erosion,
            verbosity,
            matches,
            clones,
            line_maps,
        }
    }
}

/// Everything measured on one snapshot.
#[derive(Debug, Clone)]
pub struct SnapshotAnalysis {
    pub inventory: SourceInventory,
    pub erosion: ErosionReport,
    pub verbosity: VerbosityBreakdown,
    pub matches: Vec<RuleMatch>,
    pub clones: Vec<CloneRegion>,
    pub line_maps: BTreeMap<String, LineMap>,
}

impl SnapshotAnalysis {
    pub fn loc(&self) -> u64 {
        self.inventory.loc()
    }
}
