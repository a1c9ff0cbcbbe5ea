//! Measure a source tree and print the headline numbers.
//!
//! cargo run --example scan_tree -- path/to/project

use std::path::PathBuf;

use anyhow::Context;
use slopscope::Analyzer;

fn main() -> anyhow::Result<()> {
    let root = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/history/snapshots/07"));
    let analysis = Analyzer::with_defaults()
        .analyze_dir(&root)
        .with_context(|| format!("scanning {}", root.display()))?;

    println!("{}: {} files, {} LOC", root.display(), analysis.inventory.files.len(), analysis.loc());
    println!("erosion   {:.4}", analysis.erosion.score);
    println!("verbosity {:.4}", analysis.verbosity.score);
    println!("\nheaviest callables:");
    for h in analysis.erosion.hotspots.iter().take(5) {
        println!("  {:>3} cc {:>4} sloc  {}::{}", h.cc, h.sloc, h.file, h.qualified_name);
    }
    for s in &analysis.inventory.skipped {
        println!("skipped {} ({})", s.path, s.reason);
    }
    Ok(())
}
