//! Erosion under every cutoff and size exponent of the sensitivity grid.

use std::path::PathBuf;

use slopscope::erosion::{erosion_score, erosion_sensitivity, ErosionParams};
use slopscope::source::{scan_tree, ScanConfig};

fn main() -> anyhow::Result<()> {
    let root = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/history/snapshots/07"));
    let inventory = scan_tree(&root, &ScanConfig::default())?;

    println!("cutoff  exponent  erosion");
    for row in erosion_sensitivity(&inventory) {
        println!("{:>6}  {:>8}  {:.4}", row.cutoff, row.size_exponent, row.score);
    }
    let default = erosion_score(&inventory, ErosionParams::default());
    println!("\ndefault ({} / {}): {:.4}", default.high_cc_mass, default.total_mass, default.score);
    Ok(())
}
