//! A trajectory over explicit checkpoint directories, with phases, slopes
//! and the before/after era comparison.

use std::path::PathBuf;

use chrono::{Months, NaiveDate, TimeZone, Utc};
use slopscope::trajectory::{bin_phases, era_split, run_checkpoints, trajectory_summary};
use slopscope::Analyzer;

fn main() -> anyhow::Result<()> {
    let snaps = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/history/snapshots");
    let dirs: Vec<PathBuf> = ["01", "03", "05", "06", "07"].iter().map(|d| snaps.join(d)).collect();
    let mut report = run_checkpoints("fixture snapshots", &dirs, &Analyzer::with_defaults())?;

    println!("index  phase  erosion  verbosity  loc");
    for c in &report.checkpoints {
        println!("{:>5}  {:<5}  {:.4}   {:.4}     {}", c.index, c.phase, c.erosion.score, c.verbosity.score, c.loc);
    }
    let s = report.summary.as_ref().expect("five checkpoints");
    println!("\nrising erosion {} (slope {:+.4})", s.rising_erosion, s.slope_erosion);
    println!("rising verbosity {} (slope {:+.4})", s.rising_verbosity, s.slope_verbosity);

    // Directories carry no dates; stamp them two months apart from September 2023.
    let start = Utc.with_ymd_and_hms(2023, 9, 1, 0, 0, 0).unwrap();
    for (i, c) in report.checkpoints.iter_mut().enumerate() {
        c.timestamp = Some(start + Months::new(2 * i as u32));
    }
    let cutoff = NaiveDate::from_ymd_opt(2024, 1, 1).unwrap();
    let era = era_split(&report.checkpoints, cutoff)?;
    println!("\nera split at {cutoff}: {} before, {} after, eligible {}", era.n_pre, era.n_post, era.eligible);

    println!("\nphases for 3..8 checkpoints:");
    for n in 3..=8 {
        let phases: Vec<String> = bin_phases(n)?.iter().map(|p| p.to_string()).collect();
        println!("  {n}: {}", phases.join(" "));
    }
    let again = trajectory_summary(&report.checkpoints, report.checkpoints.len())?;
    assert_eq!(&again, s);
    Ok(())
}
