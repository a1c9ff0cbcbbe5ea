//! Structural erosion and verbosity metrics for source trees, checkpoint
//! sequences and git histories.

pub mod analysis;
pub mod cli;
pub mod erosion;
pub mod error;
pub mod report;
pub mod source;
pub mod trajectory;
pub mod verbosity;

pub use analysis::{Analyzer, SnapshotAnalysis};
pub use error::{Error, Result};
