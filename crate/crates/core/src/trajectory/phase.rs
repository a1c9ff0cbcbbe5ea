use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Progress phase of a checkpoint within its trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, JsonSchema)]
pub enum Phase {
    Start,
    Early,
    Mid,
    Late,
    Final,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Start => "Start",
            Phase::Early => "Early",
            Phase::Mid => "Mid",
            Phase::Late => "Late",
            Phase::Final => "Final",
        }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.as_str())
    }
}

/// Phase of every checkpoint in a trajectory of `n`.
///
/// The first checkpoint is `Start` and the last `Final`. The `m = n - 2`
/// interior checkpoints split into terciles by `min(2, floor(3j / m))` for
/// interior position `j`; a lone interior checkpoint is `Mid`.
pub fn bin_phases(n: usize) -> Result<Vec<Phase>> {
    if n == 0 {
        return Err(Error::EmptyTrajectory);
    }
    if n == 1 {
        return Ok(vec![Phase::Start]);
    }
    let m = n - 2;
    let mut out = Vec::with_capacity(n);
    out.push(Phase::Start);
    for j in 0..m {
        let phase = if m == 1 {
            Phase::Mid
        } else {
            match (3 * j / m).min(2) {
                0 => Phase::Early,
                1 => Phase::Mid,
                _ => Phase::Late,
            }
        };
        out.push(phase);
    }
    out.push(Phase::Final);
    Ok(out)
}
