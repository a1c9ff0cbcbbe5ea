//! Structural erosion: the share of complexity mass held by high-CC callables.
//!
//! Each callable carries a mass of `cc * sloc^e` (default `e = 0.5`). Erosion
//! is the mass of callables with `cc > cutoff` divided by the total mass, and
//! is defined as 0 for an inventory without mass.

use std::cmp::Ordering;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::source::{CallableRecord, SourceInventory};

/// Sweep values of the high-CC cutoff.
pub const SWEEP_CUTOFFS: [u32; 3] = [8, 10, 12];
/// Sweep values of the size exponent: no size term, square root, linear.
pub const SWEEP_EXPONENTS: [f64; 3] = [0.0, 0.5, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ErosionParams {
    pub cc_cutoff: u32,
    pub size_exponent: f64,
}

impl Default for ErosionParams {
    fn default() -> Self {
        Self {
            cc_cutoff: 10,
            size_exponent: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Hotspot {
    pub qualified_name: String,
    pub file: String,
    pub start_line: u32,
    pub cc: u32,
    pub sloc: u32,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ErosionReport {
    pub score: f64,
    pub total_mass: f64,
    pub high_cc_mass: f64,
    pub high_cc_count: u32,
    pub max_cc: u32,
    pub hotspots: Vec<Hotspot>,
}

impl Default for ErosionReport {
    fn default() -> Self {
        Self {
            score: 0.0,
            total_mass: 0.0,
            high_cc_mass: 0.0,
            high_cc_count: 0,
            max_cc: 0,
            hotspots: Vec::new(),
        }
    }
}

/// `cc * sloc^size_exponent`.
pub fn complexity_mass(cc: u32, sloc: u32, size_exponent: f64) -> f64 {
    let size = if size_exponent == 0.0 {
        1.0
    } else if size_exponent == 0.5 {
        (sloc as f64).sqrt()
    } else if size_exponent == 1.0 {
        sloc as f64
    } else {
        (sloc as f64).powf(size_exponent)
    };
    cc as f64 * size
}

/// Erosion over every callable of the inventory.
pub fn erosion_score(inventory: &SourceInventory, params: ErosionParams) -> ErosionReport {
    erosion_over(&inventory.callables, params, usize::MAX)
}

/// Like [`erosion_score`] but keeps only the `top` heaviest hotspots.
pub fn erosion_over(callables: &[CallableRecord], params: ErosionParams, top: usize) -> ErosionReport {
    let mut total_mass = 0.0;
    let mut high_cc_mass = 0.0;
    let mut high_cc_count = 0;
    let mut max_cc = 0;
    let mut hotspots = Vec::with_capacity(callables.len());
    for c in callables {
        let mass = complexity_mass(c.cc, c.sloc, params.size_exponent);
        total_mass += mass;
        if c.cc > params.cc_cutoff {
            high_cc_mass += mass;
            high_cc_count += 1;
        }
        max_cc = max_cc.max(c.cc);
        hotspots.push(Hotspot {
            qualified_name: c.qualified_name.clone(),
            file: c.file.clone(),
            start_line: c.span.start,
            cc: c.cc,
            sloc: c.sloc,
            mass,
        });
    }
    hotspots.sort_by(|a, b| {
        b.mass
            .partial_cmp(&a.mass)
            .unwrap_or(Ordering::Equal)
            .then_with(|| (&a.file, a.start_line).cmp(&(&b.file, b.start_line)))
    });
    hotspots.truncate(top);
    let score = if total_mass > 0.0 {
        (high_cc_mass / total_mass).clamp(0.0, 1.0)
    } else {
        0.0
    };
    ErosionReport {
        score,
        total_mass,
        high_cc_mass,
        high_cc_count,
        max_cc,
        hotspots,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SweepRow {
    pub cutoff: u32,
    pub size_exponent: f64,
    pub score: f64,
}

/// The 3x3 grid of cutoffs {8, 10, 12} and size terms {none, sqrt, linear}.
pub fn erosion_sensitivity(inventory: &SourceInventory) -> Vec<SweepRow> {
    SWEEP_CUTOFFS
        .iter()
        .flat_map(|&cutoff| {
            SWEEP_EXPONENTS.iter().map(move |&size_exponent| {
                let params = ErosionParams {
                    cc_cutoff: cutoff,
                    size_exponent,
                };
                SweepRow {
                    cutoff,
                    size_exponent,
                    score: erosion_over(&inventory.callables, params, 0).score,
                }
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::LineSpan;
    use proptest::prelude::*;

    fn callable(i: usize, cc: u32, sloc: u32) -> CallableRecord {
        CallableRecord {
            qualified_name: format!("f{i}"),
            file: "m.py".into(),
            span: LineSpan::new(i as u32 * 1000 + 1, i as u32 * 1000 + sloc),
            cc,
            sloc,
        }
    }

    fn inventory(pairs: &[(u32, u32)]) -> SourceInventory {
        SourceInventory {
            callables: pairs
                .iter()
                .enumerate()
                .map(|(i, &(cc, sloc))| callable(i, cc, sloc))
                .collect(),
            ..Default::default()
        }
    }

    /// Independent direct summation of the mass ratio.
    fn oracle(pairs: &[(u32, u32)], cutoff: u32, exp: f64) -> f64 {
        let mass = |cc: u32, sloc: u32| cc as f64 * (sloc as f64).powf(exp);
        let total: f64 = pairs.iter().map(|&(c, s)| mass(c, s)).sum();
        let high: f64 = pairs.iter().filter(|p| p.0 > cutoff).map(|&(c, s)| mass(c, s)).sum();
        if total > 0.0 {
            high / total
        } else {
            0.0
        }
    }

    #[test]
    fn mass_examples() {
        assert_eq!(complexity_mass(1, 1, 0.5), 1.0);
        assert_eq!(complexity_mass(12, 100, 0.5), 120.0);
        assert_eq!(complexity_mass(12, 100, 0.0), 12.0);
        assert_eq!(complexity_mass(12, 100, 1.0), 1200.0);
    }

    #[test]
    fn nothing_above_cutoff() {
        let r = erosion_score(&inventory(&[(3, 10), (10, 40)]), ErosionParams::default());
        assert_eq!(r.score, 0.0);
        assert_eq!(r.high_cc_count, 0);
        assert_eq!(r.max_cc, 10);
    }

    #[test]
    fn single_qualifying_callable() {
        let r = erosion_score(&inventory(&[(15, 49)]), ErosionParams::default());
        assert_eq!(r.score, 1.0);
        assert_eq!(r.total_mass, 105.0);
    }

    #[test]
    fn two_callable_example() {
        let r = erosion_score(&inventory(&[(12, 100), (4, 25)]), ErosionParams::default());
        assert_eq!(r.total_mass, 140.0);
        assert_eq!(r.high_cc_mass, 120.0);
        assert!((r.score - 120.0 / 140.0).abs() < 1e-15);
        assert_eq!(r.hotspots[0].qualified_name, "f0");
    }

    #[test]
    fn cutoff_is_strict() {
        let r = erosion_score(&inventory(&[(10, 16), (11, 16)]), ErosionParams::default());
        assert_eq!(r.high_cc_count, 1);
        assert!((r.score - 44.0 / 84.0).abs() < 1e-15);
    }

    #[test]
    fn empty_inventory_is_zero() {
        let r = erosion_score(&SourceInventory::default(), ErosionParams::default());
        assert_eq!(r, ErosionReport::default());
    }

    #[test]
    fn hotspot_ties_break_by_position() {
        let mut inv = inventory(&[(4, 9), (4, 9)]);
        inv.callables[0].file = "b.py".into();
        inv.callables[1].file = "a.py".into();
        let r = erosion_score(&inv, ErosionParams::default());
        assert_eq!(r.hotspots[0].file, "a.py");
    }

    #[test]
    fn sweep_grid() {
        let inv = inventory(&[(12, 100), (4, 25)]);
        let rows = erosion_sensitivity(&inv);
        assert_eq!(rows.len(), 9);
        let cell = |c: u32, e: f64| {
            rows.iter()
                .find(|r| r.cutoff == c && r.size_exponent == e)
                .unwrap()
                .score
        };
        assert!((cell(10, 0.5) - 0.857142857142857).abs() < 1e-12);
        assert_eq!(cell(10, 0.0), 0.75);
        assert_eq!(
            cell(10, 0.5).to_bits(),
            erosion_score(&inv, ErosionParams::default()).score.to_bits()
        );
        assert!(erosion_sensitivity(&SourceInventory::default())
            .iter()
            .all(|r| r.score == 0.0));
        assert!(erosion_sensitivity(&inventory(&[(8, 10), (2, 3)]))
            .iter()
            .all(|r| r.score == 0.0));
    }

    fn pairs() -> impl Strategy<Value = Vec<(u32, u32)>> {
        prop::collection::vec((1u32..=40, 1u32..=500), 0..=50)
    }

    proptest! {
        #[test]
        fn matches_oracle(p in pairs(), cutoff in prop::sample::select(vec![8u32, 10, 12]),
                          exp in prop::sample::select(vec![0.0f64, 0.5, 1.0])) {
            let got = erosion_score(&inventory(&p), ErosionParams { cc_cutoff: cutoff, size_exponent: exp }).score;
            prop_assert!((got - oracle(&p, cutoff, exp)).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&got));
        }

        #[test]
        fn adding_high_cc_raises(p in pairs(), cc in 11u32..=40, sloc in 1u32..=500) {
            let before = erosion_score(&inventory(&p), ErosionParams::default()).score;
            prop_assume!(before < 1.0);
            let mut q = p.clone();
            q.push((cc, sloc));
            prop_assert!(erosion_score(&inventory(&q), ErosionParams::default()).score > before);
        }

        #[test]
        fn adding_low_cc_lowers(p in pairs(), cc in 1u32..=10, sloc in 1u32..=500) {
            let before = erosion_score(&inventory(&p), ErosionParams::default()).score;
            prop_assume!(before > 0.0);
            let mut q = p.clone();
            q.push((cc, sloc));
            prop_assert!(erosion_score(&inventory(&q), ErosionParams::default()).score < before);
        }

        #[test]
        fn duplication_invariant(p in pairs()) {
            let once = erosion_score(&inventory(&p), ErosionParams::default()).score;
            let doubled: Vec<_> = p.iter().chain(p.iter()).copied().collect();
            let twice = erosion_score(&inventory(&doubled), ErosionParams::default()).score;
            prop_assert!((once - twice).abs() < 1e-12);
        }
    }
}
