//! Verbosity: the share of code lines that are rule-flagged or cloned.
//!
//! Flagged lines and clone lines are collected as `(file, line)` sets, so a
//! line hit by several rules and a clone counts once. Only code lines (non
//! blank, non comment) are counted, which keeps the score in `[0, 1]`.

pub mod clones;
pub mod pattern;
pub mod rules;

use std::collections::{BTreeMap, BTreeSet};

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::source::LineMap;
pub use clones::{detect_clones, normalize_file, CloneRegion, NormalizedFile, DEFAULT_MIN_WINDOW};
pub use rules::{match_rules, QualityRule, RuleMatch, RuleSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct VerbosityBreakdown {
    pub score: f64,
    pub flagged_lines: u32,
    pub clone_lines: u32,
    pub union_lines: u32,
    pub loc: u32,
    pub violation_density: f64,
    pub clone_ratio: f64,
}

impl Default for VerbosityBreakdown {
    fn default() -> Self {
        Self {
            score: 0.0,
            flagged_lines: 0,
            clone_lines: 0,
            union_lines: 0,
            loc: 0,
            violation_density: 0.0,
            clone_ratio: 0.0,
        }
    }
}

impl VerbosityBreakdown {
    fn from_counts(flagged: u32, cloned: u32, union: u32, loc: u32) -> Self {
        let ratio = |n: u32| if loc > 0 { n as f64 / loc as f64 } else { 0.0 };
        Self {
            score: ratio(union),
            flagged_lines: flagged,
            clone_lines: cloned,
            union_lines: union,
            loc,
            violation_density: ratio(flagged),
            clone_ratio: ratio(cloned),
        }
    }
}

#[derive(Default)]
struct LineSets {
    flagged: BTreeSet<u32>,
    cloned: BTreeSet<u32>,
}

fn check_line(file: &str, map: &LineMap, line: u32) -> Result<()> {
    if line == 0 || line > map.line_count() {
        return Err(Error::LineOutOfBounds {
            file: file.to_string(),
            line,
            line_count: map.line_count(),
        });
    }
    Ok(())
}

fn collect<'a>(
    files: &'a BTreeMap<String, LineMap>,
    matches: &[RuleMatch],
    clones: &[CloneRegion],
) -> Result<BTreeMap<&'a str, LineSets>> {
    let mut sets: BTreeMap<&str, LineSets> = files.keys().map(|k| (k.as_str(), LineSets::default())).collect();
    for m in matches {
        let (path, map) = files
            .get_key_value(&m.file)
            .ok_or_else(|| Error::UnknownFile(m.file.clone()))?;
        let entry = sets.get_mut(path.as_str()).expect("keyed by files");
        for &line in &m.lines {
            check_line(path, map, line)?;
            if map.is_code(line) {
                entry.flagged.insert(line);
            }
        }
    }
    for c in clones {
        let (path, map) = files
            .get_key_value(&c.file)
            .ok_or_else(|| Error::UnknownFile(c.file.clone()))?;
        let entry = sets.get_mut(path.as_str()).expect("keyed by files");
        check_line(path, map, c.span.start)?;
        check_line(path, map, c.span.end)?;
        entry
            .cloned
            .extend(c.span.lines().filter(|l| map.is_code(*l)));
    }
    Ok(sets)
}

/// Deduplicated verbosity over a set of files.
///
/// `files` maps each path to its line table; its LOC is the denominator.
pub fn verbosity_score(
    files: &BTreeMap<String, LineMap>,
    matches: &[RuleMatch],
    clones: &[CloneRegion],
) -> Result<VerbosityBreakdown> {
    let sets = collect(files, matches, clones)?;
    let (mut flagged, mut cloned, mut union) = (0u32, 0u32, 0u32);
    for s in sets.values() {
        flagged += s.flagged.len() as u32;
        cloned += s.cloned.len() as u32;
        union += s.flagged.union(&s.cloned).count() as u32;
    }
    let loc = files.values().map(LineMap::loc).sum();
    Ok(VerbosityBreakdown::from_counts(flagged, cloned, union, loc))
}

/// Per-file breakdowns, keyed by path.
pub fn verbosity_by_file(
    files: &BTreeMap<String, LineMap>,
    matches: &[RuleMatch],
    clones: &[CloneRegion],
) -> Result<BTreeMap<String, VerbosityBreakdown>> {
    let sets = collect(files, matches, clones)?;
    Ok(sets
        .into_iter()
        .map(|(path, s)| {
            let union = s.flagged.union(&s.cloned).count() as u32;
            let b = VerbosityBreakdown::from_counts(
                s.flagged.len() as u32,
                s.cloned.len() as u32,
                union,
                files[path].loc(),
            );
            (path.to_string(), b)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::LineSpan;
    use proptest::prelude::*;
    use rules::Position;

    fn rule_match(file: &str, lines: &[u32]) -> RuleMatch {
        RuleMatch {
            rule_id: "r".into(),
            file: file.into(),
            language: "python".into(),
            start: Position { line: lines[0], col: 1 },
            end: Position { line: *lines.last().unwrap(), col: 2 },
            lines: lines.to_vec(),
            text: String::new(),
        }
    }

    fn clone(file: &str, start: u32, end: u32) -> CloneRegion {
        CloneRegion {
            clone_class_id: 0,
            file: file.into(),
            span: LineSpan::new(start, end),
            fingerprint: String::new(),
        }
    }

    fn one_file(loc: u32) -> BTreeMap<String, LineMap> {
        BTreeMap::from([("a.py".to_string(), LineMap::all_code(loc))])
    }

    #[test]
    fn nothing_flagged() {
        let v = verbosity_score(&one_file(10), &[], &[]).unwrap();
        assert_eq!(v.score, 0.0);
        assert_eq!(v.loc, 10);
    }

    #[test]
    fn worked_example() {
        let v = verbosity_score(&one_file(10), &[rule_match("a.py", &[1, 2, 3])], &[clone("a.py", 3, 4)]).unwrap();
        assert_eq!(v.union_lines, 4);
        assert_eq!(v.score, 0.4);
        assert_eq!(v.violation_density, 0.3);
        assert_eq!(v.clone_ratio, 0.2);
    }

    #[test]
    fn everything_flagged_is_one() {
        let v = verbosity_score(&one_file(5), &[rule_match("a.py", &[1, 2, 3, 4, 5])], &[clone("a.py", 1, 5)]).unwrap();
        assert_eq!(v.score, 1.0);
    }

    #[test]
    fn non_code_lines_do_not_count() {
        let files = BTreeMap::from([("a.py".to_string(), LineMap::from_code_lines(4, [1, 4]))]);
        let v = verbosity_score(&files, &[], &[clone("a.py", 1, 4)]).unwrap();
        assert_eq!(v.clone_lines, 2);
        assert_eq!(v.score, 1.0);
    }

    #[test]
    fn out_of_bounds_is_an_error() {
        let err = verbosity_score(&one_file(3), &[rule_match("a.py", &[4])], &[]).unwrap_err();
        assert!(matches!(err, Error::LineOutOfBounds { line: 4, .. }));
        assert!(verbosity_score(&one_file(3), &[rule_match("b.py", &[1])], &[]).is_err());
    }

    #[test]
    fn empty_map_is_zero() {
        assert_eq!(verbosity_score(&BTreeMap::new(), &[], &[]).unwrap(), VerbosityBreakdown::default());
    }

    proptest! {
        #[test]
        fn bounded_dedup_and_monotone(
            loc in 1u32..200,
            flagged in prop::collection::vec(prop::collection::btree_set(1u32..200, 1..10), 0..6),
            cloned in prop::collection::vec((1u32..200, 0u32..20), 0..4),
        ) {
            let files = one_file(loc);
            let matches: Vec<_> = flagged.iter()
                .map(|s| s.iter().copied().filter(|l| *l <= loc).collect::<Vec<_>>())
                .filter(|v| !v.is_empty())
                .map(|v| rule_match("a.py", &v))
                .collect();
            let clones: Vec<_> = cloned.iter()
                .filter(|(s, _)| *s <= loc)
                .map(|&(s, len)| clone("a.py", s, (s + len).min(loc)))
                .collect();
            let v = verbosity_score(&files, &matches, &clones).unwrap();
            prop_assert!((0.0..=1.0).contains(&v.score));
            prop_assert!(v.union_lines <= v.flagged_lines + v.clone_lines);

            let doubled: Vec<_> = matches.iter().chain(matches.iter()).cloned().collect();
            prop_assert_eq!(verbosity_score(&files, &doubled, &clones).unwrap(), v);

            if !matches.is_empty() {
                let fewer = verbosity_score(&files, &matches[1..], &clones).unwrap();
                prop_assert!(fewer.score <= v.score);
            }
        }
    }
}
