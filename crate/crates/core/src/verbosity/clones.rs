//! Line-windowed type-2 clone detection.
//!
//! Files are reduced to *normalized lines*: the tokens starting on a physical
//! line, with identifiers and literals replaced by placeholders and comments
//! dropped. Lines without tokens disappear. Every run of `min_window`
//! consecutive normalized lines is a window, fingerprinted with a rolling
//! polynomial hash. Two windows with equal content are clones of each other
//! unless they overlap in the same file. Clone windows in a file merge into
//! regions when they share a normalized line, and regions linked through a
//! common window form a clone class.

use std::collections::{BTreeMap, HashMap};

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use tree_sitter::Node;

use crate::source::{LineSpan, ParsedFile, TokenClass};

pub const DEFAULT_MIN_WINDOW: usize = 6;

const IDENT: &str = "$id";
const LITERAL: &str = "$lit";
const SEP: char = '\u{1f}';

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedLine {
    /// 1-based physical line.
    pub line: u32,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedFile {
    pub path: String,
    pub lines: Vec<NormalizedLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct CloneRegion {
    pub clone_class_id: u32,
    pub file: String,
    pub span: LineSpan,
    /// Hex FNV-1a hash of the region's normalized lines.
    pub fingerprint: String,
}

/// Token stream of a parsed file grouped by start line.
pub fn normalize_file(file: &ParsedFile, normalize: bool) -> NormalizedFile {
    let adapter = file.adapter.as_ref();
    let mut by_line: BTreeMap<u32, String> = BTreeMap::new();
    let mut stack: Vec<Node<'_>> = vec![file.tree.root_node()];
    // Depth-first, left to right.
    while let Some(node) = stack.pop() {
        let class = adapter.token_class(&node);
        let atomic = matches!(class, TokenClass::Literal | TokenClass::Comment);
        if !atomic && node.child_count() > 0 {
            let mut cursor = node.walk();
            let kids: Vec<_> = node.children(&mut cursor).collect();
            stack.extend(kids.into_iter().rev());
            continue;
        }
        let token = match class {
            TokenClass::Comment => continue,
            TokenClass::Identifier if normalize => IDENT,
            TokenClass::Literal if normalize => LITERAL,
            _ => &file.text[node.byte_range()],
        };
        if token.trim().is_empty() {
            continue;
        }
        let line = node.start_position().row as u32 + 1;
        let entry = by_line.entry(line).or_default();
        if !entry.is_empty() {
            entry.push(SEP);
        }
        entry.push_str(token);
    }
    NormalizedFile {
        path: file.record.path.clone(),
        lines: by_line
            .into_iter()
            .map(|(line, text)| NormalizedLine { line, text })
            .collect(),
    }
}

fn fnv1a(bytes: impl IntoIterator<Item = u8>, mut hash: u64) -> u64 {
    for b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const ROLL_BASE: u64 = 0x9e37_79b9_7f4a_7c15;

/// Rolling polynomial hashes of every `width`-long window of `ids`.
fn rolling_hashes(ids: &[u64], width: usize) -> Vec<u64> {
    if ids.len() < width || width == 0 {
        return Vec::new();
    }
    let top = (1..width).fold(1u64, |acc, _| acc.wrapping_mul(ROLL_BASE));
    let mut h = ids[..width]
        .iter()
        .fold(0u64, |acc, &x| acc.wrapping_mul(ROLL_BASE).wrapping_add(x));
    let mut out = Vec::with_capacity(ids.len() - width + 1);
    out.push(h);
    for p in 1..=ids.len() - width {
        h = h
            .wrapping_sub(ids[p - 1].wrapping_mul(top))
            .wrapping_mul(ROLL_BASE)
            .wrapping_add(ids[p + width - 1]);
        out.push(h);
    }
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Type-2 clone regions across `files`, grouped into classes.
///
/// Output is sorted by class id, then file and start line. Class ids are
/// assigned in order of each class's first region.
pub fn detect_clones(files: &[NormalizedFile], min_window: usize) -> Vec<CloneRegion> {
    let width = min_window.max(1);

    // Intern line texts so windows compare as integer slices.
    let mut intern: HashMap<&str, u64> = HashMap::new();
    let ids: Vec<Vec<u64>> = files
        .iter()
        .map(|f| {
            f.lines
                .iter()
                .map(|l| {
                    let next = intern.len() as u64;
                    *intern.entry(l.text.as_str()).or_insert(next)
                })
                .collect()
        })
        .collect();
    // Line ids feed the rolling hash through a mixer so that small ids do
    // not collide structurally.
    let mixed: Vec<Vec<u64>> = ids
        .iter()
        .map(|v| v.iter().map(|&i| fnv1a(i.to_le_bytes(), FNV_OFFSET)).collect())
        .collect();

    // Index windows by fingerprint, then split buckets by exact content.
    let mut buckets: HashMap<u64, Vec<(usize, usize)>> = HashMap::new();
    for (f, m) in mixed.iter().enumerate() {
        for (p, h) in rolling_hashes(m, width).into_iter().enumerate() {
            buckets.entry(h).or_default().push((f, p));
        }
    }
    let mut groups: Vec<Vec<(usize, usize)>> = Vec::new();
    for (_, occ) in buckets {
        if occ.len() < 2 {
            continue;
        }
        let mut exact: HashMap<&[u64], Vec<(usize, usize)>> = HashMap::new();
        for (f, p) in occ {
            exact.entry(&ids[f][p..p + width]).or_default().push((f, p));
        }
        groups.extend(exact.into_values().filter(|g| g.len() >= 2));
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    groups.sort_unstable();

    // A window is a clone when an equal window exists in another file or at
    // least `width` normalized lines away in the same file.
    let mut marked: Vec<Vec<Option<usize>>> = ids.iter().map(|v| vec![None; v.len()]).collect();
    let mut matched_groups: Vec<Vec<(usize, usize)>> = Vec::new();
    for g in groups {
        let multi_file = g.iter().any(|o| o.0 != g[0].0);
        let (min_p, max_p) = (g[0].1, g[g.len() - 1].1);
        let hits: Vec<(usize, usize)> = g
            .into_iter()
            .filter(|&(_, p)| multi_file || p >= min_p + width || max_p >= p + width)
            .collect();
        if hits.len() < 2 {
            continue;
        }
        let gid = matched_groups.len();
        for &(f, p) in &hits {
            marked[f][p] = Some(gid);
        }
        matched_groups.push(hits);
    }

    // Merge clone windows sharing a normalized line into regions.
    struct Region {
        file: usize,
        first: usize,
        last: usize,
        windows: Vec<usize>,
    }
    let mut regions: Vec<Region> = Vec::new();
    let mut region_of: HashMap<(usize, usize), usize> = HashMap::new();
    for (f, marks) in marked.iter().enumerate() {
        let mut current: Option<usize> = None;
        for (p, m) in marks.iter().enumerate() {
            if m.is_none() {
                continue;
            }
            match current {
                Some(r) if regions[r].last >= p => {
                    regions[r].last = p + width - 1;
                    regions[r].windows.push(p);
                }
                _ => {
                    regions.push(Region {
                        file: f,
                        first: p,
                        last: p + width - 1,
                        windows: vec![p],
                    });
                    current = Some(regions.len() - 1);
                }
            }
            region_of.insert((f, p), current.expect("set above"));
        }
    }

    let mut uf = UnionFind((0..regions.len()).collect());
    for hits in &matched_groups {
        let r0 = region_of[&hits[0]];
        for h in &hits[1..] {
            uf.union(r0, region_of[h]);
        }
    }
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for r in 0..regions.len() {
        components.entry(uf.find(r)).or_default().push(r);
    }

    let span_of = |file: usize, first: usize, last: usize| {
        let lines = &files[file].lines;
        LineSpan::new(lines[first].line, lines[last].line)
    };
    let fingerprint = |file: usize, first: usize, last: usize| {
        let h = files[file].lines[first..=last]
            .iter()
            .fold(FNV_OFFSET, |h, l| fnv1a(l.text.bytes().chain(*b"\n"), h));
        format!("{h:016x}")
    };

    let mut classes: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    for members in components.into_values() {
        let mut spans: Vec<(usize, usize, usize)> = if members.len() >= 2 {
            members
                .iter()
                .map(|&r| (regions[r].file, regions[r].first, regions[r].last))
                .collect()
        } else {
            // Self-similar run inside one region: report its windows.
            let r = &regions[members[0]];
            r.windows
                .iter()
                .map(|&p| (r.file, p, p + width - 1))
                .collect()
        };
        spans.sort_unstable();
        spans.dedup();
        classes.push(spans);
    }
    classes.sort_unstable();

    let mut out = Vec::new();
    for (cid, spans) in classes.into_iter().enumerate() {
        for (file, first, last) in spans {
            out.push(CloneRegion {
                clone_class_id: cid as u32,
                file: files[file].path.clone(),
                span: span_of(file, first, last),
                fingerprint: fingerprint(file, first, last),
            });
        }
    }
    out
}
