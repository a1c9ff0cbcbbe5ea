//! Brute-force clone classes and random fixture trees.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use slopscope::source::{analyze_sources, ScanConfig, SourceFile};
use slopscope::verbosity::{normalize_file, CloneRegion, NormalizedFile};

pub const W: usize = 6;

type Class = BTreeSet<(String, u32, u32)>;

pub fn normalized(files: &[(String, String)]) -> Vec<NormalizedFile> {
    let scan = ScanConfig::default().compile().unwrap();
    let sources = files
        .iter()
        .map(|(p, t)| SourceFile {
            path: p.clone(),
            bytes: t.as_bytes().to_vec(),
        })
        .collect();
    let ws = analyze_sources(sources, &scan);
    assert!(ws.inventory.skipped.is_empty(), "{:?}", ws.inventory.skipped);
    ws.parsed.iter().map(|p| normalize_file(p, true)).collect()
}

/// All-pairs window comparison with explicit region and class construction.
pub fn brute_force(files: &[NormalizedFile]) -> BTreeSet<Class> {
    let window = |f: usize, p: usize| -> Vec<&str> { files[f].lines[p..p + W].iter().map(|l| l.text.as_str()).collect() };
    let all: Vec<(usize, usize)> = files
        .iter()
        .enumerate()
        .flat_map(|(f, nf)| (0..nf.lines.len().saturating_sub(W - 1)).map(move |p| (f, p)))
        .collect();
    let mut pairs = Vec::new();
    for (i, &a) in all.iter().enumerate() {
        for &b in &all[i + 1..] {
            let apart = a.0 != b.0 || a.1.abs_diff(b.1) >= W;
            if apart && window(a.0, a.1) == window(b.0, b.1) {
                pairs.push((a, b));
            }
        }
    }
    let marked: BTreeSet<(usize, usize)> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();

    // A marked window joins the preceding region when they share a line.
    let mut region_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut regions: Vec<(usize, usize, usize, Vec<usize>)> = Vec::new();
    for &(f, p) in &marked {
        match regions.last_mut() {
            Some(r) if r.0 == f && r.2 + 1 > p => {
                r.2 = p + W - 1;
                r.3.push(p);
            }
            _ => regions.push((f, p, p + W - 1, vec![p])),
        }
        region_of.insert((f, p), regions.len() - 1);
    }

    // Equal marked windows link their regions; a class needs two regions,
    // otherwise each window stands alone.
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); regions.len()];
    for &a in &marked {
        for &b in &marked {
            if window(a.0, a.1) == window(b.0, b.1) {
                adj[region_of[&a]].insert(region_of[&b]);
            }
        }
    }
    let mut seen = vec![false; regions.len()];
    let mut classes = BTreeSet::new();
    let span = |f: usize, a: usize, b: usize| (files[f].path.clone(), files[f].lines[a].line, files[f].lines[b].line);
    for start in 0..regions.len() {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            for &n in &adj[comp[i]] {
                if !seen[n] {
                    seen[n] = true;
                    comp.push(n);
                }
            }
            i += 1;
        }
        let class: Class = if comp.len() == 1 {
            let (f, _, _, ws) = &regions[start];
            ws.iter().map(|&p| span(*f, p, p + W - 1)).collect()
        } else {
            comp.iter().map(|&r| span(regions[r].0, regions[r].1, regions[r].2)).collect()
        };
        classes.insert(class);
    }
    classes
}

pub fn classes_of(regions: &[CloneRegion]) -> BTreeSet<Class> {
    let mut by_id: BTreeMap<u32, Class> = BTreeMap::new();
    for r in regions {
        by_id
            .entry(r.clone_class_id)
            .or_default()
            .insert((r.file.clone(), r.span.start, r.span.end));
    }
    by_id.into_values().collect()
}

pub fn covered(regions: &[CloneRegion]) -> BTreeSet<(String, u32)> {
    regions.iter().flat_map(|r| r.span.lines().map(|l| (r.file.clone(), l))).collect()
}

pub fn random_tree(rng: &mut ChaCha8Rng) -> Vec<(String, String)> {
    let n_files = rng.gen_range(1..5);
    let mut files: Vec<(String, String)> = (0..n_files)
        .map(|i| {
            let lines = rng.gen_range(10..500);
            (format!("m{i}.py"), super::gen::module(rng, &format!("m{i}"), lines))
        })
        .collect();
    // Plant copies so that clone classes are not rare.
    for k in 0..rng.gen_range(0..4) {
        let len = rng.gen_range(6..20);
        let body = super::gen::function(rng, &format!("planted{k}"), len);
        let copies = rng.gen_range(1..4);
        for c in 0..copies {
            let body = if rng.gen_bool(0.5) {
                super::gen::rename(&body, &format!("r{c}"))
            } else {
                body.clone()
            };
            let target = rng.gen_range(0..files.len());
            files[target].1.push_str(&format!("\n\n{}\n", body.join("\n")));
        }
    }
    files
}

pub fn block(rng: &mut ChaCha8Rng) -> Vec<String> {
    loop {
        let f = super::gen::function(rng, "dup", 12);
        if f.len() >= 12 && f.iter().all(|l| !l.trim_start().starts_with('#')) {
            return f[..12].iter().map(|l| l.to_string()).chain(["    return 0".to_string()]).collect();
        }
    }
}

