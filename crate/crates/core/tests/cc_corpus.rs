use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use slopscope::source::{scan_tree, ScanConfig};

#[derive(Deserialize)]
struct Entry {
    file: String,
    name: String,
    cc: u32,
}

#[derive(Deserialize)]
struct Manifest {
    functions: Vec<Entry>,
}

#[test]
fn hand_counted_complexity() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/cc");
    let manifest: Manifest = serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert!(manifest.functions.len() >= 30);

    let inv = scan_tree(&dir, &ScanConfig::default()).unwrap();
    assert!(inv.skipped.is_empty(), "{:?}", inv.skipped);
    let measured: BTreeMap<(&str, &str), u32> = inv
        .callables
        .iter()
        .map(|c| ((c.file.as_str(), c.qualified_name.as_str()), c.cc))
        .collect();
    assert_eq!(measured.len(), manifest.functions.len());

    let mut wrong = Vec::new();
    for e in &manifest.functions {
        match measured.get(&(e.file.as_str(), e.name.as_str())) {
            Some(&cc) if cc == e.cc => {}
            other => wrong.push(format!("{}::{} expected {} got {:?}", e.file, e.name, e.cc, other)),
        }
    }
    assert!(wrong.is_empty(), "{wrong:#?}");
}
