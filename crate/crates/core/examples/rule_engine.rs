//! Structural rules with metavariables, run against an inline snippet.

use slopscope::source::{analyze_sources, ScanConfig, SourceFile};
use slopscope::verbosity::{match_rules, RuleSet};

const SNIPPET: &str = r#"
def pick(items, wanted):
    found = [x for x in items]
    if len(found) == 0:
        return None
    return [y for y in found if y == wanted]
"#;

const CUSTOM: &str = r#"
rules:
  - id: self-comparison
    languages: [python]
    kind: pattern
    pattern: "$A == $A"
    category: logic
    message: comparing a value with itself
  - id: todo-note
    languages: [python]
    kind: regex
    pattern: "TODO"
    category: notes
    message: unfinished work
"#;

fn main() -> anyhow::Result<()> {
    let scan = ScanConfig::default().compile()?;
    let workspace = analyze_sources(
        vec![SourceFile {
            path: "pick.py".into(),
            bytes: SNIPPET.as_bytes().to_vec(),
        }],
        &scan,
    );
    let file = &workspace.parsed[0];

    for rules in [RuleSet::starter(), RuleSet::parse(CUSTOM)?] {
        println!("{} rules:", rules.len());
        for m in match_rules(file, &rules) {
            println!("  {}:{}:{} {}  {}", m.file, m.start.line, m.start.col, m.rule_id, m.text);
        }
    }
    // Repeated metavariables must bind identical text.
    let strict = RuleSet::parse(CUSTOM)?.only("self-comparison")?;
    let other = analyze_sources(
        vec![SourceFile {
            path: "b.py".into(),
            bytes: b"ok = a == b\nbad = a == a\n".to_vec(),
        }],
        &scan,
    );
    let hits = match_rules(&other.parsed[0], &strict);
    println!("self-comparison hits on lines {:?}", hits.iter().map(|m| m.start.line).collect::<Vec<_>>());
    Ok(())
}
