//! Type-2 clones: the same code with renamed identifiers and literals.

use slopscope::source::{analyze_sources, ScanConfig, SourceFile};
use slopscope::verbosity::{detect_clones, normalize_file, DEFAULT_MIN_WINDOW};

const ORIGINAL: &str = r#"
def total_price(order, rate):
    subtotal = 0
    for line in order.lines:
        if line.quantity > 0:
            subtotal += line.price * line.quantity
    tax = subtotal * rate
    if tax < 0:
        tax = 0
    return subtotal + tax
"#;

const RENAMED: &str = r#"
def invoice_sum(bill, vat):
    acc = 1
    for row in bill.rows:
        if row.count > 5:
            acc += row.cost * row.count
    extra = acc * vat
    if extra < 2:
        extra = 3
    return acc + extra
"#;

fn main() -> anyhow::Result<()> {
    let scan = ScanConfig::default().compile()?;
    let files = vec![
        SourceFile {
            path: "orders.py".into(),
            bytes: ORIGINAL.as_bytes().to_vec(),
        },
        SourceFile {
            path: "billing.py".into(),
            bytes: RENAMED.as_bytes().to_vec(),
        },
    ];
    let workspace = analyze_sources(files, &scan);

    for normalize in [false, true] {
        let normalized: Vec<_> = workspace.parsed.iter().map(|p| normalize_file(p, normalize)).collect();
        let clones = detect_clones(&normalized, DEFAULT_MIN_WINDOW);
        println!("normalize identifiers and literals: {normalize}");
        if clones.is_empty() {
            println!("  no clones");
        }
        for c in clones {
            println!("  class {} {} lines {}-{} [{}]", c.clone_class_id, c.file, c.span.start, c.span.end, c.fingerprint);
        }
    }
    let shown = normalize_file(&workspace.parsed[0], true);
    println!("\nnormalized orders.py:");
    for l in shown.lines.iter().take(4) {
        println!("  {:>2}: {}", l.line, l.text.replace('\u{1f}', " "));
    }
    Ok(())
}
