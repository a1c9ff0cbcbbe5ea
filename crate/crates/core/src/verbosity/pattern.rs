//! Code-like patterns with metavariables, matched against syntax trees.
//!
//! * `$NAME` binds one named syntax node. Every occurrence of the same name
//!   must bind the same source text.
//! * `$NAME?` is optional: the pattern also matches when the element is
//!   absent. A separator comma next to a skipped optional is skipped with it.
//! * `$$` stands for a literal `$`.
//!
//! The pattern is parsed with the target grammar after each metavariable is
//! replaced by an identifier placeholder, so it must be valid code.
//! A pattern made of several statements matches consecutive sibling
//! statements.

use std::collections::BTreeMap;

use tree_sitter::{Node, Tree};

use crate::source::GrammarAdapter;

#[derive(Debug, Clone)]
struct Occurrence {
    name: String,
    optional: bool,
}

/// A pattern compiled for one language.
pub struct Pattern {
    code: String,
    tree: Tree,
    placeholder: char,
    occurrences: Vec<Occurrence>,
    names: Vec<String>,
}

impl std::fmt::Debug for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Pattern").field("code", &self.code).finish()
    }
}

/// Bound text and byte ranges of one metavariable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Capture {
    pub text: String,
    pub ranges: Vec<(usize, usize)>,
}

/// A successful match: the byte range and its captures keyed by `$NAME`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternMatch {
    pub start_byte: usize,
    pub end_byte: usize,
    pub captures: BTreeMap<String, Capture>,
}

type Env = Vec<Option<Capture>>;

impl Pattern {
    pub fn compile(pattern: &str, adapter: &dyn GrammarAdapter) -> Result<Self, String> {
        let placeholder = adapter.metavariable_char();
        let mut code = String::with_capacity(pattern.len());
        let mut occurrences = Vec::new();
        let mut names: Vec<String> = Vec::new();
        let mut chars = pattern.chars().peekable();
        while let Some(c) = chars.next() {
            if c != '$' {
                if c == placeholder {
                    return Err(format!("pattern may not contain `{placeholder}`"));
                }
                code.push(c);
                continue;
            }
            match chars.peek() {
                Some('$') => {
                    chars.next();
                    code.push('$');
                }
                Some(n) if n.is_ascii_alphabetic() || *n == '_' => {
                    let mut name = String::new();
                    while let Some(&n) = chars.peek() {
                        if n.is_ascii_alphanumeric() || n == '_' {
                            name.push(n);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    let optional = chars.peek() == Some(&'?');
                    if optional {
                        chars.next();
                    }
                    code.push(placeholder);
                    code.push_str(&occurrences.len().to_string());
                    if !names.contains(&name) {
                        names.push(name.clone());
                    }
                    occurrences.push(Occurrence { name, optional });
                }
                _ => code.push('$'),
            }
        }
        let tree = adapter
            .parse(&code)
            .ok_or_else(|| "pattern could not be parsed".to_string())?;
        let root = tree.root_node();
        if root.has_error() {
            return Err("pattern is not valid code".into());
        }
        let compiled = Self {
            code,
            tree,
            placeholder,
            occurrences,
            names,
        };
        if compiled.roots().is_empty() {
            return Err("pattern is empty".into());
        }
        Ok(compiled)
    }

    /// Metavariable names in order of first appearance.
    pub fn metavariables(&self) -> &[String] {
        &self.names
    }

    fn roots(&self) -> Vec<Node<'_>> {
        let top: Vec<Node<'_>> = named_children(self.tree.root_node(), &|_| false);
        if top.len() == 1 {
            vec![unwrap(top[0], &self.code)]
        } else {
            top
        }
    }

    fn metavar(&self, node: Node<'_>) -> Option<usize> {
        let text = self.code[node.byte_range()].trim();
        let rest = text.strip_prefix(self.placeholder)?;
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        rest.parse().ok()
    }

    fn is_optional(&self, node: Node<'_>) -> bool {
        self.metavar(node)
            .is_some_and(|i| self.occurrences[i].optional)
    }

    /// Every match in the tree, in document order of match start.
    pub fn find_all(
        &self,
        tree: &Tree,
        text: &str,
        is_comment: &dyn Fn(&Node<'_>) -> bool,
    ) -> Vec<PatternMatch> {
        let roots = self.roots();
        let mut out = Vec::new();
        let mut stack = vec![tree.root_node()];
        let cx = Cx {
            pat: self,
            text,
            is_comment,
        };
        while let Some(node) = stack.pop() {
            if roots.len() == 1 {
                let mut env = vec![None; self.occurrences.len()];
                if cx.match_node(roots[0], node, &mut env) {
                    out.push(self.finish(node.start_byte(), node.end_byte(), env));
                }
            } else {
                let kids = named_children(node, is_comment);
                for start in 0..kids.len().saturating_sub(roots.len() - 1) {
                    let mut env = vec![None; self.occurrences.len()];
                    let window = &kids[start..start + roots.len()];
                    if roots
                        .iter()
                        .zip(window)
                        .all(|(p, t)| cx.match_node(*p, *t, &mut env))
                    {
                        out.push(self.finish(
                            window[0].start_byte(),
                            window[window.len() - 1].end_byte(),
                            env,
                        ));
                    }
                }
            }
            let mut cursor = node.walk();
            let children: Vec<_> = node.children(&mut cursor).collect();
            stack.extend(children.into_iter().rev());
        }
        out.sort_by_key(|m| (m.start_byte, m.end_byte));
        out
    }

    fn finish(&self, start_byte: usize, end_byte: usize, env: Env) -> PatternMatch {
        let mut captures: BTreeMap<String, Capture> = BTreeMap::new();
        for (occ, cap) in self.occurrences.iter().zip(env) {
            let Some(cap) = cap else { continue };
            let entry = captures.entry(format!("${}", occ.name)).or_insert(Capture {
                text: cap.text.clone(),
                ranges: Vec::new(),
            });
            entry.ranges.extend(cap.ranges);
        }
        for cap in captures.values_mut() {
            cap.ranges.sort_unstable();
            cap.ranges.dedup();
        }
        PatternMatch {
            start_byte,
            end_byte,
            captures,
        }
    }
}

struct Cx<'a> {
    pat: &'a Pattern,
    text: &'a str,
    is_comment: &'a dyn Fn(&Node<'_>) -> bool,
}

impl Cx<'_> {
    fn bind(&self, occ: usize, target: Node<'_>, env: &mut Env) -> bool {
        if !target.is_named() {
            return false;
        }
        let text = &self.text[target.byte_range()];
        let name = &self.pat.occurrences[occ].name;
        // Repeated names must agree on text.
        for (i, other) in self.pat.occurrences.iter().enumerate() {
            if i != occ && &other.name == name {
                if let Some(bound) = &env[i] {
                    if bound.text != text {
                        return false;
                    }
                }
            }
        }
        env[occ] = Some(Capture {
            text: text.to_string(),
            ranges: vec![(target.start_byte(), target.end_byte())],
        });
        true
    }

    fn match_node(&self, pat: Node<'_>, target: Node<'_>, env: &mut Env) -> bool {
        if let Some(occ) = self.pat.metavar(pat) {
            return self.bind(occ, target, env);
        }
        if pat.kind_id() != target.kind_id() {
            return false;
        }
        if pat.child_count() == 0 || target.child_count() == 0 {
            return self.pat.code[pat.byte_range()] == self.text[target.byte_range()];
        }
        let pc = children(pat, &|_| false);
        let tc = children(target, self.is_comment);
        self.match_seq(&pc, &tc, env)
    }

    fn match_seq(&self, pc: &[Node<'_>], tc: &[Node<'_>], env: &mut Env) -> bool {
        let Some((&p0, prest)) = pc.split_first() else {
            return tc.is_empty();
        };

        // `, $X?` with the optional absent.
        if p0.kind() == "," && prest.first().is_some_and(|p| self.pat.is_optional(*p)) {
            let saved = env.clone();
            if self.match_seq(&prest[1..], tc, env) {
                return true;
            }
            *env = saved;
        }
        if self.pat.is_optional(p0) {
            let saved = env.clone();
            let skip = if prest.first().is_some_and(|p| p.kind() == ",") {
                &prest[1..]
            } else {
                prest
            };
            if self.match_seq(skip, tc, env) {
                return true;
            }
            *env = saved;
        }

        let Some((&t0, trest)) = tc.split_first() else {
            return false;
        };
        let saved = env.clone();
        if self.match_node(p0, t0, env) && self.match_seq(prest, trest, env) {
            return true;
        }
        *env = saved;
        false
    }
}

fn children<'t>(node: Node<'t>, skip: &dyn Fn(&Node<'_>) -> bool) -> Vec<Node<'t>> {
    let mut cursor = node.walk();
    node.children(&mut cursor).filter(|c| !skip(c)).collect()
}

fn named_children<'t>(node: Node<'t>, skip: &dyn Fn(&Node<'_>) -> bool) -> Vec<Node<'t>> {
    let mut cursor = node.walk();
    node.named_children(&mut cursor)
        .filter(|c| !skip(c) && !c.is_extra())
        .collect()
}

/// Strips wrapper nodes (statement around expression) that add no text.
fn unwrap<'t>(mut node: Node<'t>, code: &str) -> Node<'t> {
    loop {
        let kids = named_children(node, &|_| false);
        if kids.len() == 1 && code[kids[0].byte_range()].trim() == code[node.byte_range()].trim() {
            node = kids[0];
        } else {
            return node;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::python::PythonAdapter;

    fn find(pattern: &str, src: &str) -> Vec<String> {
        let adapter = PythonAdapter;
        let pat = Pattern::compile(pattern, &adapter).unwrap();
        let tree = adapter.parse(src).unwrap();
        pat.find_all(&tree, src, &|n| adapter.is_comment(n))
            .into_iter()
            .map(|m| src[m.start_byte..m.end_byte].to_string())
            .collect()
    }

    #[test]
    fn repeated_metavariable_must_agree() {
        assert_eq!(find("$X == $X", "a == a\n"), ["a == a"]);
        assert!(find("$X == $X", "a == b\n").is_empty());
        assert_eq!(find("$X == $Y", "a == b\n"), ["a == b"]);
    }

    #[test]
    fn identity_comprehension() {
        let src = "ys = [x for x in xs]\nzs = [x + 1 for x in xs]\n";
        assert_eq!(find("[$X for $X in $XS]", src), ["[x for x in xs]"]);
    }

    #[test]
    fn filtered_identity_comprehension_spans_lines() {
        let src = "rules = [\n    r for r in all_rules\n    if lang in r.langs\n]\n";
        let got = find("[$X for $X in $XS if $C]", src);
        assert_eq!(got.len(), 1);
        assert!(got[0].starts_with('['));
    }

    #[test]
    fn dollar_escape() {
        assert_eq!(find("print(\"$$\")", "print(\"$\")\nprint(\"x\")\n"), ["print(\"$\")"]);
    }

    #[test]
    fn optional_metavariable() {
        let src = "f(a)\nf(a, b)\nf(a, b, c)\n";
        assert_eq!(find("f($A, $B?)", src), ["f(a)", "f(a, b)"]);
        assert_eq!(find("return $X?", "def g():\n    return\n"), ["return"]);
    }

    #[test]
    fn statement_patterns_match_blocks() {
        let src = "for m in ms:\n    if not m:\n        continue\n    use(m)\n";
        assert_eq!(find("if not $X:\n    continue", src).len(), 1);
        assert!(find("if not $X:\n    return", src).is_empty());
    }

    #[test]
    fn sequence_pattern() {
        let src = "def f():\n    result = compute()\n    return result\n";
        assert_eq!(
            find("$V = $E\nreturn $V", src),
            ["result = compute()\n    return result"]
        );
        assert!(find("$V = $E\nreturn $V", "def f():\n    a = 1\n    return b\n").is_empty());
    }

    #[test]
    fn comments_in_target_are_ignored() {
        let src = "x = [  # keep\n    v for v in vs\n]\n";
        assert_eq!(find("[$X for $X in $XS]", src).len(), 1);
    }

    #[test]
    fn captures_collect_every_range() {
        let adapter = PythonAdapter;
        let pat = Pattern::compile("$X == $X", &adapter).unwrap();
        let src = "a == a\n";
        let tree = adapter.parse(src).unwrap();
        let m = &pat.find_all(&tree, src, &|n| adapter.is_comment(n))[0];
        let cap = &m.captures["$X"];
        assert_eq!(cap.text, "a");
        assert_eq!(cap.ranges, [(0, 1), (5, 6)]);
    }

    #[test]
    fn invalid_patterns_are_rejected() {
        let adapter = PythonAdapter;
        assert!(Pattern::compile("def (", &adapter).is_err());
        assert!(Pattern::compile("", &adapter).is_err());
        assert!(Pattern::compile("# only a comment", &adapter).is_err());
    }
}
