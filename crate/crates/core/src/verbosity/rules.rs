//! Quality rules: loading, validation, and matching.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use regex::Regex;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::pattern::Pattern;
use crate::error::{Error, Result};
use crate::source::{AdapterRegistry, GrammarAdapter, ParsedFile};

/// The rule set shipped with the crate.
pub const STARTER_RULES: &str = include_str!("../../rules/starter.yaml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Pattern,
    Regex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct QualityRule {
    pub id: String,
    pub languages: Vec<String>,
    pub kind: RuleKind,
    pub pattern: String,
    pub category: String,
    pub message: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    id: Option<String>,
    #[serde(default)]
    languages: Option<Vec<String>>,
    kind: Option<String>,
    pattern: Option<String>,
    #[serde(default)]
    category: String,
    #[serde(default)]
    message: String,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawDocument {
    Wrapped { rules: Vec<RawRule> },
    List(Vec<RawRule>),
    Single(RawRule),
}

enum Matcher {
    Pattern(Vec<(String, Pattern)>),
    Regex(Regex),
}

struct CompiledRule {
    rule: QualityRule,
    matcher: Matcher,
}

/// A validated, compiled rule set.
#[derive(Clone, Default)]
pub struct RuleSet {
    rules: Arc<Vec<CompiledRule>>,
}

impl std::fmt::Debug for RuleSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.rules.iter().map(|r| &r.rule.id)).finish()
    }
}

impl RuleSet {
    pub fn starter() -> Self {
        Self::parse(STARTER_RULES).expect("starter rules are valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parses YAML (or JSON) text holding one or more documents. Each
    /// document is a rule, a list of rules, or a mapping with a `rules` list.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, &AdapterRegistry::builtin())
    }

    pub fn parse_with(text: &str, registry: &AdapterRegistry) -> Result<Self> {
        let mut raw = Vec::new();
        for doc in serde_yaml::Deserializer::from_str(text) {
            let value = serde_yaml::Value::deserialize(doc)
                .map_err(|e| Error::InvalidRules(vec![format!("malformed rule file: {e}")]))?;
            if value.is_null() {
                continue;
            }
            let doc: RawDocument = serde_yaml::from_value(value)
                .map_err(|e| Error::InvalidRules(vec![format!("malformed rule document: {e}")]))?;
            match doc {
                RawDocument::Wrapped { rules } | RawDocument::List(rules) => raw.extend(rules),
                RawDocument::Single(rule) => raw.push(rule),
            }
        }

        let mut problems = Vec::new();
        let mut seen = BTreeSet::new();
        let mut compiled = Vec::new();
        for (i, r) in raw.into_iter().enumerate() {
            let label = r.id.clone().unwrap_or_else(|| format!("#{}", i + 1));
            match compile_rule(r, registry) {
                Ok(rule) => {
                    if !seen.insert(rule.rule.id.clone()) {
                        problems.push(format!("duplicate rule id `{}`", rule.rule.id));
                    } else {
                        compiled.push(rule);
                    }
                }
                Err(reason) => problems.push(format!("rule `{label}`: {reason}")),
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidRules(problems));
        }
        Ok(Self {
            rules: Arc::new(compiled),
        })
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> impl Iterator<Item = &QualityRule> {
        self.rules.iter().map(|r| &r.rule)
    }

    pub fn get(&self, id: &str) -> Option<&QualityRule> {
        self.rules().find(|r| r.id == id)
    }

    /// A set holding only the named rule.
    pub fn only(&self, id: &str) -> Result<Self> {
        let pos = self
            .rules
            .iter()
            .position(|r| r.rule.id == id)
            .ok_or_else(|| Error::UnknownRule(id.to_string()))?;
        // Patterns own parse trees, so the subset is rebuilt from source.
        let r = &self.rules[pos].rule;
        let rebuilt = compile_rule(
            RawRule {
                id: Some(r.id.clone()),
                languages: Some(r.languages.clone()),
                kind: Some(match r.kind {
                    RuleKind::Pattern => "pattern".into(),
                    RuleKind::Regex => "regex".into(),
                }),
                pattern: Some(r.pattern.clone()),
                category: r.category.clone(),
                message: r.message.clone(),
            },
            &AdapterRegistry::builtin(),
        )
        .map_err(|e| Error::InvalidRules(vec![e]))?;
        Ok(Self {
            rules: Arc::new(vec![rebuilt]),
        })
    }
}

fn compile_rule(raw: RawRule, registry: &AdapterRegistry) -> std::result::Result<CompiledRule, String> {
    let id = raw.id.filter(|s| !s.trim().is_empty()).ok_or("missing or empty id")?;
    let pattern = raw
        .pattern
        .filter(|s| !s.trim().is_empty())
        .ok_or("missing or empty pattern")?;
    let kind = match raw.kind.as_deref() {
        Some("pattern") => RuleKind::Pattern,
        Some("regex") => RuleKind::Regex,
        Some(other) => return Err(format!("unknown kind `{other}`")),
        None => return Err("missing kind".into()),
    };
    let languages: Vec<String> = match raw.languages {
        Some(langs) if !langs.is_empty() => langs,
        _ => registry.languages().iter().map(|s| s.to_string()).collect(),
    };
    let mut adapters: Vec<&Arc<dyn GrammarAdapter>> = Vec::new();
    for lang in &languages {
        adapters.push(
            registry
                .by_language(lang)
                .ok_or_else(|| format!("unknown language `{lang}`"))?,
        );
    }
    let matcher = match kind {
        RuleKind::Regex => Matcher::Regex(
            Regex::new(&pattern).map_err(|e| format!("invalid regex: {e}"))?,
        ),
        RuleKind::Pattern => {
            let mut per_lang = Vec::new();
            for adapter in adapters {
                let p = Pattern::compile(&pattern, adapter.as_ref())
                    .map_err(|e| format!("invalid pattern for {}: {e}", adapter.language()))?;
                per_lang.push((adapter.language().to_string(), p));
            }
            Matcher::Pattern(per_lang)
        }
    };
    Ok(CompiledRule {
        rule: QualityRule {
            id,
            languages,
            kind,
            pattern,
            category: raw.category,
            message: raw.message,
        },
        matcher,
    })
}

/// 1-based line and char column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
pub struct Position {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct RuleMatch {
    pub rule_id: String,
    pub file: String,
    pub language: String,
    pub start: Position,
    /// Position immediately after the match.
    pub end: Position,
    pub lines: Vec<u32>,
    #[serde(rename = "match")]
    pub text: String,
}

impl RuleMatch {
    fn sort_key(&self) -> (&str, Position, &str, Position) {
        (&self.file, self.start, &self.rule_id, self.end)
    }
}

/// Sorts matches by file, start line, start column, then rule id.
pub fn sort_matches(matches: &mut [RuleMatch]) {
    matches.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

/// Every match of every applicable rule in one parsed file.
pub fn match_rules(file: &ParsedFile, rules: &RuleSet) -> Vec<RuleMatch> {
    let lang = file.adapter.language();
    let text = &file.text;
    let mut out = Vec::new();
    let mut push = |rule_id: &str, start: usize, end: usize| {
        if end <= start {
            return;
        }
        let (sl, sc) = file.lines.position(text, start);
        let (el, ec) = file.lines.position(text, end);
        let last = text[..end]
            .char_indices()
            .next_back()
            .map(|(i, _)| file.lines.position(text, i).0)
            .unwrap_or(sl);
        out.push(RuleMatch {
            rule_id: rule_id.to_string(),
            file: file.record.path.clone(),
            language: lang.to_string(),
            start: Position { line: sl, col: sc },
            end: Position { line: el, col: ec },
            lines: (sl..=last.max(sl)).collect(),
            text: text[start..end].to_string(),
        });
    };
    let adapter = file.adapter.clone();
    let is_comment = move |n: &tree_sitter::Node<'_>| adapter.is_comment(n);
    for compiled in rules.rules.iter() {
        if !compiled.rule.languages.iter().any(|l| l == lang) {
            continue;
        }
        match &compiled.matcher {
            Matcher::Regex(re) => {
                for m in re.find_iter(text) {
                    push(&compiled.rule.id, m.start(), m.end());
                }
            }
            Matcher::Pattern(per_lang) => {
                let Some((_, pat)) = per_lang.iter().find(|(l, _)| l == lang) else {
                    continue;
                };
                for m in pat.find_all(&file.tree, text, &is_comment) {
                    push(&compiled.rule.id, m.start_byte, m.end_byte);
                }
            }
        }
    }
    sort_matches(&mut out);
    out
}
