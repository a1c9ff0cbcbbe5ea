//! Per-language grammar adapters.
//!
//! An adapter owns everything language specific: the tree-sitter grammar,
//! which nodes are callables, which nodes are decision points, and how leaf
//! tokens are classified for clone normalization. Everything downstream
//! (line tables, metrics, rule matching, clone detection) works on the
//! generic tree through these hooks.

use std::collections::BTreeMap;
use std::sync::Arc;

use tree_sitter::{Language, Node, Parser, Tree};

use crate::error::{Error, Result};

/// Class of a token for type-2 clone normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenClass {
    /// Identifier; normalized to a single placeholder.
    Identifier,
    /// Literal; normalized to a single placeholder. The node is atomic even
    /// when the grammar gives it children (string literals).
    Literal,
    /// Comment; dropped.
    Comment,
    /// Keyword, operator or punctuation; kept verbatim.
    Other,
}

/// A named callable located by an adapter.
#[derive(Debug, Clone)]
pub struct CallableNode<'tree> {
    pub qualified_name: String,
    pub node: Node<'tree>,
}

pub trait GrammarAdapter: Send + Sync {
    /// Language id used in configs and rule files, e.g. `"python"`.
    fn language(&self) -> &'static str;

    /// File extensions without the leading dot.
    fn extensions(&self) -> &'static [&'static str];

    fn grammar(&self) -> Language;

    fn parse(&self, text: &str) -> Option<Tree> {
        let mut parser = Parser::new();
        parser.set_language(&self.grammar()).ok()?;
        parser.parse(text, None)
    }

    fn is_comment(&self, node: &Node<'_>) -> bool;

    /// Named callables in document order, nested ones included.
    fn callables<'tree>(&self, tree: &'tree Tree, text: &str) -> Vec<CallableNode<'tree>>;

    /// 1 + decision points of the callable, excluding nested named callables.
    fn cyclomatic_complexity(&self, callable: Node<'_>) -> u32;

    fn token_class(&self, node: &Node<'_>) -> TokenClass;

    /// Character substituted for `$` when a pattern is parsed, chosen so that
    /// `<char>NAME` lexes as an identifier in this grammar.
    fn metavariable_char(&self) -> char {
        'µ'
    }
}

/// The set of enabled adapters, keyed by extension.
#[derive(Clone)]
pub struct AdapterRegistry {
    adapters: Vec<Arc<dyn GrammarAdapter>>,
    by_extension: BTreeMap<String, usize>,
}

impl std::fmt::Debug for AdapterRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AdapterRegistry")
            .field("languages", &self.languages())
            .finish()
    }
}

impl AdapterRegistry {
    pub fn new(adapters: Vec<Arc<dyn GrammarAdapter>>) -> Result<Self> {
        let mut by_extension: BTreeMap<String, usize> = BTreeMap::new();
        for (i, adapter) in adapters.iter().enumerate() {
            for ext in adapter.extensions() {
                let ext = ext.to_ascii_lowercase();
                if let Some(&prev) = by_extension.get(&ext) {
                    return Err(Error::ExtensionConflict {
                        extension: ext,
                        first: adapters[prev].language().to_string(),
                        second: adapter.language().to_string(),
                    });
                }
                by_extension.insert(ext, i);
            }
        }
        Ok(Self {
            adapters,
            by_extension,
        })
    }

    /// All adapters shipped with the crate.
    pub fn builtin() -> Self {
        Self::new(vec![Arc::new(super::python::PythonAdapter)]).expect("builtin adapters are disjoint")
    }

    /// Restricts the registry to the listed language ids.
    pub fn restrict(&self, languages: &[String]) -> Result<Self> {
        for lang in languages {
            if self.by_language(lang).is_none() {
                return Err(Error::Config(format!("unsupported language `{lang}`")));
            }
        }
        let kept = self
            .adapters
            .iter()
            .filter(|a| languages.iter().any(|l| l == a.language()))
            .cloned()
            .collect();
        Self::new(kept)
    }

    pub fn languages(&self) -> Vec<&'static str> {
        self.adapters.iter().map(|a| a.language()).collect()
    }

    pub fn by_language(&self, language: &str) -> Option<&Arc<dyn GrammarAdapter>> {
        self.adapters.iter().find(|a| a.language() == language)
    }

    /// Adapter for a workspace-relative path, by its extension.
    pub fn for_path(&self, path: &str) -> Option<&Arc<dyn GrammarAdapter>> {
        let name = path.rsplit('/').next()?;
        let (_, ext) = name.rsplit_once('.')?;
        let idx = self.by_extension.get(&ext.to_ascii_lowercase())?;
        Some(&self.adapters[*idx])
    }

    pub fn extensions(&self) -> impl Iterator<Item = &str> {
        self.by_extension.keys().map(String::as_str)
    }
}
