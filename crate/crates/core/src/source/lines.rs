//! Physical-line bookkeeping: which lines carry code, and byte/char offsets.

use tree_sitter::Node;

/// Per-file line table.
///
/// A line is a *code line* when it holds at least one non-whitespace
/// character outside every comment. Docstrings are ordinary string tokens, so
/// their non-blank lines are code lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineMap {
    line_count: u32,
    code: Vec<bool>,
    starts: Vec<usize>,
}

impl LineMap {
    /// Builds the table from source text and the byte ranges of comments.
    pub fn new(text: &str, comments: &[(usize, usize)]) -> Self {
        let mut starts = vec![0usize];
        for (i, b) in text.bytes().enumerate() {
            if b == b'\n' && i + 1 < text.len() {
                starts.push(i + 1);
            }
        }
        let line_count = if text.is_empty() { 0 } else { starts.len() };
        starts.truncate(line_count.max(1));

        let mut in_comment = vec![false; text.len()];
        for &(s, e) in comments {
            for flag in &mut in_comment[s.min(text.len())..e.min(text.len())] {
                *flag = true;
            }
        }

        let bytes = text.as_bytes();
        let mut code = vec![false; line_count];
        for (line, &start) in starts.iter().enumerate().take(line_count) {
            let end = starts.get(line + 1).copied().unwrap_or(text.len());
            code[line] = (start..end)
                .any(|i| !bytes[i].is_ascii_whitespace() && !in_comment[i]);
        }

        Self {
            line_count: line_count as u32,
            code,
            starts,
        }
    }

    /// A table in which every one of `line_count` lines is code.
    pub fn all_code(line_count: u32) -> Self {
        Self {
            line_count,
            code: vec![true; line_count as usize],
            starts: vec![0],
        }
    }

    /// Table from an explicit set of 1-based code lines.
    pub fn from_code_lines(line_count: u32, lines: impl IntoIterator<Item = u32>) -> Self {
        let mut code = vec![false; line_count as usize];
        for l in lines {
            if (1..=line_count).contains(&l) {
                code[l as usize - 1] = true;
            }
        }
        Self {
            line_count,
            code,
            starts: vec![0],
        }
    }

    pub fn line_count(&self) -> u32 {
        self.line_count
    }

    /// Number of code lines in the whole file.
    pub fn loc(&self) -> u32 {
        self.code.iter().filter(|c| **c).count() as u32
    }

    /// Whether 1-based `line` is a code line.
    pub fn is_code(&self, line: u32) -> bool {
        line >= 1 && self.code.get(line as usize - 1).copied().unwrap_or(false)
    }

    /// Code lines within the inclusive 1-based range.
    pub fn code_lines_in(&self, start: u32, end: u32) -> u32 {
        (start.max(1)..=end.min(self.line_count))
            .filter(|l| self.is_code(*l))
            .count() as u32
    }

    /// 1-based code line numbers.
    pub fn code_lines(&self) -> impl Iterator<Item = u32> + '_ {
        self.code
            .iter()
            .enumerate()
            .filter(|(_, c)| **c)
            .map(|(i, _)| i as u32 + 1)
    }

    /// 1-based (line, column) of a byte offset, column counted in chars.
    pub fn position(&self, text: &str, byte: usize) -> (u32, u32) {
        let line = match self.starts.binary_search(&byte) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let start = self.starts[line];
        let col = text[start..byte.min(text.len())].chars().count() as u32 + 1;
        (line as u32 + 1, col)
    }
}

/// Byte ranges of every node the predicate accepts, descending the whole tree.
pub(crate) fn collect_ranges(root: Node<'_>, accept: impl Fn(&Node<'_>) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut cursor = root.walk();
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if accept(&node) {
            out.push((node.start_byte(), node.end_byte()));
            continue;
        }
        for child in node.children(&mut cursor) {
            stack.push(child);
        }
    }
    out
}
