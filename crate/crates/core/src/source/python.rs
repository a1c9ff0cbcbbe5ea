//! Python grammar adapter.

use tree_sitter::{Language, Node, Tree};

use super::adapter::{CallableNode, GrammarAdapter, TokenClass};

#[derive(Debug, Clone, Copy, Default)]
pub struct PythonAdapter;

impl GrammarAdapter for PythonAdapter {
    fn language(&self) -> &'static str {
        "python"
    }

    fn extensions(&self) -> &'static [&'static str] {
        &["py"]
    }

    fn grammar(&self) -> Language {
        tree_sitter_python::LANGUAGE.into()
    }

    fn is_comment(&self, node: &Node<'_>) -> bool {
        node.kind() == "comment"
    }

    fn callables<'tree>(&self, tree: &'tree Tree, text: &str) -> Vec<CallableNode<'tree>> {
        let mut out = Vec::new();
        collect_callables(tree.root_node(), text, &mut Vec::new(), &mut out);
        out
    }

    fn cyclomatic_complexity(&self, callable: Node<'_>) -> u32 {
        let mut points = 0;
        if let Some(body) = callable.child_by_field_name("body") {
            count_decisions(body, false, &mut points);
        }
        // Default values and annotations in the signature run in the
        // enclosing scope, so only the body is walked.
        1 + points
    }

    fn token_class(&self, node: &Node<'_>) -> TokenClass {
        match node.kind() {
            "comment" => TokenClass::Comment,
            "identifier" => TokenClass::Identifier,
            "string" | "concatenated_string" | "integer" | "float" | "true" | "false" | "none" => {
                TokenClass::Literal
            }
            _ => TokenClass::Other,
        }
    }
}

fn collect_callables<'tree>(
    node: Node<'tree>,
    text: &str,
    scope: &mut Vec<String>,
    out: &mut Vec<CallableNode<'tree>>,
) {
    let mut cursor = node.walk();
    for child in node.named_children(&mut cursor) {
        match child.kind() {
            "function_definition" | "class_definition" => {
                let name = child
                    .child_by_field_name("name")
                    .map(|n| text[n.byte_range()].to_string())
                    .unwrap_or_default();
                scope.push(name);
                if child.kind() == "function_definition" {
                    out.push(CallableNode {
                        qualified_name: scope.join("."),
                        node: child,
                    });
                }
                collect_callables(child, text, scope, out);
                scope.pop();
            }
            _ => collect_callables(child, text, scope, out),
        }
    }
}

fn count_decisions(node: Node<'_>, in_condition: bool, points: &mut u32) {
    match node.kind() {
        "function_definition" => return,
        "if_statement" | "elif_clause" | "while_statement" => {
            *points += 1;
            let mut cursor = node.walk();
            if cursor.goto_first_child() {
                loop {
                    let is_cond = cursor.field_name() == Some("condition");
                    count_decisions(cursor.node(), is_cond, points);
                    if !cursor.goto_next_sibling() {
                        break;
                    }
                }
            }
            return;
        }
        "conditional_expression" => {
            *points += 1;
            // `body if condition else alternative`
            let mut cursor = node.walk();
            for (i, child) in node.named_children(&mut cursor).enumerate() {
                count_decisions(child, in_condition || i == 1, points);
            }
            return;
        }
        "for_statement" | "for_in_clause" | "except_clause" | "except_group_clause" => *points += 1,
        "if_clause" => {
            // Comprehension filter or case guard.
            *points += 1;
            let mut cursor = node.walk();
            for child in node.named_children(&mut cursor) {
                count_decisions(child, true, points);
            }
            return;
        }
        "match_statement" => {
            let arms = node
                .child_by_field_name("body")
                .map(|body| {
                    let mut cursor = body.walk();
                    body.named_children(&mut cursor)
                        .filter(|c| c.kind() == "case_clause")
                        .count() as u32
                })
                .unwrap_or(0);
            *points += arms.saturating_sub(1);
        }
        "boolean_operator" if in_condition => *points += 1,
        _ => {}
    }
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        count_decisions(child, in_condition, points);
    }
}
