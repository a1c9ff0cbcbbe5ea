#!/usr/bin/env python3
"""Reference measurements for the fixture manifests.

Computes per-function cyclomatic complexity with the `ast` module, code
lines with `tokenize`, and type-2 clone lines by brute-force window
comparison. It shares no code with the Rust implementation.

usage:
    oracle.py cc FILE...                 print {qualified_name: cc} as JSON
    oracle.py measure DIR [FLAGGED.json] print metrics of a snapshot
"""

import ast
import io
import json
import keyword
import math
import os
import sys
import tokenize

CUTOFF = 10
EXPONENT = 0.5
WINDOW = 6


class Counter:
    def __init__(self):
        self.points = 0

    def visit(self, node, in_cond):
        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
            return
        if isinstance(node, (ast.If, ast.While)):
            self.points += 1
            self.cond(node.test)
            for s in node.body + node.orelse:
                self.visit(s, False)
            return
        if isinstance(node, ast.IfExp):
            self.points += 1
            self.cond(node.test)
            self.visit(node.body, in_cond)
            self.visit(node.orelse, in_cond)
            return
        if isinstance(node, (ast.For, ast.AsyncFor, ast.comprehension, ast.ExceptHandler)):
            self.points += 1
        if isinstance(node, ast.comprehension):
            self.visit(node.target, in_cond)
            self.visit(node.iter, in_cond)
            for f in node.ifs:
                self.points += 1
                self.cond(f)
            return
        if isinstance(node, ast.Match):
            self.points += len(node.cases) - 1
            self.visit(node.subject, in_cond)
            for case in node.cases:
                if case.guard is not None:
                    self.points += 1
                    self.cond(case.guard)
                for s in case.body:
                    self.visit(s, False)
            return
        if isinstance(node, ast.BoolOp) and in_cond:
            self.points += len(node.values) - 1
        for child in ast.iter_child_nodes(node):
            self.visit(child, in_cond)

    def cond(self, node):
        self.visit(node, True)


def cyclomatic(fn):
    c = Counter()
    for stmt in fn.body:
        c.visit(stmt, False)
    return 1 + c.points


def functions(tree):
    out = []

    def walk(node, scope):
        for child in ast.iter_child_nodes(node):
            if isinstance(child, (ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef)):
                name = scope + [child.name]
                if not isinstance(child, ast.ClassDef):
                    out.append((".".join(name), child))
                walk(child, name)
            else:
                walk(child, scope)

    walk(tree, [])
    return out


def code_lines(text):
    """1-based numbers of lines holding a non-whitespace byte outside comments."""
    lines = text.splitlines()
    masked = [list(l) for l in lines]
    for tok in tokenize.generate_tokens(io.StringIO(text).readline):
        if tok.type == tokenize.COMMENT:
            row, col = tok.start
            _, end = tok.end
            for i in range(col, end):
                masked[row - 1][i] = " "
    return {i + 1 for i, chars in enumerate(masked) if "".join(chars).strip()}


def normalized_lines(text):
    by_line = {}
    skip = {tokenize.COMMENT, tokenize.NL, tokenize.NEWLINE, tokenize.INDENT, tokenize.DEDENT, tokenize.ENDMARKER}
    for tok in tokenize.generate_tokens(io.StringIO(text).readline):
        if tok.type in skip:
            continue
        if tok.type == tokenize.NAME:
            if tok.string in ("True", "False", "None"):
                t = "$lit"
            elif keyword.iskeyword(tok.string):
                t = tok.string
            else:
                t = "$id"
        elif tok.type in (tokenize.NUMBER, tokenize.STRING):
            t = "$lit"
        else:
            t = tok.string
        by_line.setdefault(tok.start[0], []).append(t)
    return [(line, " ".join(toks)) for line, toks in sorted(by_line.items())]


def clone_lines(files):
    """{path: set(lines)} of code lines covered by a cloned window."""
    windows = []
    for path, norm in files.items():
        for i in range(len(norm) - WINDOW + 1):
            key = tuple(t for _, t in norm[i : i + WINDOW])
            windows.append((path, i, key, norm[i][0], norm[i + WINDOW - 1][0]))
    marked = set()
    for a in range(len(windows)):
        for b in range(a + 1, len(windows)):
            pa, ia, ka, _, _ = windows[a]
            pb, ib, kb, _, _ = windows[b]
            if ka != kb:
                continue
            if pa == pb and abs(ia - ib) < WINDOW:
                continue
            marked.add(a)
            marked.add(b)
    out = {}
    for idx in marked:
        path, _, _, start, end = windows[idx]
        out.setdefault(path, set()).update(range(start, end + 1))
    return out


def sources(root):
    found = {}
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = sorted(d for d in dirnames if not d.startswith("."))
        for name in sorted(filenames):
            if name.endswith(".py") and not name.startswith("."):
                full = os.path.join(dirpath, name)
                rel = os.path.relpath(full, root).replace(os.sep, "/")
                with open(full, encoding="utf-8") as f:
                    found[rel] = f.read()
    return found


def measure(root, flagged):
    files = sources(root)
    code = {p: code_lines(t) for p, t in files.items()}
    funcs = []
    for path, text in files.items():
        for name, node in functions(ast.parse(text)):
            sloc = len({l for l in code[path] if node.lineno <= l <= node.end_lineno})
            funcs.append({"file": path, "name": name, "cc": cyclomatic(node), "sloc": sloc})
    masses = [(f["cc"], f["cc"] * math.sqrt(f["sloc"])) for f in funcs]
    total = math.fsum(m for _, m in masses)
    high = math.fsum(m for cc, m in masses if cc > CUTOFF)
    clones = clone_lines({p: normalized_lines(t) for p, t in files.items()})
    loc = sum(len(c) for c in code.values())
    union = 0
    n_flagged = 0
    n_clone = 0
    for path in files:
        f = set(flagged.get(path, [])) & code[path]
        c = clones.get(path, set()) & code[path]
        n_flagged += len(f)
        n_clone += len(c)
        union += len(f | c)
    return {
        "loc": loc,
        "functions": funcs,
        "erosion": high / total if total > 0 else 0.0,
        "high_cc_count": sum(1 for cc, _ in masses if cc > CUTOFF),
        "max_cc": max((cc for cc, _ in masses), default=0),
        "flagged_lines": n_flagged,
        "clone_lines": n_clone,
        "union_lines": union,
        "verbosity": union / loc if loc else 0.0,
    }


def main(argv):
    if len(argv) >= 2 and argv[0] == "cc":
        out = {}
        for path in argv[1:]:
            with open(path, encoding="utf-8") as f:
                for name, node in functions(ast.parse(f.read())):
                    out[name] = cyclomatic(node)
        print(json.dumps(out, indent=2))
    elif len(argv) in (2, 3) and argv[0] == "measure":
        flagged = {}
        if len(argv) == 3:
            with open(argv[2], encoding="utf-8") as f:
                flagged = json.load(f)
        print(json.dumps(measure(argv[1], flagged), indent=2, sort_keys=True))
    else:
        print(__doc__, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
