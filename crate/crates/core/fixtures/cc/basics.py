"""Straight-line code, branches and loops."""

import os


def constant():
    return 42


def docstring_only():
    """Nothing happens here."""


def assign_and_return(a, b):
    total = a + b
    scaled = total * 2
    return scaled


def single_if(x):
    if x > 0:
        return 1
    return 0


def if_else(x):
    if x:
        y = 1
    else:
        y = 2
    return y


def if_elif_else(x):
    if x < 0:
        return "neg"
    elif x == 0:
        return "zero"
    else:
        return "pos"


def elif_chain(code):
    if code == 1:
        return "a"
    elif code == 2:
        return "b"
    elif code == 3:
        return "c"
    elif code == 4:
        return "d"
    return "?"


def if_with_and(a, b):
    if a and b:
        return True
    return False


def if_with_and_or(a, b, c):
    if a and b or c:
        return 1
    return 0


def elif_with_or(a, b, c, d):
    if a:
        return 1
    elif b or c or d:
        return 2
    return 3


def bool_outside_condition(a, b):
    flag = a and b
    other = a or b
    return flag, other


def for_loop(items):
    total = 0
    for item in items:
        total += item
    return total


def for_with_else(items):
    for item in items:
        if item is None:
            break
    else:
        return True
    return False


def while_loop(n):
    while n > 0:
        n -= 1
    return n


def while_with_condition(n, limit):
    while n > 0 and n < limit:
        n += 1
    return n


def nested_loops(grid):
    count = 0
    for row in grid:
        for cell in row:
            if cell:
                count += 1
    return count


def loop_with_continue(values):
    out = []
    for v in values:
        if not v:
            continue
        if v < 0 or v > 100:
            break
        out.append(v)
    return out


def with_statement(path):
    with open(path) as handle:
        data = handle.read()
    return data


def assert_is_not_a_branch(x):
    assert x > 0, "positive"
    return os.path.join("a", str(x))


def not_operator(x):
    if not x:
        return None
    return x
