def f(rows):
    if not rows:
        return []
    return sorted(rows)
