def f(items):
    return map(lambda s: str(s), items)
