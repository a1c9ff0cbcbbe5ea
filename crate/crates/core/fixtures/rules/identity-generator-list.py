def f(items):
    return list(x for x in items)
