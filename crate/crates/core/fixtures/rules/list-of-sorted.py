def f(items):
    return list(sorted(items))
