def f(items):
    return {x for x in items}
