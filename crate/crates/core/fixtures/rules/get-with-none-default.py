def f(d):
    return d.get("key", None)
