def f(value):
    return value if value else None
