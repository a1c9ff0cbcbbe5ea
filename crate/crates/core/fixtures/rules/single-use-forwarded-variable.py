def f(a):
    cleaned = a.strip()
    return parse(cleaned)
