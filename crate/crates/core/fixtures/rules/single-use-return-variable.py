def f(a, b):
    result = a * b + 1
    return result
