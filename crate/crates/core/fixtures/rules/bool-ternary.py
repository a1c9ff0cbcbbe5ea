def f(x):
    return True if x > 3 else False
