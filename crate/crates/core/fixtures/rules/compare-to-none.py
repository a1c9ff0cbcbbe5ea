def f(value):
    return value == None
