def f(x):
    if x > 3:
        return True
    else:
        return False
