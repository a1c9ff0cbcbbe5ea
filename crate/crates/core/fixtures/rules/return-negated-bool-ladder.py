def f(x):
    if x > 3:
        return False
    else:
        return True
