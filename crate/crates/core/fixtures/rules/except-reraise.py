def f(path):
    try:
        return open(path).read()
    except OSError:
        raise
