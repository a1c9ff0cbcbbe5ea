def f(path):
    try:
        open(path).close()
    except Exception:
        pass
