def f(path):
    try:
        open(path).close()
    except:
        pass
