def f(items):
    if len(items) > 0:
        print(items)
