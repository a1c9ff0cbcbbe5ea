def f(a, b):
    if a:
        if b:
            print(a, b)
