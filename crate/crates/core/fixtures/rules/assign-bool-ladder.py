def f(x):
    if x > 3:
        big = True
    else:
        big = False
    print(big)
