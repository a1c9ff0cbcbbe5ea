def f(d):
    for k in d.keys():
        print(k)
