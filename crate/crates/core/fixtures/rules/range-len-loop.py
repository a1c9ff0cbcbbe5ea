def f(items):
    for i in range(len(items)):
        print(items[i])
