def f(flag):
    if flag == True:
        print(flag)
