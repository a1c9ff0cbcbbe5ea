def f(flag):
    while flag == False:
        flag = poll()
