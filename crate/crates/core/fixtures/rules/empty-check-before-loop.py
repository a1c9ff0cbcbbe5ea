def f(rows):
    if rows:
        for row in rows:
            print(row)
