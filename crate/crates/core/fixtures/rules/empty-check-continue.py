def f(rows):
    for row in rows:
        if not row:
            continue
        print(row)
