def f(grid):
    for row in grid:
        for cell in row:
            if cell:
                print(cell)
