def f(x):
    return x.missing  # type: ignore
