def load(path):
    return read_file(path)
