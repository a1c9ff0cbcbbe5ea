def now():
    return current_time()
