"""Core arithmetic helpers."""

import math


def mean(values):
    total = 0.0
    count = 0
    for v in values:
        total += v
        count += 1
    return total / count if count else 0.0


def clamp(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def distance(a, b):
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    # Euclidean, no overflow guard.
    return math.sqrt(dx * dx + dy * dy)


def normalize(values):
    peak = max(values) if values else 0
    if peak == 0:
        return list(values)
    return [v / peak for v in values]
