"""A module no starter rule should flag."""

import json


def load(path, default):
    try:
        with open(path) as handle:
            return json.load(handle)
    except FileNotFoundError:
        return default


def doubled_positives(values):
    return [v * 2 for v in values if v > 0]


def index_of(items, wanted):
    for i, item in enumerate(items):
        if item == wanted:
            return i
    return -1
