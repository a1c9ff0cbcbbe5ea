"""Tokenizer for a tiny expression language."""


def tokenize(text):
    tokens = []
    current = ""
    for ch in text:
        if ch.isspace():
            if current:
                tokens.append(current)
                current = ""
        elif ch in "+-*/()":
            if current:
                tokens.append(current)
            tokens.append(ch)
            current = ""
        else:
            current += ch
    if current:
        tokens.append(current)
    return tokens


def parse_numbers(tokens):
    if len(tokens) == 0:
        return []
    numbers = []
    for token in tokens:
        try:
            numbers.append(float(token))
        except ValueError:
            pass
    return numbers


def words(tokens):
    return [t for t in tokens]
