"""Exceptions, comprehensions, ternaries, match, nesting and classes."""


def try_except(path):
    try:
        return open(path).read()
    except OSError:
        return ""


def try_many_handlers(value):
    try:
        return int(value)
    except ValueError:
        return -1
    except TypeError:
        return -2
    except Exception:
        return -3
    finally:
        print("done")


def try_else_finally(f):
    try:
        result = f()
    except KeyError:
        result = None
    else:
        result = result * 2
    finally:
        f = None
    return result


def ternary(x):
    return "big" if x > 10 else "small"


def ternary_with_and(x, y):
    return x if x and y else y


def nested_ternary(x):
    return "neg" if x < 0 else "zero" if x == 0 else "pos"


def bool_in_ternary_branch(a, b, c):
    return (a or b) if c else (b and c)


def list_comprehension(xs):
    return [x * 2 for x in xs]


def filtered_comprehension(xs):
    return [x for x in xs if x > 0]


def comprehension_with_and_filter(xs):
    return [x for x in xs if x > 0 and x < 10]


def nested_comprehension(rows):
    return [cell for row in rows for cell in row if cell]


def dict_and_set_comprehensions(pairs):
    keys = {k for k, _ in pairs}
    mapping = {k: v for k, v in pairs if v is not None}
    return keys, mapping


def generator_argument(xs):
    return sum(x for x in xs)


def lambda_inside(xs):
    key = lambda item: item[0] if item else 0
    return sorted(xs, key=key)


def match_statement(command):
    match command:
        case "start":
            return 1
        case "stop":
            return 2
        case _:
            return 0


def match_with_guard(point):
    match point:
        case (0, 0):
            return "origin"
        case (x, 0) if x > 0 and x < 5:
            return "near x"
        case _:
            return "elsewhere"


def outer(xs):
    def inner(y):
        if y:
            return y
        return 0

    total = 0
    for x in xs:
        total += inner(x)
    return total


class Account:
    def __init__(self, balance):
        self.balance = balance

    def withdraw(self, amount):
        if amount <= 0:
            raise ValueError("amount")
        if amount > self.balance:
            return False
        self.balance -= amount
        return True

    @staticmethod
    def describe(value):
        return "rich" if value > 1000 else "ok"


async def fetch_all(client, urls):
    results = []
    for url in urls:
        try:
            results.append(await client.get(url))
        except TimeoutError:
            results.append(None)
    return results


def while_condition_with_call(queue):
    while queue and (queue[0] or len(queue) > 3):
        queue.pop()
    return queue


def dense(data, threshold, strict):
    """Many decision points in one callable."""
    result = []
    for item in data:
        if item is None:
            continue
        elif item < 0 and strict:
            raise ValueError(item)
        while item > threshold:
            item -= threshold
        try:
            value = 100 // item
        except ZeroDivisionError:
            value = 0
        result.append(value if value else -1)
        if value > 50 or value < -50:
            result.extend(x for x in range(value) if x % 7 == 0)
    return result
