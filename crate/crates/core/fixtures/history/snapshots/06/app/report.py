"""Plain-text report rendering."""

from app.core import mean


def render(rows, title):
    lines = [title, "=" * len(title)]
    for name, values in rows:
        avg = mean(values)
        marker = "*" if avg > 10 else " "
        lines.append("%s %s: %.2f" % (marker, name, avg))
    return "\n".join(lines)


def summarize(rows):
    best = None
    best_avg = float("-inf")
    for name, values in rows:
        avg = mean(values)
        if best is None or avg > best_avg:
            best = name
            best_avg = avg
    return best, best_avg
