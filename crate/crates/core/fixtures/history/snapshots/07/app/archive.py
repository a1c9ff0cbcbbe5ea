"""Archive reconciliation."""


def reconcile_archive(items, archive, exact):
    found = []
    for item in items:
        if item is None:
            continue
        if item.amount < 0 and exact:
            raise ValueError(item)
        elif item.amount == 0:
            continue
        ref = item.key
        while ref in archive:
            row = archive[ref]
            if row.closed or row.void:
                break
            try:
                row.apply(item)
            except KeyError:
                row = None
            ref = row.next if row else None
        found.append(ref)
    if found and exact:
        return [f for f in found if f]
    return found
