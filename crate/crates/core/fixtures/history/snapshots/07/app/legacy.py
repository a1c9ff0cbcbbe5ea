"""Ledger reconciliation, ported from the old system."""


def reconcile(entries, ledger, strict):
    matched = []
    for entry in entries:
        if entry is None:
            continue
        if entry.amount < 0 and strict:
            raise ValueError(entry)
        elif entry.amount == 0:
            continue
        key = entry.key
        while key in ledger:
            record = ledger[key]
            if record.closed or record.void:
                break
            try:
                record.apply(entry)
            except KeyError:
                record = None
            key = record.next if record else None
        matched.append(key)
    if matched and strict:
        return [m for m in matched if m]
    return matched
