#!/usr/bin/env python3
"""Recomputes the panel aggregates of repos.json with the statistics module."""

import json
import statistics
from datetime import datetime, timezone

TIERS = [("Hobby", 0, 100), ("Niche", 100, 1000), ("Established", 1000, 10000), ("Major", 10000, float("inf"))]


def slope(ys):
    if len(ys) < 2:
        return 0.0
    return statistics.linear_regression(list(range(len(ys))), ys).slope


def repo_stats(repo, cutoff):
    cps = repo["checkpoints"]
    out = {}
    for k, name in ((1, "erosion"), (2, "verbosity")):
        ys = [c[k] for c in cps]
        first, last = ys[0], ys[-1]
        if len(ys) == 1:
            growth = 0.0
        elif first > 0:
            growth = (last - first) / first * 100
        else:
            growth = None
        pre = [c[k] for c in cps if datetime.fromisoformat(c[0].replace("Z", "+00:00")) < cutoff]
        post = [c[k] for c in cps if datetime.fromisoformat(c[0].replace("Z", "+00:00")) >= cutoff]
        eligible = len(pre) >= 3 and len(post) >= 3
        out[name] = {
            "head": last,
            "rising": last > first,
            "slope": slope(ys),
            "growth": growth,
            "shift": statistics.median(post) - statistics.median(pre) if eligible else None,
        }
        out["eligible"] = eligible
    return out


def group(stats, reference):
    g = {"n_repos": len(stats), "n_era_eligible": sum(s["eligible"] for s in stats)}
    for name in ("erosion", "verbosity"):
        col = [s[name] for s in stats]
        heads = [c["head"] for c in col]
        growth = [c["growth"] for c in col if c["growth"] is not None]
        shifts = [c["shift"] for c in col if c["shift"] is not None]
        slopes = [c["slope"] for c in col]
        g[name] = {
            "head_mean": statistics.fmean(heads),
            "head_std": statistics.stdev(heads) if len(heads) > 1 else 0.0,
            "rising_fraction": sum(c["rising"] for c in col) / len(col),
            "slope_mean": statistics.fmean(slopes),
            "slope_median": statistics.median(slopes),
            "median_growth_pct": statistics.median(growth) if growth else None,
            "median_era_shift": statistics.median(shifts) if shifts else None,
            "exceeds_reference": sum(h > reference[name] for h in heads) / len(heads),
        }
    return g


def main():
    with open("repos.json") as f:
        panel = json.load(f)
    cutoff = datetime.fromisoformat(panel["cutoff_date"]).replace(tzinfo=timezone.utc)
    stats = {r["repo_id"]: repo_stats(r, cutoff) for r in panel["repos"]}
    expected = {"overall": group(list(stats.values()), panel["reference"]), "tiers": {}}
    for name, lo, hi in TIERS:
        members = [stats[r["repo_id"]] for r in panel["repos"] if lo <= r["stars"] < hi]
        if members:
            expected["tiers"][name] = group(members, panel["reference"])
    with open("expected.json", "w") as f:
        json.dump(expected, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
