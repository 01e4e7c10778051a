"""Quadratic reference implementations, kept free of the primitives.

These exist to check the pipeline, so they deliberately share no
machinery with it: plain nested loops over points and a direct
counting definition of ranks.
"""

from __future__ import annotations

from typing import Any

from .monoids import Monoid


def brute_force(data, queries, monoid: Monoid) -> dict[int, Any]:
    """Per-query aggregation over strictly dominated data points.

    A data point counts for a query when every one of its coordinates is
    strictly smaller than the query's. Data points are folded in
    ascending id order, which fixes the result for monoids that are only
    approximately associative.
    """
    rows = [(p.coords, p.weight) for p in sorted(data, key=lambda p: p.id)]
    combine = monoid.combine
    unit = monoid.unit
    out: dict[int, Any] = {}
    for q in queries:
        qc = q.coords
        acc = unit
        for dc, weight in rows:
            dominated = True
            for a, b in zip(dc, qc):
                if a >= b:
                    dominated = False
                    break
            if dominated:
                acc = combine(acc, weight)
        out[q.id] = acc
    return out


def brute_force_ranks(values) -> list[int]:
    """Rank of each value: one plus the count of distinct smaller values."""
    order = {v: i + 1 for i, v in enumerate(sorted(set(values)))}
    return [order[v] for v in values]
