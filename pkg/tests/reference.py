"""Naive reference implementations used as oracles.

Everything here favors obviousness over speed: explicit window
enumeration over the padded traces, quadratic matrix assembly, and
plain-Python cosine. Nothing is shared with the package's optimized
paths beyond the PAD id convention (0).
"""

from __future__ import annotations

import math

PAD = 0


def enumerate_windows(traces, n):
    """Every (center, context_symbols) record, in scan order, one per event."""
    left = (n - 1) // 2
    right = n - 1 - left
    records = []
    for trace in traces:
        padded = (PAD,) * left + tuple(trace) + (PAD,) * right
        for i in range(len(trace)):
            j = i + left
            window = padded[i : i + n]
            assert len(window) == n
            context = padded[i:j] + padded[j + 1 : i + n]
            records.append((padded[j], context))
    return records


def naive_counts(traces, n, kind):
    """(pair_counts, context_totals, activity_totals, context_order)."""
    pair = {}
    ctx = {}
    act = {}
    order = []
    for center, context in enumerate_windows(traces, n):
        key = tuple(sorted(context)) if kind == "mset" else context
        if key not in ctx:
            order.append(key)
            ctx[key] = 0
        ctx[key] += 1
        pair[(center, key)] = pair.get((center, key), 0) + 1
        act[center] = act.get(center, 0) + 1
    return pair, ctx, act, order


def naive_ac(traces, n, kind):
    """(activities, context_order, dense rows) with rows sorted by id."""
    pair, _, act, order = naive_counts(traces, n, kind)
    activities = sorted(act)
    rows = [[pair.get((a, c), 0) for c in order] for a in activities]
    return activities, order, rows


def naive_aa(traces, n, kind):
    """(activities, dense rows): AA(a,b) = sum over shared contexts of both counts."""
    pair, _, act, order = naive_counts(traces, n, kind)
    activities = sorted(act)
    rows = []
    for a in activities:
        row = []
        for b in activities:
            total = 0
            for c in order:
                ca = pair.get((a, c), 0)
                cb = pair.get((b, c), 0)
                if ca > 0 and cb > 0:
                    total += ca + cb
            row.append(total)
        rows.append(row)
    return activities, rows


def naive_cosine_distance(u, v):
    dot = sum(x * y for x, y in zip(u, v))
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(y * y for y in v))
    if nu == 0.0 and nv == 0.0:
        return 0.0
    if nu == 0.0 or nv == 0.0:
        return 1.0
    s = dot / (nu * nv)
    s = max(-1.0, min(1.0, s))
    return 1.0 - s


def naive_similarity_matrix(rows):
    """All-pairs cosine similarities (1 - distance) of dense row vectors."""
    size = len(rows)
    out = [[0.0] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            out[i][j] = 1.0 - naive_cosine_distance(rows[i], rows[j])
    return out
