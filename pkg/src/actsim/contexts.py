"""Sliding-window context extraction over padded traces.

Every event of every trace yields exactly one (center, context) record.
A trace of length m is padded with floor((n-1)/2) PAD symbols on the left
and ceil((n-1)/2) on the right, then an n-sized window slides across it;
the context of the center is the concatenation of the left and right
subwindows, kept in order (sequence kind) or sorted by activity id
(multiset kind).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .errors import EmptyLogError, ParameterError
from .log import PAD, PAD_LABEL, Alphabet, EventLog


class ContextKind(str, Enum):
    MULTISET = "mset"
    SEQUENCE = "seq"


def _coerce_kind(kind: "ContextKind | str") -> ContextKind:
    try:
        return ContextKind(kind)
    except ValueError:
        raise ParameterError(f"unknown context kind {kind!r} (expected mset or seq)") from None


@dataclass(frozen=True)
class ContextKey:
    """Canonical context: kind plus its symbol ids.

    Multiset symbols are sorted ascending by activity id; sequence symbols
    keep trace order (left subwindow first).
    """

    kind: ContextKind
    symbols: tuple[int, ...]

    def render(self, alphabet: Alphabet) -> str:
        return render_context(self.symbols, self.kind, alphabet)


def render_context(symbols: tuple[int, ...], kind: "ContextKind | str", alphabet: Alphabet) -> str:
    """Human-readable context label: ``{x,y}`` for multisets (labels sorted),
    ``<x,y>`` for sequences, with PAD shown as ``__PAD__``."""
    kind = _coerce_kind(kind)
    labels = [PAD_LABEL if s == PAD else alphabet.label_of(s) for s in symbols]
    if kind is ContextKind.MULTISET:
        return "{" + ",".join(sorted(labels)) + "}"
    return "<" + ",".join(labels) + ">"


@dataclass(frozen=True)
class OccurrenceTable:
    """Counts from one extraction pass.

    ``contexts`` holds the canonical symbol tuples in interning order
    (first appearance during the trace-order scan), so matrix columns
    built from this table have a reproducible layout. ``pair_counts``
    maps (activity id, context index) to #(a, c); ``context_totals`` is
    indexed by context index; ``activity_totals`` has a key for every
    activity that occurs in the log and never one for PAD.
    """

    window_size: int
    kind: ContextKind
    contexts: tuple[tuple[int, ...], ...]
    pair_counts: Mapping[tuple[int, int], int]
    context_totals: tuple[int, ...]
    activity_totals: Mapping[int, int]
    total_events: int

    def activities(self) -> list[int]:
        """Occurring activity ids, ascending."""
        return sorted(self.activity_totals)

    def context_keys(self) -> list[ContextKey]:
        return [ContextKey(self.kind, symbols) for symbols in self.contexts]

    def context_index_map(self) -> dict[tuple[int, ...], int]:
        return {symbols: index for index, symbols in enumerate(self.contexts)}


def extract_occurrences(
    log: EventLog, window_size: int, kind: "ContextKind | str"
) -> OccurrenceTable:
    """Run the window scan and return the full count table.

    The scan visits traces in log order; identical traces are processed
    once and their counts scaled by multiplicity, which leaves both the
    totals and the context interning order unchanged (a repeated trace
    can never introduce a context that its first occurrence did not).
    """
    kind = _coerce_kind(kind)
    if log.is_empty:
        raise EmptyLogError("empty log: nothing to extract")
    if window_size < 2:
        raise ParameterError(f"window size must be at least 2, got {window_size}")

    n = window_size
    left = (n - 1) // 2
    lpad = (PAD,) * left
    rpad = (PAD,) * (n - 1 - left)
    multiset = kind is ContextKind.MULTISET

    intern: dict[tuple[int, ...], int] = {}
    contexts: list[tuple[int, ...]] = []
    context_totals: list[int] = []
    pair_counts: dict[tuple[int, int], int] = defaultdict(int)
    activity_totals: dict[int, int] = defaultdict(int)

    for trace, multiplicity in Counter(log.traces).items():
        padded = lpad + trace + rpad
        for i in range(len(trace)):
            j = i + left
            symbols = padded[i:j] + padded[j + 1 : i + n]
            if multiset:
                symbols = tuple(sorted(symbols))
            index = intern.get(symbols)
            if index is None:
                index = len(contexts)
                intern[symbols] = index
                contexts.append(symbols)
                context_totals.append(0)
            context_totals[index] += multiplicity
            pair_counts[(trace[i], index)] += multiplicity
            activity_totals[trace[i]] += multiplicity

    return OccurrenceTable(
        window_size=n,
        kind=kind,
        contexts=tuple(contexts),
        pair_counts=dict(pair_counts),
        context_totals=tuple(context_totals),
        activity_totals=dict(activity_totals),
        total_events=log.n_events,
    )
