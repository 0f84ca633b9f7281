"""Event-log model: interned activity alphabet, CSV/XES parsing, log statistics."""

from __future__ import annotations

import csv
import io
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

from .errors import EmptyLogError, FormatError, ParameterError

PAD_LABEL = "__PAD__"
PAD = 0

TextSource = Union[str, IO[str], Path]


class Alphabet:
    """Bijection between activity labels and dense integer ids.

    Id 0 is reserved for the padding symbol ``__PAD__``; real activities
    receive ids 1..n in registration order. Instances are immutable after
    construction; :meth:`extended` derives a larger alphabet that keeps
    every existing id.
    """

    __slots__ = ("_id_to_label", "_label_to_id")

    def __init__(self, labels: Iterable[str] = ()) -> None:
        id_to_label = [PAD_LABEL]
        label_to_id = {PAD_LABEL: PAD}
        for label in labels:
            if label == PAD_LABEL:
                raise ParameterError(f"label {PAD_LABEL!r} is reserved for padding")
            if label in label_to_id:
                raise ParameterError(f"duplicate activity label {label!r}")
            label_to_id[label] = len(id_to_label)
            id_to_label.append(label)
        self._id_to_label: tuple[str, ...] = tuple(id_to_label)
        self._label_to_id: dict[str, int] = label_to_id

    def __len__(self) -> int:
        """Number of real activities (the PAD symbol is not counted)."""
        return len(self._id_to_label) - 1

    def __contains__(self, label: str) -> bool:
        return label in self._label_to_id

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Alphabet):
            return NotImplemented
        return self._id_to_label == other._id_to_label

    def __repr__(self) -> str:
        return f"Alphabet({len(self)} activities)"

    def id_of(self, label: str) -> int:
        try:
            return self._label_to_id[label]
        except KeyError:
            raise ParameterError(f"unknown activity label {label!r}") from None

    def label_of(self, activity_id: int) -> str:
        if not 0 <= activity_id <= len(self):
            raise ParameterError(f"unknown activity id {activity_id}")
        return self._id_to_label[activity_id]

    def activity_ids(self) -> range:
        """Ids of all real activities, ascending (PAD excluded)."""
        return range(1, len(self._id_to_label))

    def labels(self) -> tuple[str, ...]:
        """Labels of all real activities in id order."""
        return self._id_to_label[1:]

    def extended(self, new_labels: Iterable[str]) -> "Alphabet":
        """A new alphabet with ``new_labels`` appended after the existing ids."""
        return Alphabet(self._id_to_label[1:] + tuple(new_labels))


@dataclass(frozen=True)
class EventLog:
    """An ordered list of traces over an interned alphabet.

    The log is a multiset of traces; the list order is kept so that
    downstream scans (context interning, ground-truth derivation) are
    deterministic. Traces are tuples of activity ids and never contain
    the PAD id.
    """

    traces: tuple[tuple[int, ...], ...]
    alphabet: Alphabet

    def __post_init__(self) -> None:
        limit = len(self.alphabet)
        for index, trace in enumerate(self.traces):
            if not trace:
                raise ParameterError(f"trace {index} is empty")
            if min(trace) < 1 or max(trace) > limit:
                raise ParameterError(
                    f"trace {index} contains an id outside the alphabet (PAD is not allowed)"
                )

    @property
    def is_empty(self) -> bool:
        return not self.traces

    @property
    def n_events(self) -> int:
        return sum(len(trace) for trace in self.traces)

    def activity_counts(self) -> Counter:
        """Occurrence count per activity id, over all events."""
        counts: Counter = Counter()
        for trace in self.traces:
            counts.update(trace)
        return counts

    def label_traces(self) -> list[tuple[str, ...]]:
        label_of = self.alphabet.label_of
        return [tuple(label_of(a) for a in trace) for trace in self.traces]


def log_from_label_traces(label_traces: Iterable[Sequence[str]]) -> EventLog:
    """Build a log from label sequences, interning labels by first appearance."""
    order: dict[str, int] = {}
    traces: list[tuple[int, ...]] = []
    for trace in label_traces:
        ids = []
        for label in trace:
            aid = order.get(label)
            if aid is None:
                if label == PAD_LABEL:
                    raise FormatError(f"activity label {PAD_LABEL!r} is reserved")
                aid = len(order) + 1
                order[label] = aid
            ids.append(aid)
        traces.append(tuple(ids))
    return EventLog(tuple(traces), Alphabet(order))


def _read_text(source: TextSource) -> str:
    if isinstance(source, Path):
        try:
            return source.read_text(encoding="utf-8")
        except OSError as exc:
            raise FormatError(f"cannot read {source}: {exc}") from exc
    if isinstance(source, str):
        return source
    return source.read()


def _parse_timestamp(raw: str, row: int) -> datetime:
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        return datetime.fromisoformat(text)
    except ValueError:
        raise FormatError(f"row {row}: unparseable timestamp {raw!r}") from None


def parse_csv(
    source: TextSource,
    case_column: str = "case",
    activity_column: str = "activity",
    timestamp_column: str | None = None,
) -> EventLog:
    """Parse a CSV event stream into an :class:`EventLog`.

    Parameters
    ----------
    source
        CSV text, an open text stream, or a path.
    case_column, activity_column
        Header names of the case-id and activity-label columns.
    timestamp_column
        Optional header name of an ISO-8601 timestamp column. When given,
        events within a case are ordered by timestamp (stable sort, ties
        keep file order); otherwise file order is kept.

    Traces are emitted in order of first appearance of their case id.
    Row numbers in error messages are 1-based file lines (the header is
    line 1).
    """
    reader = csv.reader(io.StringIO(_read_text(source)))
    header = next(reader, None)
    if header is None:
        raise EmptyLogError("empty log: the file has no rows")

    def column(name: str) -> int:
        try:
            return header.index(name)
        except ValueError:
            raise FormatError(f"missing column {name!r} in CSV header") from None

    case_idx = column(case_column)
    act_idx = column(activity_column)
    ts_idx = column(timestamp_column) if timestamp_column is not None else None
    needed = max(i for i in (case_idx, act_idx, ts_idx) if i is not None) + 1

    cases: dict[str, list] = {}
    for line, row in enumerate(reader, start=2):
        if not row or all(field == "" for field in row):
            continue
        if len(row) < needed:
            raise FormatError(f"row {line}: expected at least {needed} fields, got {len(row)}")
        case = row[case_idx]
        label = row[act_idx]
        if case == "":
            raise FormatError(f"row {line}: empty case id")
        if label == "":
            raise FormatError(f"row {line}: empty activity label")
        if label == PAD_LABEL:
            raise FormatError(f"row {line}: activity label {PAD_LABEL!r} is reserved")
        entry = (label,) if ts_idx is None else (_parse_timestamp(row[ts_idx], line), label)
        cases.setdefault(case, []).append(entry)

    if not cases:
        raise EmptyLogError("empty log: the file contains no events")

    label_traces: list[list[str]] = []
    for case, entries in cases.items():
        if ts_idx is not None:
            try:
                entries.sort(key=lambda e: e[0])
            except TypeError:
                raise FormatError(
                    f"case {case!r}: cannot order events, timestamps mix "
                    "timezone-aware and naive values"
                ) from None
            label_traces.append([label for _, label in entries])
        else:
            label_traces.append([label for (label,) in entries])
    return log_from_label_traces(label_traces)


def _local_name(tag: str) -> str:
    # XES files often carry a default namespace; match on the local part.
    return tag.rsplit("}", 1)[-1]


def parse_xes(source: TextSource) -> EventLog:
    """Parse an XES document; only ``concept:name`` of each event is read.

    Trace and event order follow the document. Any other attribute is
    ignored. A trace without events, or an event without a
    ``concept:name`` string, is a format error naming the trace index.
    """
    text = _read_text(source)
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise FormatError(f"malformed XES/XML: {exc}") from exc

    label_traces: list[list[str]] = []
    trace_index = -1
    for element in root.iter():
        if _local_name(element.tag) != "trace":
            continue
        trace_index += 1
        labels: list[str] = []
        for child in element:
            if _local_name(child.tag) != "event":
                continue
            name = None
            for attr in child:
                if (
                    _local_name(attr.tag) == "string"
                    and attr.get("key") == "concept:name"
                ):
                    name = attr.get("value")
                    break
            if name is None:
                raise FormatError(
                    f"trace {trace_index}: event {len(labels)} lacks a concept:name string"
                )
            if name == PAD_LABEL:
                raise FormatError(
                    f"trace {trace_index}: activity label {PAD_LABEL!r} is reserved"
                )
            labels.append(name)
        if not labels:
            raise FormatError(f"trace {trace_index} has no events")
        label_traces.append(labels)

    if not label_traces:
        raise EmptyLogError("empty log: the XES document has no traces")
    return log_from_label_traces(label_traces)


def read_log(
    path: str | Path,
    fmt: str = "auto",
    case_column: str = "case",
    activity_column: str = "activity",
    timestamp_column: str | None = None,
) -> EventLog:
    """Read a log file, inferring the format from the suffix when ``auto``."""
    path = Path(path)
    if fmt == "auto":
        fmt = "xes" if path.suffix.lower() == ".xes" else "csv"
    if fmt == "xes":
        return parse_xes(path)
    if fmt == "csv":
        return parse_csv(path, case_column, activity_column, timestamp_column)
    raise ParameterError(f"unknown log format {fmt!r} (expected csv or xes)")


def write_log_csv(log: EventLog, target: IO[str] | str | Path) -> None:
    """Serialize a log to canonical CSV (columns ``case,activity``).

    Case ids are 1-based trace positions; re-parsing the output yields an
    identical log (same traces, same alphabet order).
    """
    own = isinstance(target, (str, Path))
    handle = open(target, "w", encoding="utf-8", newline="") if own else target
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["case", "activity"])
        label_of = log.alphabet.label_of
        for index, trace in enumerate(log.traces, start=1):
            for aid in trace:
                writer.writerow([index, label_of(aid)])
    finally:
        if own:
            handle.close()


@dataclass(frozen=True)
class RankFrequencyEntry:
    rank: int
    activity_id: int
    label: str
    count: int
    relative_frequency: float


@dataclass(frozen=True)
class LogStats:
    """Per-log summary: alphabet size, trace/variant counts, rank-frequency table."""

    activity_count: int
    trace_count: int
    variant_count: int
    variant_ratio: float
    avg_trace_length: float
    total_events: int
    rank_entries: tuple[RankFrequencyEntry, ...]

    @property
    def rank_frequency(self) -> list[tuple[int, float]]:
        return [(e.rank, e.relative_frequency) for e in self.rank_entries]


def compute_stats(log: EventLog) -> LogStats:
    """Compute :class:`LogStats`; frequency ties are ordered by ActivityId."""
    if log.is_empty:
        raise EmptyLogError("empty log: no traces to summarize")
    counts = log.activity_counts()
    total = sum(counts.values())
    entries = []
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    for rank, (aid, count) in enumerate(ordered, start=1):
        entries.append(
            RankFrequencyEntry(rank, aid, log.alphabet.label_of(aid), count, count / total)
        )
    return LogStats(
        activity_count=len(counts),
        trace_count=len(log.traces),
        variant_count=len(set(log.traces)),
        variant_ratio=len(set(log.traces)) / len(log.traces),
        avg_trace_length=total / len(log.traces),
        total_events=total,
        rank_entries=tuple(entries),
    )


def write_stats_csv(stats: LogStats, target: IO[str] | str | Path) -> None:
    """Write the rank-frequency table (``rank,activity,frequency,relative_frequency``)."""
    own = isinstance(target, (str, Path))
    handle = open(target, "w", encoding="utf-8", newline="") if own else target
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["rank", "activity", "frequency", "relative_frequency"])
        for entry in stats.rank_entries:
            writer.writerow(
                [entry.rank, entry.label, entry.count, format(entry.relative_frequency, ".17g")]
            )
    finally:
        if own:
            handle.close()
