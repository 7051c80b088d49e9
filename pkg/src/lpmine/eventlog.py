"""Event logs as finite multisets of activity traces.

Activities are plain strings compared exactly (case-sensitive, no
normalisation).  A trace is a tuple of activity names.  An :class:`EventLog`
maps each distinct trace to its multiplicity and carries the activity
alphabet.
"""

from __future__ import annotations

import csv
import gzip
import io
import xml.etree.ElementTree as ET
from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from types import MappingProxyType
from typing import BinaryIO, Iterable, Iterator, Mapping, Sequence, Union

from .errors import ConfigurationError, LogParseError

Activity = str
Trace = tuple[Activity, ...]

Source = Union[bytes, str, Path, BinaryIO]


class EventLog:
    """Immutable multiset of traces over an activity alphabet.

    ``traces`` may be a mapping ``trace -> multiplicity`` or an iterable of
    traces (duplicates are merged).  ``alphabet`` widens the alphabet beyond
    the activities that occur; it may not narrow it.
    """

    __slots__ = ("_traces", "_alphabet", "_hash")

    def __init__(
        self,
        traces: Mapping[Sequence[Activity], int] | Iterable[Sequence[Activity]] = (),
        alphabet: Iterable[Activity] | None = None,
    ):
        counts: Counter[Trace] = Counter()
        if isinstance(traces, Mapping):
            for trace, mult in traces.items():
                if mult < 0:
                    raise ValueError(f"negative multiplicity {mult} for trace {trace!r}")
                if mult:
                    counts[tuple(trace)] += int(mult)
        else:
            counts.update(tuple(t) for t in traces)
        occurring = {a for trace in counts for a in trace}
        if any(not a for a in occurring):
            raise ValueError("activity names must be non-empty")
        if alphabet is not None:
            alphabet = frozenset(alphabet)
            missing = occurring - alphabet
            if missing:
                raise ValueError(f"alphabet lacks occurring activities {sorted(missing)}")
        else:
            alphabet = frozenset(occurring)
        self._traces = MappingProxyType(dict(sorted(counts.items())))
        self._alphabet = alphabet
        self._hash = None

    @property
    def traces(self) -> Mapping[Trace, int]:
        """Distinct traces mapped to their (positive) multiplicity."""
        return self._traces

    @property
    def alphabet(self) -> frozenset[Activity]:
        return self._alphabet

    def __iter__(self) -> Iterator[tuple[Trace, int]]:
        return iter(self._traces.items())

    def __len__(self) -> int:
        """Number of traces counted with multiplicity."""
        return sum(self._traces.values())

    @property
    def n_variants(self) -> int:
        return len(self._traces)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventLog):
            return NotImplemented
        return self._alphabet == other._alphabet and dict(self._traces) == dict(other._traces)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._alphabet, frozenset(self._traces.items())))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(
            f"<{','.join(t)}>" + (f"^{m}" if m != 1 else "") for t, m in self._traces.items()
        )
        return f"EventLog([{body}])"


def project(log: EventLog, labels: Iterable[Activity]) -> EventLog:
    """Project every trace on ``labels``; identical projections are merged.

    Empty projected traces are kept with their multiplicity.
    """
    keep = frozenset(labels)
    counts: Counter[Trace] = Counter()
    for trace, mult in log:
        counts[tuple(a for a in trace if a in keep)] += mult
    return EventLog(counts, alphabet=keep & log.alphabet)


def activity_count(log: EventLog, activity: Activity) -> int:
    return sum(mult * trace.count(activity) for trace, mult in log)


def total_events(log: EventLog) -> int:
    return sum(mult * len(trace) for trace, mult in log)


# ---------------------------------------------------------------------------
# parsing

def _read_bytes(source: Source) -> bytes:
    if isinstance(source, bytes):
        data = source
    elif isinstance(source, (str, Path)):
        try:
            data = Path(source).read_bytes()
        except OSError as exc:
            raise LogParseError(f"cannot read {source}: {exc}") from exc
    else:
        data = source.read()
        if isinstance(data, str):
            data = data.encode("utf-8")
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    return data


def parse_timestamp(text: str) -> float:
    """Epoch seconds from either a number or an RFC 3339 string.

    Naive datetimes are taken to be UTC.
    """
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass
    iso = text[:-1] + "+00:00" if text[-1:] in "Zz" else text
    dt = datetime.fromisoformat(iso)  # raises ValueError
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def parse_csv(
    source: Source,
    case: str = "case",
    activity: str = "activity",
    timestamp: str | None = None,
) -> EventLog:
    """Read a log from UTF-8 CSV with a header row.

    One trace per distinct case id.  Events are ordered by ``timestamp`` when
    that column is given, otherwise by row order; ties keep row order.  When
    ``timestamp`` is None a column literally named ``timestamp`` is used if the
    header has one.  Pass ``timestamp=""`` to force row order.
    """
    text = _read_bytes(source).decode("utf-8-sig")
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    for col in (case, activity):
        if col not in header:
            raise ConfigurationError(f"CSV has no column {col!r} (header: {header})")
    if timestamp is None:
        timestamp = "timestamp" if "timestamp" in header else ""
    elif timestamp and timestamp not in header:
        raise ConfigurationError(f"CSV has no column {timestamp!r} (header: {header})")

    cases: dict[str, list[tuple[float, Activity]]] = defaultdict(list)
    for row in reader:
        line = reader.line_num
        name = row[activity]
        if not name:
            raise LogParseError(f"row at line {line}: empty activity name")
        key = 0.0
        if timestamp:
            try:
                key = parse_timestamp(row[timestamp] or "")
            except (ValueError, IndexError) as exc:
                raise LogParseError(
                    f"row at line {line}: unparsable timestamp {row[timestamp]!r}"
                ) from exc
        cases[row[case]].append((key, name))
    traces = []
    for events in cases.values():
        events.sort(key=lambda e: e[0])  # stable
        traces.append(tuple(name for _, name in events))
    return EventLog(traces)


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _event_attributes(event: ET.Element) -> dict[str, str]:
    return {
        child.get("key", ""): child.get("value", "")
        for child in event
        if child.get("key") is not None
    }


def _parse_xes_tree(source: Source) -> ET.Element:
    try:
        return ET.fromstring(_read_bytes(source))
    except ET.ParseError as exc:
        line, col = exc.position
        raise LogParseError(f"malformed XES at line {line}, column {col}: {exc}") from exc


def parse_xes(source: Source) -> EventLog:
    """Read a log from an XES document; only ``concept:name`` is used."""
    root = _parse_xes_tree(source)
    traces = []
    for index, trace in enumerate(el for el in root if _local(el.tag) == "trace"):
        names = []
        for event in (el for el in trace if _local(el.tag) == "event"):
            attrs = _event_attributes(event)
            if not attrs.get("concept:name"):
                raise LogParseError(f"trace {index}: event without concept:name")
            names.append(attrs["concept:name"])
        traces.append(tuple(names))
    return EventLog(traces)


@dataclass(frozen=True)
class RawEvent:
    """One XES event with the attributes needed for trace re-grouping."""

    position: int
    activity: Activity
    resource: str | None
    timestamp: float | None


def parse_xes_events(source: Source) -> list[RawEvent]:
    """Flatten an XES document to its events in document order."""
    root = _parse_xes_tree(source)
    out: list[RawEvent] = []
    for index, trace in enumerate(el for el in root if _local(el.tag) == "trace"):
        for event in (el for el in trace if _local(el.tag) == "event"):
            attrs = _event_attributes(event)
            if not attrs.get("concept:name"):
                raise LogParseError(f"trace {index}: event without concept:name")
            ts = attrs.get("time:timestamp")
            try:
                stamp = parse_timestamp(ts) if ts else None
            except ValueError as exc:
                raise LogParseError(f"trace {index}: bad time:timestamp {ts!r}") from exc
            out.append(RawEvent(len(out), attrs["concept:name"], attrs.get("org:resource"), stamp))
    return out


def group_by_resource_day(
    events: Iterable[RawEvent],
    resource: str,
    order: str = "timestamp",
) -> EventLog:
    """Build one trace per UTC calendar day of the events done by ``resource``.

    ``order`` is ``"timestamp"`` (sort each day by time, ties by document
    order) or ``"log"`` (document order).  Events without a timestamp are
    rejected because they cannot be assigned to a day.
    """
    if order not in ("timestamp", "log"):
        raise ConfigurationError(f"unknown day-trace order {order!r}")
    days: dict[str, list[RawEvent]] = defaultdict(list)
    for ev in events:
        if ev.resource != resource:
            continue
        if ev.timestamp is None:
            raise LogParseError(f"event {ev.position} has no timestamp")
        day = datetime.fromtimestamp(ev.timestamp, tz=timezone.utc).date().isoformat()
        days[day].append(ev)
    traces = []
    for day_events in days.values():
        if order == "timestamp":
            day_events = sorted(day_events, key=lambda e: (e.timestamp, e.position))
        traces.append(tuple(e.activity for e in day_events))
    return EventLog(traces)


def read_log(path: str | Path, fmt: str | None = None, **csv_options) -> EventLog:
    """Load a log from ``path``; ``fmt`` defaults from the file extension."""
    path = Path(path)
    if fmt is None:
        suffixes = [s.lower() for s in path.suffixes]
        if ".xes" in suffixes:
            fmt = "xes"
        elif ".csv" in suffixes:
            fmt = "csv"
        else:
            raise ConfigurationError(f"cannot infer log format of {path}; pass fmt")
    if fmt == "xes":
        return parse_xes(path)
    if fmt == "csv":
        return parse_csv(path, **csv_options)
    raise ConfigurationError(f"unknown log format {fmt!r}")
