"""Event streams: timestamped categorical symbols over a fixed alphabet.

The on-disk formats are deliberately tiny so fixtures stay diffable:

* CSV with header ``timestamp,type``, one event per line, LF endings.
  Headerless files are accepted on read.
* JSON lines, one ``{"timestamp": ..., "type": ...}`` object per line.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np

from .errors import StreamFormatError, ValidationError

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_CSV_HEADER = "timestamp,type"


class Alphabet:
    """Ordered set of event type names.

    The ordering is fixed at construction and determines column order in
    every table built downstream, so two alphabets with the same symbols
    in different orders are distinct objects.
    """

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols):
        symbols = tuple(symbols)
        if not symbols:
            raise ValidationError("alphabet must contain at least one event type")
        for name in symbols:
            if not isinstance(name, str) or not _NAME_RE.match(name):
                raise ValidationError(f"invalid event type name: {name!r}")
        if len(set(symbols)) != len(symbols):
            raise ValidationError("duplicate event type in alphabet")
        self.symbols = symbols
        self._index = {name: i for i, name in enumerate(symbols)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValidationError(f"unknown event type {name!r}") from None

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return f"Alphabet({list(self.symbols)!r})"


@dataclass(frozen=True, slots=True)
class Event:
    """One stream element: a typed occurrence at a logical tick."""

    type: str
    timestamp: int
    index: int


@dataclass(frozen=True)
class EventStream:
    """Validated sequence of events over one alphabet."""

    alphabet: Alphabet
    events: tuple[Event, ...]

    def __post_init__(self):
        prev_ts = None
        for pos, ev in enumerate(self.events):
            if ev.type not in self.alphabet:
                raise ValidationError(f"event type {ev.type!r} not in alphabet")
            if ev.index != pos:
                raise ValidationError(f"event index {ev.index} at position {pos} is not consecutive")
            if ev.timestamp < 0:
                raise ValidationError(f"negative timestamp at index {pos}")
            if prev_ts is not None and ev.timestamp < prev_ts:
                raise ValidationError(f"decreasing timestamp at index {pos}")
            prev_ts = ev.timestamp

    @classmethod
    def from_types(cls, alphabet: Alphabet, types, timestamps=None) -> EventStream:
        """Build a stream from type names; timestamps default to 0,1,2,..."""
        types = list(types)
        if timestamps is None:
            timestamps = range(len(types))
        events = tuple(Event(t, int(ts), i) for i, (t, ts) in enumerate(zip(types, timestamps)))
        return cls(alphabet, events)

    def symbol_indices(self) -> np.ndarray:
        """Events as alphabet column indices (int32), in stream order."""
        idx = self.alphabet._index
        return np.fromiter((idx[e.type] for e in self.events), dtype=np.int32, count=len(self.events))

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)


def _parse_csv_line(line: str, lineno: int, explicit: Alphabet | None):
    parts = line.split(",")
    if len(parts) != 2:
        raise StreamFormatError(f"malformed line {lineno}: expected 'timestamp,type', got {line!r}", lineno)
    raw_ts, name = parts[0].strip(), parts[1].strip()
    try:
        ts = int(raw_ts)
    except ValueError:
        raise StreamFormatError(f"malformed timestamp {raw_ts!r} at line {lineno}", lineno) from None
    if ts < 0:
        raise StreamFormatError(f"negative timestamp at line {lineno}", lineno)
    if explicit is not None:
        if name not in explicit:
            raise StreamFormatError(f"unknown type {name} at line {lineno}", lineno)
    elif not _NAME_RE.match(name):
        raise StreamFormatError(f"invalid event type {name!r} at line {lineno}", lineno)
    return ts, name


def _parse_jsonl_line(line: str, lineno: int, explicit: Alphabet | None):
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise StreamFormatError(f"malformed JSON at line {lineno}: {exc.msg}", lineno) from None
    if not isinstance(obj, dict) or "timestamp" not in obj or "type" not in obj:
        raise StreamFormatError(f"malformed line {lineno}: need 'timestamp' and 'type' fields", lineno)
    ts, name = obj["timestamp"], obj["type"]
    if not isinstance(ts, int) or isinstance(ts, bool):
        raise StreamFormatError(f"malformed timestamp {ts!r} at line {lineno}", lineno)
    if ts < 0:
        raise StreamFormatError(f"negative timestamp at line {lineno}", lineno)
    if not isinstance(name, str):
        raise StreamFormatError(f"malformed type {name!r} at line {lineno}", lineno)
    if explicit is not None:
        if name not in explicit:
            raise StreamFormatError(f"unknown type {name} at line {lineno}", lineno)
    elif not _NAME_RE.match(name):
        raise StreamFormatError(f"invalid event type {name!r} at line {lineno}", lineno)
    return ts, name


def read_stream(path, alphabet: Alphabet | str = "infer") -> EventStream:
    """Read a stream file (CSV or JSON lines, sniffed from the first line).

    With ``alphabet="infer"`` the alphabet becomes the lexicographically
    sorted set of types encountered; otherwise every type must belong to
    the given alphabet. Malformed input raises StreamFormatError naming
    the offending line.
    """
    explicit = alphabet if isinstance(alphabet, Alphabet) else None
    if explicit is None and alphabet != "infer":
        raise ValidationError(f"alphabet must be an Alphabet or 'infer', got {alphabet!r}")

    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()

    records: list[tuple[int, str]] = []
    jsonl = bool(lines) and lines[0].lstrip().startswith("{")
    parse = _parse_jsonl_line if jsonl else _parse_csv_line
    prev_ts = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r")
        if not jsonl and lineno == 1 and line == _CSV_HEADER:
            continue
        if not line.strip():
            raise StreamFormatError(f"empty line {lineno}", lineno)
        ts, name = parse(line, lineno, explicit)
        if prev_ts is not None and ts < prev_ts:
            raise StreamFormatError(f"decreasing timestamp at line {lineno}", lineno)
        prev_ts = ts
        records.append((ts, name))

    if explicit is None:
        seen = sorted({name for _, name in records})
        if not seen:
            raise ValidationError("cannot infer an alphabet from an empty stream")
        explicit = Alphabet(seen)
    events = tuple(Event(name, ts, i) for i, (ts, name) in enumerate(records))
    return EventStream(explicit, events)


def write_stream(stream: EventStream, path) -> None:
    """Write a stream; CSV unless the path ends in .jsonl/.ndjson.

    read_stream(write_stream(s)) reproduces s exactly, and identical
    streams produce byte-identical files.
    """
    path = str(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if path.endswith((".jsonl", ".ndjson")):
            for ev in stream:
                fh.write(json.dumps({"timestamp": ev.timestamp, "type": ev.type}, separators=(",", ":")))
                fh.write("\n")
        else:
            fh.write(_CSV_HEADER + "\n")
            for ev in stream:
                fh.write(f"{ev.timestamp},{ev.type}\n")
