"""Single-pass streaming runtime.

One forward pass over the stream tracks (automaton state, context). An
event that lands in a final state yields a match record; any other event
past the warm-up yields a forecast record carrying the precomputed
interval of the chain state it landed in. The automaton is never reset:
the compiled prefix semantics already encode restarts, so back-to-back
matches fall out naturally. Events are processed in fixed-size chunks so
the working set stays bounded regardless of stream length.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .automata import Dfa
from .errors import HorizonError, ValidationError
from .events import EventStream
from .forecasting import ForecastInterval, WaitingTimeTable, forecast_interval
from .markov import PatternMarkovChain

log = logging.getLogger(__name__)

_CHUNK = 8192

_OUTCOMES = ("hit", "miss", "unresolved")


@dataclass(frozen=True, slots=True)
class MatchRecord:
    """A pattern match ending at the given stream position."""

    index: int
    timestamp: int


@dataclass(frozen=True, slots=True)
class ForecastRecord:
    """A forecast emitted after one event; interval is None when the
    horizon could not reach the confidence threshold for that state."""

    emitted_at: int
    state: int
    interval: ForecastInterval | None
    outcome: str | None = None


def run(
    stream: EventStream,
    dfa: Dfa,
    chain: PatternMarkovChain,
    table: WaitingTimeTable,
    theta: float,
) -> tuple[list[MatchRecord], list[ForecastRecord]]:
    """Process the stream once; returns (matches, forecasts without outcomes).

    The first m events only fill the context: they emit no forecasts,
    though matches reached during warm-up are still reported. A state
    whose waiting-time row cannot reach theta within the horizon logs a
    warning on first visit and emits interval-less records from then on.
    """
    if not 0.0 < theta <= 1.0:
        raise ValidationError("theta must be in (0,1]")
    if stream.alphabet != dfa.alphabet or dfa.alphabet != chain.model.alphabet:
        raise ValidationError("stream, automaton and model must share one alphabet")
    if chain.dfa != dfa:
        raise ValidationError("chain was built for a different automaton")

    order = chain.model.order
    n_symbols = len(dfa.alphabet)
    delta_table = dfa.transition_table()
    is_final = np.zeros(dfa.num_states, dtype=bool)
    is_final[list(dfa.finals)] = True
    product_index = chain.product_index_table()
    powers = n_symbols ** np.arange(order - 1, -1, -1, dtype=np.int64) if order else None

    intervals: dict[int, ForecastInterval | None] = {}

    def interval_for(sid: int) -> ForecastInterval | None:
        if sid not in intervals:
            try:
                intervals[sid] = forecast_interval(table.rows[sid], theta)
            except HorizonError as exc:
                log.warning(
                    "horizon insufficient for state %d: achievable mass %.6g", sid, exc.achievable
                )
                intervals[sid] = None
        return intervals[sid]

    symbols = stream.symbol_indices()
    events = stream.events
    matches: list[MatchRecord] = []
    forecasts: list[ForecastRecord] = []
    dfa_state = dfa.start
    tail = np.zeros(max(order - 1, 0), dtype=np.int32)  # last order-1 symbols seen

    for base in range(0, len(symbols), _CHUNK):
        block = symbols[base : base + _CHUNK]
        states = kernels.trace_table(delta_table, np.ascontiguousarray(block), dfa_state)
        dfa_state = int(states[-1])

        if order:
            ext = np.concatenate([tail, block])
            contexts = np.lib.stride_tricks.sliding_window_view(ext, order).astype(np.int64) @ powers
            if order > 1:
                tail = ext[-(order - 1) :]
        else:
            contexts = None

        final_mask = is_final[states]
        for j in np.flatnonzero(final_mask):
            pos = base + int(j)
            matches.append(MatchRecord(pos, events[pos].timestamp))
        emit = ~final_mask
        if base < order:  # warm-up positions emit nothing
            emit[: max(0, order - base)] = False
        for j in np.flatnonzero(emit):
            pos = base + int(j)
            ctx = int(contexts[j]) if order else 0
            sid = int(product_index[states[j], ctx])
            forecasts.append(ForecastRecord(pos, sid, interval_for(sid)))
    return matches, forecasts


def resolve_forecasts(
    forecasts: list[ForecastRecord],
    matches: list[MatchRecord],
    stream_length: int,
) -> list[ForecastRecord]:
    """Assign an outcome to every forecast.

    With t the emission index and (s, e) the interval: hit when the next
    match after t is t+s..t+e away, miss when it falls outside or when the
    stream provably contains no completion in the interval, unresolved
    when the interval extends past the end of the stream (or no interval
    was available).
    """
    match_idx = np.array([m.index for m in matches], dtype=np.int64)
    out = []
    for record in forecasts:
        iv = record.interval
        if iv is None:
            out.append(replace(record, outcome="unresolved"))
            continue
        t = record.emitted_at
        pos = int(np.searchsorted(match_idx, t, side="right"))
        if pos < len(match_idx):
            gap = int(match_idx[pos]) - t
            outcome = "hit" if iv.start <= gap <= iv.end else "miss"
        elif t + iv.end >= stream_length:
            outcome = "unresolved"
        else:
            outcome = "miss"
        out.append(replace(record, outcome=outcome))
    return out


def write_records(matches: list[MatchRecord], forecasts: list[ForecastRecord], path) -> None:
    """Write match and forecast records as JSON lines, in stream order."""
    rows = [(m.index, _match_obj(m)) for m in matches]
    rows += [(f.emitted_at, _forecast_obj(f)) for f in forecasts]
    rows.sort(key=lambda item: item[0])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for _, obj in rows:
            fh.write(json.dumps(obj, separators=(",", ":")))
            fh.write("\n")


def _match_obj(m: MatchRecord) -> dict:
    return {"kind": "match", "index": m.index, "timestamp": m.timestamp}


def _forecast_obj(f: ForecastRecord) -> dict:
    iv = f.interval
    return {
        "kind": "forecast",
        "emitted_at": f.emitted_at,
        "state": f.state,
        "start": None if iv is None else iv.start,
        "end": None if iv is None else iv.end,
        "mass": None if iv is None else iv.mass,
        "outcome": f.outcome,
    }


def read_records(path) -> tuple[list[MatchRecord], list[ForecastRecord]]:
    """Read back a JSON-lines record file written by write_records."""
    matches: list[MatchRecord] = []
    forecasts: list[ForecastRecord] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                kind = obj["kind"]
                if kind == "match":
                    matches.append(MatchRecord(obj["index"], obj["timestamp"]))
                elif kind == "forecast":
                    iv = None
                    if obj["start"] is not None:
                        iv = ForecastInterval(obj["start"], obj["end"], obj["mass"])
                    outcome = obj["outcome"]
                    if outcome is not None and outcome not in _OUTCOMES:
                        raise ValidationError(f"unknown outcome {outcome!r} at line {lineno}")
                    forecasts.append(ForecastRecord(obj["emitted_at"], obj["state"], iv, outcome))
                else:
                    raise ValidationError(f"unknown record kind {kind!r} at line {lineno}")
            except (KeyError, TypeError, json.JSONDecodeError) as exc:
                raise ValidationError(f"malformed record at line {lineno}: {exc}") from None
    return matches, forecasts
