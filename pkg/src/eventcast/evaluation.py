"""Per-state forecast quality: precision, spread, distance.

Precision is hits / (hits + misses) over resolved forecasts only;
unresolved ones (interval truncated by the end of the stream) never count
against a state. Spread of a forecast is end - start of its interval,
distance is start; both are averaged over every emitted forecast that
carried an interval.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import ForecastRecord
from .errors import ValidationError


@dataclass(frozen=True, slots=True)
class StateMetrics:
    state: int
    n_forecasts: int
    n_resolved: int
    precision: float | None
    mean_spread: float | None
    mean_distance: float | None


def evaluate(forecasts: list[ForecastRecord]) -> list[StateMetrics]:
    """Aggregate resolved forecast records into per-state metrics."""
    acc: dict[int, list] = {}  # state -> [n, hits, misses, n_iv, spread_sum, dist_sum]
    for record in forecasts:
        if record.outcome is None:
            raise ValidationError(f"forecast at {record.emitted_at} has no outcome; resolve first")
        a = acc.setdefault(record.state, [0, 0, 0, 0, 0, 0])
        a[0] += 1
        if record.outcome == "hit":
            a[1] += 1
        elif record.outcome == "miss":
            a[2] += 1
        if record.interval is not None:
            a[3] += 1
            a[4] += record.interval.spread
            a[5] += record.interval.distance
    out = []
    for state in sorted(acc):
        n, hits, misses, n_iv, spread_sum, dist_sum = acc[state]
        resolved = hits + misses
        out.append(
            StateMetrics(
                state=state,
                n_forecasts=n,
                n_resolved=resolved,
                precision=hits / resolved if resolved else None,
                mean_spread=spread_sum / n_iv if n_iv else None,
                mean_distance=dist_sum / n_iv if n_iv else None,
            )
        )
    return out


_HEADER = "state,n_forecasts,n_resolved,precision,mean_spread,mean_distance"


def export_metrics(metrics: list[StateMetrics], path) -> None:
    """Write metrics as CSV, one row per state, states ascending."""
    rows = sorted(metrics, key=lambda m: m.state)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_HEADER + "\n")
        for m in rows:
            fh.write(
                f"{m.state},{m.n_forecasts},{m.n_resolved},"
                f"{_fmt(m.precision)},{_fmt(m.mean_spread)},{_fmt(m.mean_distance)}\n"
            )


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(value)
