"""First-passage distributions on the chain and confidence-interval selection.

For a non-absorbing chain state s, row s of the waiting-time table holds
W_s(k): the probability that the chain first enters an absorbing state in
exactly k steps, for k = 1..horizon. With Q the sub-matrix over
non-absorbing states and f the one-step absorption mass, W(1) = f and
W(k) = Q @ W(k-1); the iteration costs O(horizon * n^2) and stays stable
because Q is sub-stochastic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HorizonError, ValidationError
from .markov import PatternMarkovChain


@dataclass(frozen=True, slots=True)
class ForecastInterval:
    """Inclusive range of future-event counts carrying mass >= the threshold."""

    start: int
    end: int
    mass: float

    @property
    def spread(self) -> int:
        return self.end - self.start

    @property
    def distance(self) -> int:
        return self.start


@dataclass(frozen=True, eq=False)
class WaitingTimeTable:
    """Per-state first-passage distributions, one row per non-absorbing state."""

    horizon: int
    rows: dict[int, np.ndarray]


def waiting_times(chain: PatternMarkovChain, horizon: int) -> WaitingTimeTable:
    """Compute W_s(1..horizon) for every non-absorbing state of the chain."""
    if horizon < 1:
        raise ValidationError(f"horizon must be >= 1, got {horizon}")
    non_abs = chain.non_absorbing()
    absorbing = sorted(chain.absorbing)
    sub = chain.transition[non_abs]
    q_matrix = sub[:, non_abs]
    one_step = sub[:, absorbing].sum(axis=1) if absorbing else np.zeros(len(non_abs))

    values = np.empty((len(non_abs), horizon))
    w = one_step.copy()
    values[:, 0] = w
    for k in range(1, horizon):
        w = q_matrix @ w
        values[:, k] = w
    rows = {sid: values[j] for j, sid in enumerate(non_abs)}
    return WaitingTimeTable(horizon, rows)


def forecast_interval(weights, theta: float) -> ForecastInterval:
    """Smallest window [start, end] of steps whose mass reaches theta.

    Ties in length are broken toward the smallest start. Raises
    HorizonError (carrying the achievable mass) when even the full
    horizon cannot reach theta.
    """
    if not 0.0 < theta <= 1.0:
        raise ValidationError("theta must be in (0,1]")
    weights = np.asarray(weights, dtype=np.float64)
    horizon = len(weights)
    if horizon == 0:
        raise ValidationError("empty waiting-time vector")
    prefix = np.concatenate(([0.0], np.cumsum(weights)))
    total = float(prefix[horizon])
    if total < theta:
        raise HorizonError(
            f"horizon insufficient: total mass {total:.6g} < theta {theta:g}", total
        )

    best = None  # (length, start, end)
    s = 1
    for e in range(1, horizon + 1):
        if prefix[e] - prefix[s - 1] < theta:
            continue
        while prefix[e] - prefix[s] >= theta:
            s += 1
        length = e - s
        if best is None or length < best[0]:
            best = (length, s, e)
    _, start, end = best
    return ForecastInterval(start, end, float(prefix[end] - prefix[start - 1]))
