"""Pure-Python kernels, bit-identical to the compiled extension.

These are the two sequential inner loops that dominate long runs: stepping
a dense transition table over a stream, and sampling a stream from an
order-m model. Results must match eventcast._kernels exactly so the two
backends are interchangeable.
"""

from __future__ import annotations

import numpy as np

from .rng import GAMMA, MASK64, MIX1, MIX2, UNIT53


def trace_table(table: np.ndarray, symbols: np.ndarray, start: int) -> np.ndarray:
    """State after each symbol when stepping `table` from `start`.

    table: (n_states, n_symbols) int32; symbols: (n,) int32.
    """
    rows = table.tolist()
    state = int(start)
    out = []
    for sym in symbols.tolist():
        state = rows[state][sym]
        out.append(state)
    return np.array(out, dtype=np.int32)


def sample_symbols(cdf: np.ndarray, context: int, state: int, length: int) -> np.ndarray:
    """Draw `length` symbol indices from per-context cumulative rows.

    cdf: (n_contexts, n_symbols) float64 with each row ending in 1.0;
    context: starting context index; state: SplitMix64 internal state.
    The context rolls as (context * n_symbols + symbol) mod n_contexts.
    """
    rows = cdf.tolist()
    n_contexts = len(rows)
    n_symbols = len(rows[0])
    out = []
    c = int(context)
    for _ in range(length):
        state = (state + GAMMA) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        z ^= z >> 31
        u = (z >> 11) * UNIT53
        row = rows[c]
        sym = 0
        while sym < n_symbols - 1 and u >= row[sym]:
            sym += 1
        out.append(sym)
        c = (c * n_symbols + sym) % n_contexts
    return np.array(out, dtype=np.int32)
