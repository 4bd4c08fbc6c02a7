#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernels on long synthetic streams.

Times the two sequential hot loops (order-m sampling and transition-table
tracing) under both backends and verifies they produce identical output.

    python3 benchmarks/bench_kernels.py --events 2000000
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from eventcast import Alphabet, SymbolModel, compile_pattern, parse_pattern
from eventcast import _kernels_py

try:
    from eventcast import _kernels as _native
except ImportError:
    _native = None


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--events", type=int, default=2_000_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    alphabet = Alphabet(["a", "b"])
    model = SymbolModel(alphabet, 1, 0.0, np.array([[0.4, 0.6], [0.55, 0.45]]))
    cdf = np.ascontiguousarray(np.cumsum(model.probs, axis=1))
    cdf[:, -1] = 1.0
    dfa = compile_pattern(parse_pattern("a;b;b;b", alphabet), alphabet)
    table = dfa.transition_table()

    backends = {"pure": _kernels_py}
    if _native is not None:
        backends["native"] = _native
    else:
        print("note: compiled extension not built, timing pure Python only")

    results: dict[tuple[str, str], float] = {}
    outputs: dict[tuple[str, str], np.ndarray] = {}
    for name, impl in backends.items():
        secs, symbols = best_of(lambda impl=impl: impl.sample_symbols(cdf, 0, 12345, args.events), args.repeat)
        results[("sample_symbols", name)] = secs
        outputs[("sample_symbols", name)] = symbols
        secs, states = best_of(lambda impl=impl, s=symbols: impl.trace_table(table, s, dfa.start), args.repeat)
        results[("trace_table", name)] = secs
        outputs[("trace_table", name)] = states

    if len(backends) == 2:
        for kernel in ("sample_symbols", "trace_table"):
            assert np.array_equal(outputs[(kernel, "pure")], outputs[(kernel, "native")]), kernel

    print(f"\n{args.events:,} events, best of {args.repeat}")
    print(f"{'kernel':<16} {'backend':<8} {'seconds':>9} {'Mevents/s':>10} {'speedup':>8}")
    for kernel in ("sample_symbols", "trace_table"):
        pure_secs = results[(kernel, "pure")]
        for name in backends:
            secs = results[(kernel, name)]
            rate = args.events / secs / 1e6
            speedup = f"{pure_secs / secs:.1f}x" if name == "native" else "1.0x"
            print(f"{kernel:<16} {name:<8} {secs:>9.3f} {rate:>10.1f} {speedup:>8}")


if __name__ == "__main__":
    main()
