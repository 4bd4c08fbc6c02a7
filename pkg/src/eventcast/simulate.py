"""Synthetic stream generation from a known symbol model.

Streams are reproducible bit-for-bit from (model, length, seed): draws come
from SplitMix64 doubles fed through each context's cumulative row, picking
the first symbol whose cumulative probability exceeds the draw. When no
initial context is given, its symbols are drawn uniformly, one draw per
position, before the main sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ValidationError
from .events import Event, EventStream
from .markov import SymbolModel, context_index
from .rng import MASK64, SplitMix64


@dataclass(frozen=True)
class GeneratorSpec:
    model: SymbolModel
    length: int
    seed: int
    initial_context: tuple[str, ...] | None = None


def generate(spec: GeneratorSpec) -> EventStream:
    """Generate a stream of `length` events with timestamps 0, 1, 2, ..."""
    if spec.length < 1:
        raise ValidationError(f"length must be >= 1, got {spec.length}")
    if not 0 <= spec.seed <= MASK64:
        raise ValidationError("seed must fit in 64 bits")
    model = spec.model
    alphabet = model.alphabet
    n_symbols = len(alphabet)
    rng = SplitMix64(spec.seed)

    if spec.initial_context is not None:
        if len(spec.initial_context) != model.order:
            raise ValidationError(
                f"initial context length {len(spec.initial_context)} != order {model.order}"
            )
        context = context_index(alphabet, spec.initial_context)
    else:
        context = 0
        for _ in range(model.order):
            u = rng.next_unit()
            sym = 0
            while sym < n_symbols - 1 and u >= (sym + 1) / n_symbols:
                sym += 1
            context = context * n_symbols + sym

    cdf = np.cumsum(model.probs, axis=1)
    cdf[:, -1] = 1.0  # guard against rows summing to slightly under 1
    cdf = np.ascontiguousarray(cdf)
    symbols = kernels.sample_symbols(cdf, context, rng.state, spec.length)

    names = alphabet.symbols
    events = tuple(Event(names[s], i, i) for i, s in enumerate(symbols.tolist()))
    return EventStream(alphabet, events)
