"""Order-m symbol models and the product chain over (automaton state, context).

A context is the last m symbols, encoded as a base-|alphabet| integer with
the oldest symbol in the most significant digit, so appending symbol s maps
context c to (c * |alphabet| + s) mod |alphabet|**m. The product chain pairs
each automaton state with a context; states whose automaton component is
final are absorbing for first-passage analysis, while the runtime step
table keeps running through them (a streaming matcher never resets).
"""

from __future__ import annotations

import json

import numpy as np

from .automata import Dfa
from .errors import ModelError, ValidationError
from .events import Alphabet, EventStream

MAX_CONTEXTS = 1_000_000

_ROW_SUM_TOL = 1e-12
_CHAIN_ROW_TOL = 1e-9


def _context_count(n_symbols: int, order: int) -> int:
    count = n_symbols**order
    if count > MAX_CONTEXTS:
        raise ModelError(
            f"order {order} over {n_symbols} symbols needs {count} contexts "
            f"(limit {MAX_CONTEXTS})"
        )
    return count


def context_index(alphabet: Alphabet, symbols) -> int:
    """Encode a context (oldest symbol first) as a table row index."""
    idx = 0
    for name in symbols:
        idx = idx * len(alphabet) + alphabet.index(name)
    return idx


def context_symbols(alphabet: Alphabet, order: int, index: int) -> tuple[str, ...]:
    """Decode a table row index back to the context's symbol names."""
    names = []
    for _ in range(order):
        names.append(alphabet.symbols[index % len(alphabet)])
        index //= len(alphabet)
    return tuple(reversed(names))


class SymbolModel:
    """Conditional distribution over the next event type given the last m.

    probs[c, s] = P(symbol s | context c), dense over all |alphabet|**m
    contexts. `observed` marks contexts that occurred in training; rows for
    unobserved contexts fall back to the smoothing-induced uniform.
    """

    __slots__ = ("alphabet", "order", "smoothing", "probs", "observed")

    def __init__(self, alphabet: Alphabet, order: int, smoothing: float, probs, observed=None):
        if order < 0:
            raise ValidationError(f"order must be >= 0, got {order}")
        if smoothing < 0:
            raise ValidationError(f"smoothing must be >= 0, got {smoothing}")
        n_contexts = _context_count(len(alphabet), order)
        probs = np.asarray(probs, dtype=np.float64)
        if probs.shape != (n_contexts, len(alphabet)):
            raise ModelError(
                f"probability table shape {probs.shape} does not match "
                f"({n_contexts}, {len(alphabet)})"
            )
        if np.any(probs < 0):
            raise ModelError("negative probability in model table")
        sums = probs.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > _ROW_SUM_TOL):
            worst = int(np.argmax(np.abs(sums - 1.0)))
            raise ModelError(f"row for context {worst} sums to {sums[worst]!r}, not 1")
        if observed is None:
            observed = np.ones(n_contexts, dtype=bool)
        else:
            observed = np.asarray(observed, dtype=bool)
            if observed.shape != (n_contexts,):
                raise ModelError("observed mask shape does not match context count")
        self.alphabet = alphabet
        self.order = int(order)
        self.smoothing = float(smoothing)
        self.probs = probs
        self.observed = observed

    @property
    def n_contexts(self) -> int:
        return self.probs.shape[0]

    def prob(self, context, symbol: str) -> float:
        """P(symbol | context) with the context given as symbol names."""
        if len(tuple(context)) != self.order:
            raise ValidationError(f"context length {len(tuple(context))} != order {self.order}")
        return float(self.probs[context_index(self.alphabet, context), self.alphabet.index(symbol)])

    def to_dict(self) -> dict:
        table = {}
        unobserved = []
        for c in range(self.n_contexts):
            key = ",".join(context_symbols(self.alphabet, self.order, c))
            table[key] = [float(p) for p in self.probs[c]]
            if not self.observed[c]:
                unobserved.append(key)
        return {
            "alphabet": list(self.alphabet.symbols),
            "order": self.order,
            "smoothing": self.smoothing,
            "table": table,
            "unobserved": unobserved,
        }

    @classmethod
    def from_dict(cls, data: dict) -> SymbolModel:
        try:
            alphabet = Alphabet(data["alphabet"])
            order = int(data["order"])
            smoothing = float(data["smoothing"])
            table = data["table"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed model data: {exc}") from None
        n_contexts = _context_count(len(alphabet), order)
        probs = np.zeros((n_contexts, len(alphabet)))
        seen = set()
        for key, row in table.items():
            names = tuple(key.split(",")) if key else ()
            c = context_index(alphabet, names)
            probs[c] = row
            seen.add(c)
        if len(seen) != n_contexts:
            raise ValidationError(f"model table has {len(seen)} contexts, expected {n_contexts}")
        observed = np.ones(n_contexts, dtype=bool)
        for key in data.get("unobserved", ()):
            names = tuple(key.split(",")) if key else ()
            observed[context_index(alphabet, names)] = False
        return cls(alphabet, order, smoothing, probs, observed)

    def __eq__(self, other):
        return (
            isinstance(other, SymbolModel)
            and self.alphabet == other.alphabet
            and self.order == other.order
            and self.smoothing == other.smoothing
            and np.array_equal(self.probs, other.probs)
            and np.array_equal(self.observed, other.observed)
        )

    def __repr__(self):
        return f"SymbolModel(order={self.order}, alphabet={list(self.alphabet.symbols)!r})"


def save_model(model: SymbolModel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(model.to_dict(), fh, separators=(",", ":"))
        fh.write("\n")


def load_model(path) -> SymbolModel:
    with open(path, encoding="utf-8") as fh:
        return SymbolModel.from_dict(json.load(fh))


def train(stream: EventStream, order: int, smoothing: float = 1.0) -> SymbolModel:
    """Estimate an order-m model by additive-smoothing maximum likelihood.

    P(s | c) = (count(c then s) + a) / (count(c then anything) + a * |alphabet|).
    With smoothing 0, unobserved contexts get a uniform row but stay marked
    unobserved; using such a context downstream is an error.
    """
    if order < 0:
        raise ValidationError(f"order must be >= 0, got {order}")
    if smoothing < 0:
        raise ValidationError(f"smoothing must be >= 0, got {smoothing}")
    alphabet = stream.alphabet
    n_symbols = len(alphabet)
    n_contexts = _context_count(n_symbols, order)

    counts = np.zeros((n_contexts, n_symbols), dtype=np.int64)
    idx = stream.symbol_indices()
    if order == 0:
        if len(idx):
            counts[0] = np.bincount(idx, minlength=n_symbols)
    elif len(idx) > order:
        windows = np.lib.stride_tricks.sliding_window_view(idx, order)[:-1]
        powers = n_symbols ** np.arange(order - 1, -1, -1, dtype=np.int64)
        contexts = windows @ powers
        np.add.at(counts, (contexts, idx[order:]), 1)

    totals = counts.sum(axis=1)
    observed = totals > 0
    if smoothing == 0:
        probs = np.full((n_contexts, n_symbols), 1.0 / n_symbols)
        if observed.any():
            probs[observed] = counts[observed] / totals[observed, None]
    else:
        probs = (counts + smoothing) / (totals + smoothing * n_symbols)[:, None]
    return SymbolModel(alphabet, order, smoothing, probs, observed)


class PatternMarkovChain:
    """Markov chain over (automaton state, context) pairs.

    `states` lists the reachable pairs sorted by (automaton state, context
    index); `transition` is the full row-stochastic matrix with absorbing
    rows replaced by self-loops; `step_table` is the runtime product
    transition on symbol indices, defined for every state including
    absorbing ones.
    """

    __slots__ = ("dfa", "model", "states", "index", "absorbing", "transition", "step_table")

    def __init__(self, dfa: Dfa, model: SymbolModel, states, index, absorbing, transition, step_table):
        self.dfa = dfa
        self.model = model
        self.states = states
        self.index = index
        self.absorbing = absorbing
        self.transition = transition
        self.step_table = step_table

    @property
    def n_states(self) -> int:
        return len(self.states)

    def non_absorbing(self) -> list[int]:
        return [i for i in range(self.n_states) if i not in self.absorbing]

    def dfa_state(self, state_id: int) -> int:
        return self.states[state_id][0]

    def context_of(self, state_id: int) -> tuple[str, ...]:
        return context_symbols(self.model.alphabet, self.model.order, self.states[state_id][1])

    def product_index_table(self) -> np.ndarray:
        """(automaton state, context index) -> chain state id; -1 if unreachable."""
        table = np.full((self.dfa.num_states, self.model.n_contexts), -1, dtype=np.int32)
        for i, (q, c) in enumerate(self.states):
            table[q, c] = i
        return table

    def __repr__(self):
        return f"PatternMarkovChain(states={self.n_states}, absorbing={len(self.absorbing)})"


def build_chain(dfa: Dfa, model: SymbolModel) -> PatternMarkovChain:
    """Build the product chain describing the automaton's run-time behavior.

    States are the forward closure of every (start, context) seed under the
    product step, so the chain indexes any trajectory the runtime can
    produce regardless of the model's zero-probability edges.
    """
    if dfa.alphabet != model.alphabet:
        raise ModelError(
            f"alphabet mismatch: automaton has {list(dfa.alphabet.symbols)}, "
            f"model has {list(model.alphabet.symbols)}"
        )
    n_symbols = len(model.alphabet)
    n_contexts = model.n_contexts
    delta = dfa.delta

    seeds = [(dfa.start, c) for c in range(n_contexts)]
    seen = set(seeds)
    queue = list(seeds)
    while queue:
        q, c = queue.pop()
        for sym in range(n_symbols):
            nxt = (delta[q][sym], (c * n_symbols + sym) % n_contexts)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)

    states = tuple(sorted(seen))
    index = {pair: i for i, pair in enumerate(states)}
    absorbing = frozenset(i for i, (q, _) in enumerate(states) if q in dfa.finals)

    if model.smoothing == 0:
        for i, (q, c) in enumerate(states):
            if i not in absorbing and not model.observed[c]:
                names = ",".join(context_symbols(model.alphabet, model.order, c)) or "()"
                raise ModelError(
                    f"context {names!r} never observed in training and smoothing is 0"
                )

    n = len(states)
    step_table = np.empty((n, n_symbols), dtype=np.int32)
    transition = np.zeros((n, n))
    for i, (q, c) in enumerate(states):
        for sym in range(n_symbols):
            j = index[(delta[q][sym], (c * n_symbols + sym) % n_contexts)]
            step_table[i, sym] = j
            if i not in absorbing:
                transition[i, j] += model.probs[c, sym]
        if i in absorbing:
            transition[i, i] = 1.0

    row_err = np.abs(transition.sum(axis=1) - 1.0)
    if np.any(row_err > _CHAIN_ROW_TOL):
        worst = int(np.argmax(row_err))
        raise ModelError(f"chain row {worst} sums to {transition[worst].sum()!r}, not 1")
    return PatternMarkovChain(dfa, model, states, index, absorbing, transition, step_table)
