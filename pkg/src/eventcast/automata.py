"""Compilation of patterns into total, minimal deterministic automata.

The compiled automaton recognizes "any prefix, then the pattern": it is in
a final state exactly when a pattern match ends at the most recent event,
which is the semantics a streaming matcher needs. Pipeline: prepend an
any-symbol loop, Thompson construction, subset construction, Hopcroft
minimization, then breadth-first state renumbering so repeated compilation
of the same pattern is bit-identical.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import CompileError, ValidationError
from .events import Alphabet
from .patterns import Or, PatternExpr, Seq, Sym, matches_epsilon


class Dfa:
    """Total deterministic automaton with a dense transition table.

    delta[state][symbol_index] is defined for every pair; a final state
    means a match ends at the current event. States are numbered by
    breadth-first order from the start state, symbols in alphabet order.
    """

    __slots__ = ("alphabet", "num_states", "start", "finals", "delta", "_table")

    def __init__(self, alphabet: Alphabet, start: int, finals, delta):
        delta = tuple(tuple(int(t) for t in row) for row in delta)
        n = len(delta)
        if n == 0:
            raise ValidationError("automaton needs at least one state")
        for row in delta:
            if len(row) != len(alphabet):
                raise ValidationError("transition row width does not match alphabet size")
            for t in row:
                if not 0 <= t < n:
                    raise ValidationError(f"transition target {t} out of range")
        finals = frozenset(int(f) for f in finals)
        if not finals:
            raise ValidationError("automaton needs at least one final state")
        if not all(0 <= f < n for f in finals):
            raise ValidationError("final state out of range")
        if not 0 <= start < n:
            raise ValidationError("start state out of range")
        self.alphabet = alphabet
        self.num_states = n
        self.start = int(start)
        self.finals = finals
        self.delta = delta
        self._table = np.array(delta, dtype=np.int32)

    def step(self, state: int, symbol: str) -> int:
        """Successor of `state` on one event of the given type."""
        return self.delta[state][self.alphabet.index(symbol)]

    def accepts(self, word) -> bool:
        """Run the automaton over a word of type names; True iff it ends final."""
        q = self.start
        for symbol in word:
            q = self.delta[q][self.alphabet.index(symbol)]
        return q in self.finals

    def transition_table(self) -> np.ndarray:
        """Dense int32 view of delta, shaped (num_states, alphabet size)."""
        return self._table

    def __eq__(self, other):
        return (
            isinstance(other, Dfa)
            and self.alphabet == other.alphabet
            and self.start == other.start
            and self.finals == other.finals
            and self.delta == other.delta
        )

    def __hash__(self):
        return hash((self.alphabet, self.start, self.finals, self.delta))

    def __repr__(self):
        return f"Dfa(states={self.num_states}, start={self.start}, finals={sorted(self.finals)})"

    def to_dict(self) -> dict:
        return {
            "alphabet": list(self.alphabet.symbols),
            "start": self.start,
            "finals": sorted(self.finals),
            "delta": [list(row) for row in self.delta],
        }

    @classmethod
    def from_dict(cls, data: dict) -> Dfa:
        try:
            alphabet = Alphabet(data["alphabet"])
            return cls(alphabet, data["start"], data["finals"], data["delta"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed automaton data: {exc}") from None


def save_dfa(dfa: Dfa, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(dfa.to_dict(), fh, separators=(",", ":"))
        fh.write("\n")


def load_dfa(path) -> Dfa:
    with open(path, encoding="utf-8") as fh:
        return Dfa.from_dict(json.load(fh))


class _Nfa:
    """Thompson fragments over symbol indices, with epsilon edges."""

    def __init__(self, n_symbols: int):
        self.n_symbols = n_symbols
        self.eps: list[list[int]] = []
        self.moves: list[dict[int, list[int]]] = []

    def new_state(self) -> int:
        self.eps.append([])
        self.moves.append({})
        return len(self.eps) - 1

    def add_eps(self, src: int, dst: int) -> None:
        self.eps[src].append(dst)

    def add_move(self, src: int, sym: int, dst: int) -> None:
        self.moves[src].setdefault(sym, []).append(dst)

    def build(self, expr: PatternExpr, alphabet: Alphabet) -> tuple[int, int]:
        if isinstance(expr, Sym):
            s, e = self.new_state(), self.new_state()
            self.add_move(s, alphabet.index(expr.name), e)
            return s, e
        if isinstance(expr, Seq):
            ls, le = self.build(expr.left, alphabet)
            rs, re_ = self.build(expr.right, alphabet)
            self.add_eps(le, rs)
            return ls, re_
        if isinstance(expr, Or):
            s, e = self.new_state(), self.new_state()
            ls, le = self.build(expr.left, alphabet)
            rs, re_ = self.build(expr.right, alphabet)
            self.add_eps(s, ls)
            self.add_eps(s, rs)
            self.add_eps(le, e)
            self.add_eps(re_, e)
            return s, e
        # Iter
        s, e = self.new_state(), self.new_state()
        bs, be = self.build(expr.body, alphabet)
        self.add_eps(s, bs)
        self.add_eps(s, e)
        self.add_eps(be, bs)
        self.add_eps(be, e)
        return s, e

    def closure(self, states) -> frozenset[int]:
        seen = set(states)
        stack = list(states)
        while stack:
            q = stack.pop()
            for t in self.eps[q]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)


def _subset_construction(nfa: _Nfa, start: int, accept: int, n_symbols: int):
    """Determinize; returns (delta rows, finals set). State 0 is the start subset."""
    start_set = nfa.closure([start])
    ids: dict[frozenset[int], int] = {start_set: 0}
    queue = [start_set]
    delta: list[list[int]] = []
    finals: set[int] = set()
    while queue:
        subset = queue.pop(0)
        sid = ids[subset]
        while len(delta) <= sid:
            delta.append([])
        if accept in subset:
            finals.add(sid)
        row = []
        for sym in range(n_symbols):
            targets = [t for q in subset for t in nfa.moves[q].get(sym, ())]
            nxt = nfa.closure(targets) if targets else frozenset()
            if nxt not in ids:
                ids[nxt] = len(ids)
                queue.append(nxt)
            row.append(ids[nxt])
        delta[sid] = row
    return delta, finals


def _hopcroft(delta, finals, n_symbols: int):
    """Partition states into equivalence classes; returns state -> class id."""
    n = len(delta)
    finals = frozenset(finals)
    others = frozenset(range(n)) - finals
    partition = {p for p in (finals, others) if p}
    work = set(partition)

    preds: list[dict[int, set[int]]] = [dict() for _ in range(n_symbols)]
    for q in range(n):
        for sym in range(n_symbols):
            preds[sym].setdefault(delta[q][sym], set()).add(q)

    while work:
        splitter = work.pop()
        for sym in range(n_symbols):
            x = set()
            for q in splitter:
                x |= preds[sym].get(q, set())
            if not x:
                continue
            for block in list(partition):
                inter = block & x
                diff = block - x
                if not inter or not diff:
                    continue
                inter, diff = frozenset(inter), frozenset(diff)
                partition.remove(block)
                partition.add(inter)
                partition.add(diff)
                if block in work:
                    work.remove(block)
                    work.add(inter)
                    work.add(diff)
                else:
                    work.add(inter if len(inter) <= len(diff) else diff)

    class_of = {}
    for cid, block in enumerate(partition):
        for q in block:
            class_of[q] = cid
    return class_of, len(partition)


def _bfs_renumber(delta, start, finals, n_symbols: int):
    """Canonical numbering: breadth-first from start, symbols in alphabet order."""
    order = {start: 0}
    queue = [start]
    while queue:
        q = queue.pop(0)
        for sym in range(n_symbols):
            t = delta[q][sym]
            if t not in order:
                order[t] = len(order)
                queue.append(t)
    new_delta = [[0] * n_symbols for _ in range(len(order))]
    for q, new_q in order.items():
        for sym in range(n_symbols):
            new_delta[new_q][sym] = order[delta[q][sym]]
    new_finals = {order[f] for f in finals if f in order}
    return new_delta, new_finals


def compile_pattern(expr: PatternExpr, alphabet: Alphabet) -> Dfa:
    """Compile a pattern into the minimal total automaton for streaming matches.

    Patterns whose language contains the empty sequence are rejected:
    forecasting the completion of an already-complete pattern is
    meaningless. The empty-language case is likewise rejected (it cannot
    arise from this AST, but the check keeps the contract explicit).
    """
    if matches_epsilon(expr):
        raise CompileError("pattern matches the empty sequence")
    n_symbols = len(alphabet)

    nfa = _Nfa(n_symbols)
    prefix = nfa.new_state()
    for sym in range(n_symbols):
        nfa.add_move(prefix, sym, prefix)
    body_start, body_end = nfa.build(expr, alphabet)
    nfa.add_eps(prefix, body_start)

    delta, finals = _subset_construction(nfa, prefix, body_end, n_symbols)
    class_of, n_classes = _hopcroft(delta, finals, n_symbols)

    rep_delta = [[0] * n_symbols for _ in range(n_classes)]
    for q, cid in class_of.items():
        for sym in range(n_symbols):
            rep_delta[cid][sym] = class_of[delta[q][sym]]
    start_class = class_of[0]
    final_classes = {class_of[f] for f in finals}

    new_delta, new_finals = _bfs_renumber(rep_delta, start_class, final_classes, n_symbols)
    if not new_finals:
        raise CompileError("pattern matches no sequences")
    return Dfa(alphabet, 0, new_finals, new_delta)
