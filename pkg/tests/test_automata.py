import pytest

from corpus import CORPUS
from eventcast import (
    Alphabet,
    CompileError,
    Dfa,
    ValidationError,
    compile_pattern,
    load_dfa,
    parse_pattern,
    save_dfa,
)
from oracles import brute_force_min_dfa, suffix_accepts, words_up_to

ABBB_DELTA = ((1, 0), (1, 2), (1, 3), (1, 4), (1, 0))


def test_abbb_compiles_to_canonical_five_states(ab, abbb_dfa):
    assert abbb_dfa.num_states == 5
    assert abbb_dfa.start == 0
    assert abbb_dfa.finals == frozenset({4})
    assert abbb_dfa.delta == ABBB_DELTA


def test_abbb_matches_residual_construction(ab, abbb_dfa):
    expr = parse_pattern("a;b;b;b", ab)
    delta, start, finals = brute_force_min_dfa(expr, ab)
    assert [list(row) for row in abbb_dfa.delta] == delta
    assert abbb_dfa.start == start
    assert set(abbb_dfa.finals) == finals


def test_unary_single_symbol():
    alpha = Alphabet(["a"])
    dfa = compile_pattern(parse_pattern("a", alpha), alpha)
    assert dfa.num_states == 2
    assert dfa.start == 0
    assert dfa.finals == frozenset({1})
    assert dfa.delta == ((1,), (1,))


def test_epsilon_pattern_rejected(ab):
    with pytest.raises(CompileError, match="empty sequence"):
        compile_pattern(parse_pattern("a*", ab), ab)
    with pytest.raises(CompileError, match="empty sequence"):
        compile_pattern(parse_pattern("a*;b*", ab), ab)


def test_accepts_examples(ab, abbb_dfa):
    assert abbb_dfa.accepts(["b", "a", "b", "b", "b"])
    assert not abbb_dfa.accepts([])
    assert not abbb_dfa.accepts(["a", "b", "b"])


def test_step_examples(ab, abbb_dfa):
    assert abbb_dfa.step(3, "b") == 4
    assert abbb_dfa.step(4, "a") == 1
    alpha = Alphabet(["a"])
    unary = compile_pattern(parse_pattern("a", alpha), alpha)
    assert unary.step(1, "a") == 1


def test_step_rejects_unknown_symbol(abbb_dfa):
    with pytest.raises(ValidationError):
        abbb_dfa.step(0, "z")


def test_compilation_is_deterministic(ab):
    for text, alphabet in CORPUS:
        expr = parse_pattern(text, alphabet)
        assert compile_pattern(expr, alphabet) == compile_pattern(expr, alphabet)


def test_every_state_reachable_and_total():
    for text, alphabet in CORPUS:
        dfa = compile_pattern(parse_pattern(text, alphabet), alphabet)
        seen = {dfa.start}
        queue = [dfa.start]
        while queue:
            q = queue.pop()
            for t in dfa.delta[q]:
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        assert seen == set(range(dfa.num_states))
        assert all(len(row) == len(alphabet) for row in dfa.delta)


def _distinguishable(dfa):
    """Table-filling: pairs of states separated by some word."""
    n = dfa.num_states
    marked = {
        (p, q)
        for p in range(n)
        for q in range(p + 1, n)
        if (p in dfa.finals) != (q in dfa.finals)
    }
    changed = True
    while changed:
        changed = False
        for p in range(n):
            for q in range(p + 1, n):
                if (p, q) in marked:
                    continue
                for sym in range(len(dfa.alphabet)):
                    a, b = dfa.delta[p][sym], dfa.delta[q][sym]
                    if a > b:
                        a, b = b, a
                    if a != b and (a, b) in marked:
                        marked.add((p, q))
                        changed = True
                        break
    return marked


def test_compiled_automata_are_minimal():
    for text, alphabet in CORPUS:
        dfa = compile_pattern(parse_pattern(text, alphabet), alphabet)
        n = dfa.num_states
        assert len(_distinguishable(dfa)) == n * (n - 1) // 2, text


def test_accepts_agrees_with_naive_oracle_small():
    # Full corpus sweep lives in the acceptance suite; spot-check here.
    for text, alphabet in CORPUS[:6]:
        expr = parse_pattern(text, alphabet)
        dfa = compile_pattern(expr, alphabet)
        for word in words_up_to(alphabet.symbols, 5):
            assert dfa.accepts(word) == suffix_accepts(expr, word), (text, word)


def test_serialization_round_trip(tmp_path, abbb_dfa):
    path = tmp_path / "dfa.json"
    save_dfa(abbb_dfa, path)
    assert load_dfa(path) == abbb_dfa
    save_dfa(abbb_dfa, tmp_path / "again.json")
    assert (tmp_path / "again.json").read_bytes() == path.read_bytes()


def test_from_dict_validates():
    with pytest.raises(ValidationError):
        Dfa.from_dict({"alphabet": ["a"], "start": 0, "finals": [], "delta": [[0]]})
    with pytest.raises(ValidationError):
        Dfa.from_dict({"alphabet": ["a"], "start": 0, "finals": [1], "delta": [[2], [0]]})
    with pytest.raises(ValidationError):
        Dfa.from_dict({"alphabet": ["a"], "start": 5, "finals": [0], "delta": [[0]]})
