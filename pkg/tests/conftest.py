import numpy as np
import pytest

from eventcast import Alphabet, SymbolModel, compile_pattern, parse_pattern


@pytest.fixture
def ab():
    return Alphabet(["a", "b"])


@pytest.fixture
def abbb_dfa(ab):
    return compile_pattern(parse_pattern("a;b;b;b", ab), ab)


@pytest.fixture
def uniform_ab(ab):
    return SymbolModel(ab, 0, 0.0, np.array([[0.5, 0.5]]))
