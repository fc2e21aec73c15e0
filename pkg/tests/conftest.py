import numpy as np
import pytest
from hypothesis import assume, strategies as st

from ratldp import examples
from ratldp.model import LinearRepresentation, is_primitive, support_ok

MODELS = examples.reference_models()


@pytest.fixture(params=sorted(MODELS))
def reference_model(request):
    return request.param, MODELS[request.param]


@pytest.fixture
def golden():
    return examples.golden_ratio()


@pytest.fixture
def uniform():
    return examples.uniform_two_state()


@pytest.fixture
def nilpotent():
    return examples.nilpotent_b()


def boolean_power_primitive(M) -> bool:
    """Oracle: some boolean power M^k, k <= (m-1)^2 + 1, is entrywise positive."""
    g = (np.asarray(M) > 0).astype(np.int64)
    m = g.shape[0]
    p = g.copy()
    for _ in range((m - 1) ** 2 + 1):
        if p.all():
            return True
        p = ((p @ g) > 0).astype(np.int64)
    return False


_entry = st.one_of(st.just(0.0), st.floats(0.1, 2.0))


@st.composite
def representations(draw, max_dim=4):
    """Random valid representations with A+B primitive."""
    m = draw(st.integers(1, max_dim))
    vec = st.lists(_entry, min_size=m, max_size=m)
    mat = st.lists(vec, min_size=m, max_size=m)
    xi, a, b, eta = draw(vec), draw(mat), draw(mat), draw(vec)
    assume(any(xi) and any(eta))
    assume(any(map(any, a)) and any(map(any, b)))
    rep = LinearRepresentation(xi, a, b, eta)
    assume(is_primitive(rep.total_matrix) and support_ok(rep))
    return rep


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
