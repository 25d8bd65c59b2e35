import numpy as np
import pytest
from hypothesis import strategies as st

from gl2lorentz.algebra import AlgebraVector, GroupPoint

_ACCEPTANCE_LINES: list[str] = []

finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False, allow_subnormal=False)
coeffs = st.lists(finite, min_size=4, max_size=4).map(np.array)
vectors = coeffs.map(AlgebraVector)


@st.composite
def group_points(draw, lo=0.1, hi=10.0):
    m = np.array(draw(st.lists(finite, min_size=4, max_size=4))).reshape(2, 2)
    d = np.linalg.det(m)
    from hypothesis import assume

    assume(lo < abs(d) < hi)
    if d < 0:
        m[0] *= -1
    return GroupPoint(m)


@st.composite
def spd_matrices(draw):
    a = np.array(draw(st.lists(finite, min_size=4, max_size=4))).reshape(2, 2)
    return a @ a.T + 0.2 * np.eye(2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_group_point(rng, lo=0.1, hi=10.0) -> GroupPoint:
    while True:
        m = rng.normal(size=(2, 2))
        d = np.linalg.det(m)
        if lo < abs(d) < hi:
            if d < 0:
                m[0] *= -1
            return GroupPoint(m)


def random_lightlike(rng) -> AlgebraVector:
    while True:
        a, b, d = rng.normal(size=3)
        if abs(b) > 0.1:
            return AlgebraVector.from_matrix(np.array([[a, b], [-(a * a + d * d) / (2 * b), d]]))


@pytest.fixture
def report():
    """Record one acceptance line; echoed in the terminal summary."""

    def _record(label: str, ok: bool, detail: str) -> None:
        line = f"{label}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        _ACCEPTANCE_LINES.append(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0][2:])):
            terminalreporter.write_line(line)
