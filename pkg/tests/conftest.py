import numpy as np
import pytest

from sepspace.linalg import bloch_operator

# Qubit tetrahedron decomposition of the maxent state: (A-side Bloch vector, B-side Bloch vector) per term.
FIG1_TERMS = [
    ((1, 1, 1), (1, -1, 1)),
    ((-1, -1, 1), (-1, 1, 1)),
    ((1, -1, -1), (1, 1, -1)),
    ((-1, 1, -1), (-1, -1, -1)),
]

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fig1():
    from sepspace.decomposition import SeparableDecomposition

    a = np.array([bloch_operator(x) for x, _ in FIG1_TERMS])
    b = np.array([bloch_operator(y) for _, y in FIG1_TERMS])
    return SeparableDecomposition(2, 2, np.full(4, 0.25), a, b)


def random_operator(d, rng):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def random_hermitian(d, rng):
    X = random_operator(d, rng)
    return (X + X.conj().T) / 2


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
