"""Orthogonal operator bases normalised to ``tr(C_i C_j^dagger) = d delta_ij``.

Every factory returns an :class:`OperatorBasis` whose elements all have 2-norm
``sqrt(d)``.  Hermitian bases with this normalisation are exactly the vertex
sets whose convex hulls (and the hulls of their transposes) make the maximally
entangled state separable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, InputError, UnsupportedDimensionError
from .linalg import as_operator, bloch_operator, dagger, frobenius_norm, is_hermitian

GRAM_TOL = 1e-10
TRACE_TOL = 1e-10


class BasisKind(str, enum.Enum):
    GELL_MANN = "GellMann"
    PHASE_POINT = "PhasePoint"
    UNIT_TRACE = "UnitTraceRandom"
    POSITIVE_TRACE = "PositiveTraceRandom"
    MATRIX_UNIT = "MatrixUnit"
    CUSTOM = "Custom"

    @classmethod
    def parse(cls, name: str) -> "BasisKind":
        """Accept the serialised name or the CLI spelling (``phase-point`` etc.)."""
        if isinstance(name, cls):
            return name
        for kind in cls:
            if name in (kind.value, kind.cli_name):
                return kind
        raise InputError(f"unknown basis kind {name!r}")

    @property
    def cli_name(self) -> str:
        return {
            "GellMann": "gell-mann",
            "PhasePoint": "phase-point",
            "UnitTraceRandom": "unit-trace",
            "PositiveTraceRandom": "positive-trace",
            "MatrixUnit": "matrix-unit",
            "Custom": "custom",
        }[self.value]


@dataclass(frozen=True)
class OperatorBasis:
    """``d**2`` operators stacked in an array of shape ``(d*d, d, d)``."""

    dim: int
    operators: np.ndarray
    kind: BasisKind = BasisKind.CUSTOM
    hermitian: bool = True

    def __post_init__(self):
        ops = np.asarray(self.operators, dtype=complex)
        if ops.ndim != 3 or ops.shape[1:] != (self.dim, self.dim):
            raise InputError(f"operators must have shape (n, {self.dim}, {self.dim}), got {ops.shape}")
        ops.setflags(write=False)
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "kind", BasisKind.parse(self.kind))

    def __len__(self):
        return self.operators.shape[0]

    def __getitem__(self, i):
        return self.operators[i]

    def __iter__(self):
        return iter(self.operators)

    def gram(self) -> np.ndarray:
        """Matrix of pairings ``tr(C_i C_j^dagger)``."""
        flat = self.operators.reshape(len(self), -1)
        return flat @ flat.conj().T

    def transposed(self) -> np.ndarray:
        return np.transpose(self.operators, (0, 2, 1))


def gell_mann_basis(d: int) -> OperatorBasis:
    """Identity followed by the generalised Gell-Mann matrices, all scaled to norm ``sqrt(d)``.

    Order: identity, then for each ``j < k`` the symmetric and antisymmetric
    off-diagonal pair, then the diagonal generators.  At ``d = 2`` this is
    ``(1, X, Y, Z)``.
    """
    if d < 1:
        raise InputError("dimension must be positive")
    ops = [np.eye(d, dtype=complex)]
    for j in range(d):
        for k in range(j + 1, d):
            S = np.zeros((d, d), dtype=complex)
            S[j, k] = S[k, j] = 1
            A = np.zeros((d, d), dtype=complex)
            A[j, k], A[k, j] = -1j, 1j
            ops += [S, A]
    for l in range(1, d):
        D = np.zeros((d, d), dtype=complex)
        D[np.arange(l), np.arange(l)] = 1
        D[l, l] = -l
        ops.append(D * np.sqrt(2 / (l * (l + 1))))
    scale = np.sqrt(d / 2)
    ops = [ops[0]] + [scale * G for G in ops[1:]]
    return OperatorBasis(d, np.array(ops), BasisKind.GELL_MANN, True)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


# Fig-1 tetrahedron, indexed by (q, p): Bloch vector ((-1)^p, (-1)^(q+p), (-1)^q).
_QUBIT_VERTICES = [(1, 1, 1), (-1, -1, 1), (1, -1, -1), (-1, 1, -1)]


def displacement(d: int, q: int, p: int) -> np.ndarray:
    """``tau^(qp) X^q Z^p`` with ``tau = omega^((d+1)/2)``; ``d`` odd."""
    omega = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(omega ** np.arange(d))
    tau_exp = (q * p * (d + 1) // 2) % d
    return omega**tau_exp * np.linalg.matrix_power(shift, q % d) @ np.linalg.matrix_power(clock, p % d)


def phase_point_basis(d: int) -> OperatorBasis:
    """Wootters phase-point operators ``A(q, p)`` for prime ``d``, row-major in ``(q, p)``."""
    if not _is_prime(d):
        raise UnsupportedDimensionError(f"phase-point operators are only built for prime d, got {d}")
    if d == 2:
        ops = np.array([bloch_operator(v) for v in _QUBIT_VERTICES])
        return OperatorBasis(2, ops, BasisKind.PHASE_POINT, True)
    omega = np.exp(2j * np.pi / d)
    D = {(a, b): displacement(d, a, b) for a in range(d) for b in range(d)}
    ops = []
    for q in range(d):
        for p in range(d):
            A = sum(omega ** ((b * q - a * p) % d) * D[a, b] for (a, b) in D) / d
            ops.append((A + dagger(A)) / 2)
    return OperatorBasis(d, np.array(ops), BasisKind.PHASE_POINT, True)


def _rotate(d: int, O: np.ndarray, kind: BasisKind) -> OperatorBasis:
    """Basis whose ``k``-th element is ``sum_i O[k, i] G_i`` over the Gell-Mann basis."""
    G = gell_mann_basis(d).operators
    ops = np.einsum("ki,iab->kab", O, G)
    ops = (ops + np.conj(np.transpose(ops, (0, 2, 1)))) / 2
    return OperatorBasis(d, ops, kind, True)


def _haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    if n == 0:
        return np.zeros((0, 0))
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def unit_trace_basis(d: int, seed: int = 0) -> OperatorBasis:
    """Random Hermitian unit-trace basis.

    The coefficient matrix is ``H @ diag(1, R)`` where ``H`` is the Householder
    reflection sending ``e_1`` to the all-``1/d`` vector and ``R`` is a seeded
    random orthogonal matrix, so every element's identity component is exactly
    ``1/d``.
    """
    if d < 2:
        raise InputError("unit_trace_basis needs d >= 2")
    n = d * d
    rng = np.random.default_rng(seed)
    u = np.full(n, 1.0 / d)
    w = u.copy()
    w[0] -= 1.0
    H = np.eye(n) - 2 * np.outer(w, w) / (w @ w) if w @ w > 0 else np.eye(n)
    R = np.eye(n)
    R[1:, 1:] = _haar_orthogonal(n - 1, rng)
    return _rotate(d, H @ R, BasisKind.UNIT_TRACE)


def _gram_schmidt(V: np.ndarray, tol: float = 1e-8) -> np.ndarray | None:
    """Modified Gram-Schmidt with one re-orthogonalisation pass on the columns of ``V``.

    Returns ``None`` if a residual norm falls below ``tol``.
    """
    Q = np.zeros_like(V)
    for k in range(V.shape[1]):
        v = V[:, k].copy()
        for _ in range(2):
            for j in range(k):
                v -= (Q[:, j] @ v) * Q[:, j]
        nrm = np.linalg.norm(v)
        if nrm < tol:
            return None
        Q[:, k] = v / nrm
    return Q


def positive_trace_basis(d: int, seed: int = 0, max_attempts: int = 10) -> OperatorBasis:
    """Random Hermitian basis in which every element has strictly positive trace.

    A random entrywise-positive unit vector becomes the first column of the
    coefficient matrix, and the remaining columns are completed by Gram-Schmidt
    on Gaussian vectors; row ``k`` then holds the coefficients of element ``k``,
    whose identity component is the positive entry ``u_k``.
    """
    if d < 2:
        raise InputError("positive_trace_basis needs d >= 2")
    n = d * d
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        u = np.abs(rng.standard_normal(n)) + 1.0 / n
        V = np.column_stack([u, rng.standard_normal((n, n - 1))])
        O = _gram_schmidt(V)
        if O is not None and np.all(O[:, 0] > 0):
            return _rotate(d, O, BasisKind.POSITIVE_TRACE)
    raise ConvergenceError(f"Gram-Schmidt degenerate in {max_attempts} attempts")


def matrix_unit_basis(d: int) -> OperatorBasis:
    """``sqrt(d) |i><j|`` in row-major ``(i, j)`` order; not Hermitian for ``d > 1``."""
    if d < 1:
        raise InputError("dimension must be positive")
    ops = np.sqrt(d) * np.eye(d * d, dtype=complex).reshape(d * d, d, d)
    return OperatorBasis(d, ops, BasisKind.MATRIX_UNIT, d == 1)


FACTORIES = {
    BasisKind.GELL_MANN: lambda d, seed: gell_mann_basis(d),
    BasisKind.PHASE_POINT: lambda d, seed: phase_point_basis(d),
    BasisKind.UNIT_TRACE: unit_trace_basis,
    BasisKind.POSITIVE_TRACE: positive_trace_basis,
    BasisKind.MATRIX_UNIT: lambda d, seed: matrix_unit_basis(d),
}


def make_basis(kind: str | BasisKind, d: int, seed: int = 0) -> OperatorBasis:
    kind = BasisKind.parse(kind)
    if kind not in FACTORIES:
        raise InputError(f"no factory for basis kind {kind.value!r}")
    return FACTORIES[kind](d, seed)


def coefficients(X, B: OperatorBasis) -> np.ndarray:
    """Expansion coefficients ``x_i = tr(X C_i^dagger) / d``."""
    X = as_operator(X, B.dim)
    return np.einsum("iab,ab->i", B.operators.conj(), X) / B.dim


def reconstruct(x, B: OperatorBasis) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (len(B),):
        raise InputError(f"expected {len(B)} coefficients, got {x.shape}")
    return np.einsum("i,iab->ab", x, B.operators)


@dataclass
class BasisReport:
    dim: int
    kind: str
    size: int
    gram_residual: float
    gram_argmax: tuple[int, int]
    norm_residual: float
    hermitian_residual: float
    trace_residual: float | None
    min_real_trace: float
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def verify_basis(B: OperatorBasis, tol: float = GRAM_TOL) -> BasisReport:
    """Check the basis axioms; failures are reported, never raised."""
    d, n = B.dim, len(B)
    dev = np.abs(B.gram() - d * np.eye(n))
    i, j = np.unravel_index(np.argmax(dev), dev.shape)
    norms = np.array([frobenius_norm(C) for C in B])
    herm = max(float(np.max(np.abs(C - dagger(C)))) for C in B)
    traces = np.trace(B.operators, axis1=1, axis2=2)
    unit_kind = B.kind in (BasisKind.UNIT_TRACE, BasisKind.PHASE_POINT)
    trace_res = float(np.max(np.abs(traces - 1))) if unit_kind else None

    checks = {
        "size": n == d * d,
        "gram": float(dev.max()) <= tol,
        "norms": float(np.max(np.abs(norms - np.sqrt(d)))) <= tol,
    }
    if B.hermitian:
        checks["hermitian"] = all(is_hermitian(C) for C in B)
    if unit_kind:
        checks["unit_trace"] = trace_res <= TRACE_TOL
    if B.kind is BasisKind.POSITIVE_TRACE:
        checks["positive_trace"] = bool(np.all(traces.real > 0))
    return BasisReport(
        dim=d,
        kind=B.kind.value,
        size=n,
        gram_residual=float(dev.max()),
        gram_argmax=(int(i), int(j)),
        norm_residual=float(np.max(np.abs(norms - np.sqrt(d)))),
        hermitian_residual=herm,
        trace_residual=trace_res,
        min_real_trace=float(traces.real.min()),
        checks=checks,
    )


def spectrum_report(B: OperatorBasis, decimals: int = 8) -> dict:
    """Per-element spectra and the number of distinct spectra (up to rounding)."""
    if not B.hermitian:
        raise InputError("spectra are only reported for Hermitian bases")
    spectra = np.linalg.eigvalsh(B.operators)[:, ::-1]
    distinct = {tuple(np.round(s, decimals)) for s in spectra}
    return {"spectra": spectra, "distinct": len(distinct)}


def hull_norms(B: OperatorBasis, trials: int, seed: int = 0, max_weight: float = 1 - 1e-3):
    """Squared 2-norms of random convex combinations of the basis elements.

    Weights are Dirichlet draws; samples whose largest weight exceeds
    ``max_weight`` are redrawn.  Returns ``(weights, norm_sq)``.
    """
    rng = np.random.default_rng(seed)
    n = len(B)
    Q = np.empty((0, n))
    while Q.shape[0] < trials:
        draw = rng.dirichlet(np.ones(n), size=trials)
        Q = np.vstack([Q, draw[draw.max(axis=1) <= max_weight]])
    Q = Q[:trials]
    X = np.einsum("ti,iab->tab", Q, B.operators)
    return Q, np.sum(np.abs(X) ** 2, axis=(1, 2))
