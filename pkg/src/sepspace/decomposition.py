"""Generalised separable decompositions ``Psi = sum_k p_k A_k (x) B_k``.

The local operators need not be positive.  Two factories are provided: the
maximally entangled state over any orthogonal basis, and arbitrary bipartite
pure states over the matrix-unit basis of their Schmidt basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import OperatorBasis, matrix_unit_basis, verify_basis
from .errors import InputError
from .linalg import as_operator, maxent_state

SCHMIDT_CUTOFF = 1e-12


@dataclass(frozen=True)
class SeparableDecomposition:
    """Weights and paired local operators.

    Weights are stored as given.  Use :attr:`weights_valid` to check that they
    form a probability distribution; corrupted inputs must stay representable
    so that :func:`verify` can reject them.
    """

    dim_a: int
    dim_b: int
    weights: np.ndarray
    a_ops: np.ndarray
    b_ops: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).ravel()
        a = np.asarray(self.a_ops, dtype=complex)
        b = np.asarray(self.b_ops, dtype=complex)
        n = w.size
        if a.shape != (n, self.dim_a, self.dim_a):
            raise InputError(f"a_ops must have shape ({n}, {self.dim_a}, {self.dim_a}), got {a.shape}")
        if b.shape != (n, self.dim_b, self.dim_b):
            raise InputError(f"b_ops must have shape ({n}, {self.dim_b}, {self.dim_b}), got {b.shape}")
        if not np.all(np.isfinite(w)):
            raise InputError("weights must be finite")
        for arr in (w, a, b):
            arr.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "a_ops", a)
        object.__setattr__(self, "b_ops", b)

    def __len__(self):
        return self.weights.size

    @property
    def weights_valid(self) -> bool:
        return bool(np.all(self.weights >= 0) and abs(self.weights.sum() - 1) <= 1e-12)

    def operator(self) -> np.ndarray:
        """The reconstructed bipartite operator ``sum_k p_k A_k (x) B_k``."""
        da, db = self.dim_a, self.dim_b
        T = np.einsum("k,kab,kce->acbe", self.weights, self.a_ops, self.b_ops)
        return T.reshape(da * db, da * db)

    def norm_products(self) -> np.ndarray:
        na = np.linalg.norm(self.a_ops.reshape(len(self), -1), axis=1)
        nb = np.linalg.norm(self.b_ops.reshape(len(self), -1), axis=1)
        return na * nb

    def reordered(self, perm) -> "SeparableDecomposition":
        perm = np.asarray(perm)
        return SeparableDecomposition(
            self.dim_a, self.dim_b, self.weights[perm], self.a_ops[perm], self.b_ops[perm]
        )


def maxent_decomposition(B: OperatorBasis) -> SeparableDecomposition:
    """Uniform mixture of ``C_k (x) conj(C_k)`` over a verified basis.

    For a Hermitian basis ``conj(C_k)`` is the transpose ``C_k^T``.
    """
    report = verify_basis(B)
    if not report.passed:
        failed = [k for k, ok in report.checks.items() if not ok]
        raise InputError(f"basis failed verification: {failed}")
    d = B.dim
    n = d * d
    return SeparableDecomposition(d, d, np.full(n, 1.0 / n), B.operators, B.operators.conj())


def truncate_schmidt(lam, cutoff: float = SCHMIDT_CUTOFF) -> np.ndarray:
    lam = np.asarray(lam, dtype=float).ravel()
    if lam.size == 0 or np.any(lam < -cutoff):
        raise InputError("Schmidt coefficients must be nonnegative and nonempty")
    if abs(np.sum(lam**2) - 1) > 1e-10:
        raise InputError(f"Schmidt vector not normalised: sum of squares = {np.sum(lam**2)!r}")
    return np.sort(lam[lam > cutoff])[::-1]


def pure_state_decomposition(lam) -> SeparableDecomposition:
    """Decomposition of ``sum_i lam_i |ii>`` with ``d**2`` equally weighted terms.

    Term ``(s, t)`` uses ``A = sum_ij a_ij C_ij`` with
    ``a_ij = sqrt(lam_i lam_j / d) * omega**(s*i + t*j)`` over the matrix units
    ``C_ij = sqrt(d)|i><j|``, and ``B = conj(A)``.  The discrete Fourier phases
    make the vectors ``(a_ij^(s,t))_(s,t)`` orthogonal for distinct ``(i, j)``.
    Zero Schmidt coefficients are dropped first.
    """
    lam = truncate_schmidt(lam)
    d = lam.size
    C = matrix_unit_basis(d).operators
    omega = np.exp(2j * np.pi / d)
    idx = np.arange(d)
    amp = np.sqrt(np.outer(lam, lam) / d)
    a_ops = []
    for s in range(d):
        for t in range(d):
            alpha = amp * omega ** (np.add.outer(s * idx, t * idx) % d)
            a_ops.append(np.einsum("k,kab->ab", alpha.ravel(), C))
    a_ops = np.array(a_ops)
    n = d * d
    return SeparableDecomposition(d, d, np.full(n, 1.0 / n), a_ops, a_ops.conj())


@dataclass
class VerifyReport:
    passed: bool
    distance: float
    tol: float
    weights_valid: bool


def verify(D: SeparableDecomposition, target, tol: float = 1e-10) -> VerifyReport:
    """Compare the reconstructed operator with ``target`` in Frobenius distance.

    Passing also requires the weights to be a probability distribution.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    target = as_operator(target, D.dim_a * D.dim_b)
    dist = float(np.linalg.norm(D.operator() - target))
    ok = dist <= tol and D.weights_valid
    return VerifyReport(ok, dist, tol, D.weights_valid)


@dataclass
class DecompositionDiagnostics:
    reconstruction_error: float
    term_count: int
    distinct_a: int
    distinct_b: int
    norm_products: np.ndarray
    match_residual: float
    vectorsep_sum: complex
    vectorsep_expected: complex
    proportionality_residual: float
    all_terms_extremal: bool
    alpha: np.ndarray = field(repr=False)
    beta: np.ndarray = field(repr=False)


def _count_distinct(ops: np.ndarray, tol: float = 1e-10) -> int:
    reps: list[np.ndarray] = []
    for X in ops:
        if not any(np.linalg.norm(X - R) <= tol for R in reps):
            reps.append(X)
    return len(reps)


def expansion_vectors(D: SeparableDecomposition, B: OperatorBasis):
    """``alpha^k`` and ``beta^k`` with ``A_k = sum alpha_i C_i`` and ``B_k = sum conj(beta_j) conj(C_j)``."""
    if D.dim_a != B.dim or D.dim_b != B.dim:
        raise InputError("decomposition and basis dimensions differ")
    d = B.dim
    C = B.operators
    alpha = np.einsum("iab,kab->ki", C.conj(), D.a_ops) / d
    beta = np.einsum("iab,kab->ki", C.conj(), D.b_ops.conj()) / d
    return alpha, beta


def diagnostics(D: SeparableDecomposition, B: OperatorBasis, target=None) -> DecompositionDiagnostics:
    """Coefficient-level checks of a decomposition against a basis.

    ``match_residual`` is the largest deviation of ``d^2 sum_k p_k alpha^k_i conj(beta^k_j)``
    from the value the target requires, ``tr(T (C_i^dagger (x) C_j^T))``; for the
    maximally entangled target (the default) that is the identity matrix.
    """
    alpha, beta = expansion_vectors(D, B)
    d = B.dim
    T = maxent_state(d) if target is None else as_operator(target, d * d)
    C = B.operators
    # expected[i, j] = tr(T (C_i^dagger (x) C_j^T))
    Tt = T.reshape(d, d, d, d)
    expected = np.einsum("acbe,iba,jec->ij", Tt, C.conj().transpose(0, 2, 1), C.transpose(0, 2, 1))
    M = d * d * np.einsum("k,ki,kj->ij", D.weights, alpha, beta.conj())
    inner = np.einsum("ki,ki->k", beta.conj(), alpha)
    na, nb = np.linalg.norm(alpha, axis=1), np.linalg.norm(beta, axis=1)
    products = D.norm_products()
    return DecompositionDiagnostics(
        reconstruction_error=float(np.linalg.norm(D.operator() - T)),
        term_count=len(D),
        distinct_a=_count_distinct(D.a_ops[D.weights > 0]),
        distinct_b=_count_distinct(D.b_ops[D.weights > 0]),
        norm_products=products,
        match_residual=float(np.max(np.abs(M - expected))),
        vectorsep_sum=complex(D.weights @ inner),
        vectorsep_expected=complex(np.trace(expected) / d**2),
        proportionality_residual=max(0.0, float(np.max(na * nb - np.abs(inner)))),
        all_terms_extremal=bool(np.all(np.abs(products - D.dim_a) <= 1e-9)),
        alpha=alpha,
        beta=beta,
    )


def equalize_norms(D: SeparableDecomposition) -> SeparableDecomposition:
    """Rescale terms so every local operator has 2-norm ``sqrt(gamma)``.

    ``gamma = sum_k p_k ||A_k|| ||B_k||``; new weights are proportional to
    ``p_k ||A_k|| ||B_k||``.  Zero-weight terms are dropped.
    """
    keep = D.weights > 0
    w = D.weights[keep]
    a, b = D.a_ops[keep], D.b_ops[keep]
    na = np.linalg.norm(a.reshape(len(w), -1), axis=1)
    nb = np.linalg.norm(b.reshape(len(w), -1), axis=1)
    if np.any(na == 0) or np.any(nb == 0):
        bad = int(np.flatnonzero((na == 0) | (nb == 0))[0])
        raise InputError(f"term {bad} has a zero-norm local operator")
    gamma = float(np.sum(w * na * nb))
    root = np.sqrt(gamma)
    return SeparableDecomposition(
        D.dim_a,
        D.dim_b,
        w * na * nb / gamma,
        a * (root / na)[:, None, None],
        b * (root / nb)[:, None, None],
    )
