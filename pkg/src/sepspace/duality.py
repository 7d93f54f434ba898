"""Positivity of operators with respect to restricted measurement sets.

An operator ``X`` is in the dual of a measurement family when every POVM
element ``M`` of every member gives ``tr(X M) >= 0``.  Local operators of a
separable decomposition that lie in these duals yield hidden-variable models.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .basis import OperatorBasis
from .errors import ConvergenceError, InputError
from .linalg import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, as_operator, is_psd, random_density_matrix

DUAL_TOL = 1e-10


@dataclass(frozen=True)
class Povm:
    dim: int
    elements: np.ndarray

    def __post_init__(self):
        E = np.asarray(self.elements, dtype=complex)
        if E.ndim != 3 or E.shape[1:] != (self.dim, self.dim) or E.shape[0] == 0:
            raise InputError(f"POVM elements must have shape (n, {self.dim}, {self.dim})")
        for a, M in enumerate(E):
            if not is_psd(M, DUAL_TOL):
                raise InputError(f"POVM element {a} is not positive semidefinite")
        if np.max(np.abs(E.sum(axis=0) - np.eye(self.dim))) > 1e-10:
            raise InputError("POVM elements do not sum to the identity")
        E.setflags(write=False)
        object.__setattr__(self, "elements", E)

    def __len__(self):
        return self.elements.shape[0]

    def transposed(self) -> "Povm":
        return Povm(self.dim, np.transpose(self.elements, (0, 2, 1)))


@dataclass(frozen=True)
class MeasurementFamily:
    povms: tuple[Povm, ...]

    def __post_init__(self):
        povms = tuple(self.povms)
        if not povms:
            raise InputError("measurement family is empty")
        if len({P.dim for P in povms}) != 1:
            raise InputError("POVMs in a family must share a dimension")
        object.__setattr__(self, "povms", povms)

    @property
    def dim(self) -> int:
        return self.povms[0].dim

    def __len__(self):
        return len(self.povms)

    def __getitem__(self, i) -> Povm:
        return self.povms[i]

    def transposed(self) -> "MeasurementFamily":
        return MeasurementFamily(tuple(P.transposed() for P in self.povms))


def projective_povm(r) -> Povm:
    """Two-outcome qubit measurement ``{(1 + r.sigma)/2, (1 - r.sigma)/2}`` along unit ``r``."""
    r = np.asarray(r, dtype=float)
    S = r[0] * PAULI_X + r[1] * PAULI_Y + r[2] * PAULI_Z
    return Povm(2, np.array([(PAULI_I + S) / 2, (PAULI_I - S) / 2]))


def pauli_family() -> MeasurementFamily:
    """Sharp X, Y and Z measurements, outcome ``+1`` first."""
    return MeasurementFamily(tuple(projective_povm(e) for e in np.eye(3)))


def trivial_family(d: int) -> MeasurementFamily:
    return MeasurementFamily((Povm(d, np.eye(d, dtype=complex)[None]),))


@dataclass(frozen=True)
class GeneratorSet:
    """Generators of a cone; with ``include_quantum`` all density matrices are added."""

    dim: int
    generators: np.ndarray
    include_quantum: bool = False

    def __post_init__(self):
        G = np.asarray(self.generators, dtype=complex)
        if G.ndim != 3 or G.shape[1:] != (self.dim, self.dim) or G.shape[0] == 0:
            raise InputError(f"generators must have shape (n, {self.dim}, {self.dim}), n >= 1")
        G.setflags(write=False)
        object.__setattr__(self, "generators", G)

    @classmethod
    def from_basis(cls, B: OperatorBasis, include_quantum: bool = False) -> "GeneratorSet":
        return cls(B.dim, B.operators, include_quantum)


def is_in_dual(X, F: MeasurementFamily, tol: float = DUAL_TOL) -> bool:
    """Whether ``Re tr(X M) >= -tol`` for every element of every POVM in ``F``."""
    return dual_violation(X, F, tol) is None


def dual_violation(X, F: MeasurementFamily, tol: float = DUAL_TOL):
    """First ``(povm index, element index, value)`` with ``Re tr(X M) < -tol``, else ``None``."""
    X = as_operator(X)
    if X.shape[0] != F.dim:
        raise InputError(f"operator dimension {X.shape[0]} does not match family dimension {F.dim}")
    for m, P in enumerate(F.povms):
        vals = np.einsum("ab,kba->k", X, P.elements).real
        bad = np.flatnonzero(vals < -tol)
        if bad.size:
            return m, int(bad[0]), float(vals[bad[0]])
    return None


def measurement_compatible(M, G: GeneratorSet, tol: float = DUAL_TOL) -> bool:
    """Whether the effect ``M`` is nonnegative on the whole cone generated by ``G``.

    Against the density matrices this is positive semidefiniteness of ``M``.
    """
    M = as_operator(M)
    if M.shape[0] != G.dim:
        raise InputError(f"effect dimension {M.shape[0]} does not match generator dimension {G.dim}")
    if not np.all(np.einsum("ab,kba->k", M, G.generators).real >= -tol):
        return False
    if G.include_quantum:
        return is_psd(M, tol)
    return True


@dataclass
class ConeCertificate:
    member: bool
    residual: float
    coefficients: np.ndarray | None


def cone_membership(X, G: GeneratorSet, tol: float = 1e-10) -> ConeCertificate:
    """Decide ``X in conic(G)`` by nonnegative least squares on the real-stacked generators."""
    if G.include_quantum:
        raise InputError("cone membership is only decided for finite generator sets")
    X = as_operator(X, G.dim)
    n = G.generators.shape[0]
    cols = G.generators.reshape(n, -1).T
    A = np.vstack([cols.real, cols.imag])
    b = np.concatenate([X.ravel().real, X.ravel().imag])
    try:
        c, res = nnls(A, b, maxiter=50 * n)
    except RuntimeError as exc:
        raise ConvergenceError(f"NNLS did not converge: {exc}") from exc
    member = res <= tol
    return ConeCertificate(bool(member), float(res), c if member else None)


@dataclass
class ProbeReport:
    dim: int
    trials: int
    bound_sq: float
    max_norm_sq: float
    max_basis_identity_error: float
    max_certificate_slack: float
    density_samples: int
    max_density_norm: float
    vertex_norms: np.ndarray
    passed: bool


def unit_trace_extremality_probe(
    G: GeneratorSet, trials: int = 10_000, seed: int = 0, max_weight: float = 1 - 1e-3
) -> ProbeReport:
    """Sample unit-trace points of ``conic(W u Q)`` and check none but the vertices reach norm ``sqrt(d)``.

    Samples are convex mixtures of the unit-trace generators ``W`` and up to two
    random density matrices; any sample whose largest weight exceeds
    ``max_weight`` is redrawn.  A quarter of the trials are pure density-matrix
    samples.  Each mixed sample also gets the triangle-inequality certificate
    ``||X|| <= s ||Y|| + (1 - s) ||Z|| < sqrt(d)`` where ``Y`` is its normalised
    generator part and ``Z`` its density-matrix part.
    """
    if not G.include_quantum:
        raise InputError("the probe expects a generator set that includes the quantum states")
    W = G.generators
    d = G.dim
    traces = np.trace(W, axis1=1, axis2=2)
    if np.max(np.abs(traces - 1)) > 1e-10:
        raise InputError("probe generators must have unit trace")
    n = W.shape[0]
    rng = np.random.default_rng(seed)
    root_d = np.sqrt(d)

    max_norm_sq = 0.0
    identity_err = 0.0
    slack = -np.inf
    dens_count = 0
    dens_max = 0.0
    for t in range(trials):
        if t % 4 == 3:
            rho = random_density_matrix(d, rng, rank=int(rng.integers(1, d + 1)))
            dens_count += 1
            dens_max = max(dens_max, float(np.linalg.norm(rho)))
            continue
        m = int(rng.integers(0, 3))
        while True:
            w = rng.dirichlet(np.ones(n + m))
            if w.max() <= max_weight:
                break
        q, r = w[:n], w[n:]
        Y = np.einsum("i,iab->ab", q, W)
        if m == 0:
            X = Y
            identity_err = max(identity_err, abs(np.linalg.norm(X) ** 2 - d * np.sum(q**2)))
            cert = np.linalg.norm(X)
        else:
            rhos = [random_density_matrix(d, rng, rank=int(rng.integers(1, d + 1))) for _ in range(m)]
            Z = sum(rj * rho for rj, rho in zip(r, rhos))
            X = Y + Z
            cert = np.linalg.norm(Y) + np.linalg.norm(Z)
        max_norm_sq = max(max_norm_sq, float(np.linalg.norm(X) ** 2))
        slack = max(slack, float(cert - root_d))

    vertex_norms = np.linalg.norm(W.reshape(n, -1), axis=1)
    bound_sq = d * max_weight
    passed = (
        max_norm_sq <= bound_sq + 1e-9
        and dens_max <= 1 + 1e-10
        and slack < 0
        and identity_err <= 1e-10
        and bool(np.all(np.abs(vertex_norms - root_d) <= 1e-10))
    )
    return ProbeReport(
        dim=d,
        trials=trials,
        bound_sq=bound_sq,
        max_norm_sq=max_norm_sq,
        max_basis_identity_error=identity_err,
        max_certificate_slack=slack,
        density_samples=dens_count,
        max_density_norm=dens_max,
        vertex_norms=vertex_norms,
        passed=passed,
    )


def qubit_region_predicate(r, vertices, tol: float = DUAL_TOL) -> np.ndarray:
    """Closed-form compatibility of ``1 + r.sigma`` with the cone of ``rho(c)`` and all qubit states.

    ``r`` has shape ``(..., 3)``; ``vertices`` are the Bloch vectors ``c``.
    """
    r = np.asarray(r, dtype=float)
    V = np.asarray(vertices, dtype=float)
    in_ball = np.linalg.norm(r, axis=-1) - 1 <= tol
    faces = np.all(1 + r @ V.T >= -tol, axis=-1)
    return in_ball & faces
