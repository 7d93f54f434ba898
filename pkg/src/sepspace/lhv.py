"""Local hidden variable models read off from separable decompositions.

With ``Psi = sum_k p_k A_k (x) B_k`` and unit-trace local operators in the
duals of the measured families, the hidden variable ``k`` is drawn with
probability ``p_k`` and each side answers with weights ``tr(M_a A_k)`` and
``tr(N_b B_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomposition import SeparableDecomposition
from .duality import DUAL_TOL, MeasurementFamily, dual_violation
from .errors import InputError, PreconditionError
from .linalg import as_operator


@dataclass(frozen=True)
class LhvModel:
    """``responses_a[m][k, a]`` is the weight of outcome ``a`` of POVM ``m`` given ``k``."""

    hidden_probs: np.ndarray
    responses_a: tuple[np.ndarray, ...]
    responses_b: tuple[np.ndarray, ...]

    @property
    def settings(self) -> tuple[int, int]:
        return len(self.responses_a), len(self.responses_b)

    def outcomes(self, side: str, setting: int) -> int:
        table = self.responses_a if side == "a" else self.responses_b
        return table[setting].shape[1]


def _responses(ops: np.ndarray, F: MeasurementFamily) -> tuple[np.ndarray, ...]:
    return tuple(np.einsum("kab,mba->km", ops, P.elements).real for P in F.povms)


def lhv_from_decomposition(
    D: SeparableDecomposition, FA: MeasurementFamily, FB: MeasurementFamily
) -> LhvModel:
    """Build the model; every local operator must be unit trace and in the relevant dual."""
    if FA.dim != D.dim_a or FB.dim != D.dim_b:
        raise InputError("measurement families do not match the decomposition dimensions")
    if not D.weights_valid:
        raise InputError("decomposition weights are not a probability distribution")
    for side, ops in (("A", D.a_ops), ("B", D.b_ops)):
        tr = np.trace(ops, axis1=1, axis2=2)
        bad = np.flatnonzero(np.abs(tr - 1) > 1e-10)
        if bad.size:
            raise InputError(f"{side}_{int(bad[0]) + 1} has trace {tr[bad[0]]:.6g}, expected 1")
    for side, ops, F in (("A", D.a_ops, FA), ("B", D.b_ops, FB)):
        for k, X in enumerate(ops):
            hit = dual_violation(X, F, DUAL_TOL)
            if hit is not None:
                m, a, val = hit
                raise PreconditionError(
                    f"{side}_{k + 1} is not in the dual: tr(M X) = {val:.6g} "
                    f"for term k={k + 1}, POVM {m}, element {a}"
                )
    return LhvModel(D.weights.copy(), _responses(D.a_ops, FA), _responses(D.b_ops, FB))


def _check(model: LhvModel, a_setting, a_out, b_setting, b_out) -> None:
    na, nb = model.settings
    if not (0 <= a_setting < na and 0 <= b_setting < nb):
        raise InputError(f"setting out of range: ({a_setting}, {b_setting}) with {na}x{nb} settings")
    if not (0 <= a_out < model.outcomes("a", a_setting) and 0 <= b_out < model.outcomes("b", b_setting)):
        raise InputError(f"outcome out of range: ({a_out}, {b_out})")


def lhv_joint(model: LhvModel, a_setting: int, a_out: int, b_setting: int, b_out: int) -> float:
    _check(model, a_setting, a_out, b_setting, b_out)
    ra = model.responses_a[a_setting][:, a_out]
    rb = model.responses_b[b_setting][:, b_out]
    return float(np.sum(model.hidden_probs * ra * rb))


def lhv_table(model: LhvModel, a_setting: int, b_setting: int) -> np.ndarray:
    """Joint outcome probabilities, rows indexed by A's outcome."""
    _check(model, a_setting, 0, b_setting, 0)
    ra = model.responses_a[a_setting]
    rb = model.responses_b[b_setting]
    return np.einsum("k,ka,kb->ab", model.hidden_probs, ra, rb)


def quantum_joint(state, Ma, Nb) -> float:
    """Born-rule probability ``Re tr((Ma (x) Nb) state)`` clipped to ``[0, 1]``."""
    Ma, Nb = as_operator(Ma), as_operator(Nb)
    state = as_operator(state)
    if state.shape[0] != Ma.shape[0] * Nb.shape[0]:
        raise InputError("state dimension does not match the measurement operators")
    p = float(np.trace(np.kron(Ma, Nb) @ state).real)
    return float(np.clip(p, 0.0, 1.0))


def quantum_table(state, FA: MeasurementFamily, FB: MeasurementFamily, a_setting: int, b_setting: int) -> np.ndarray:
    PA, PB = FA[a_setting], FB[b_setting]
    return np.array([[quantum_joint(state, M, N) for N in PB.elements] for M in PA.elements])


def lhv_sample(
    model: LhvModel, a_setting: int, b_setting: int, shots: int, seed: int = 0, chunks: int = 1
) -> np.ndarray:
    """Outcome counts from simulating the model ``shots`` times.

    Draws ``k`` from the hidden distribution, then the two outcomes
    independently given ``k``.  Shots are split into ``chunks`` ranges, each
    with its own child seed of ``seed``, so a fixed partition is reproducible.
    """
    if shots < 1:
        raise InputError("shots must be at least 1")
    _check(model, a_setting, 0, b_setting, 0)
    ra = np.clip(model.responses_a[a_setting], 0, None)
    rb = np.clip(model.responses_b[b_setting], 0, None)
    ra = ra / ra.sum(axis=1, keepdims=True)
    rb = rb / rb.sum(axis=1, keepdims=True)
    p = np.clip(model.hidden_probs, 0, None)
    p = p / p.sum()
    counts = np.zeros((ra.shape[1], rb.shape[1]), dtype=np.int64)
    sizes = np.full(chunks, shots // chunks)
    sizes[: shots % chunks] += 1
    for size, child in zip(sizes, np.random.SeedSequence(seed).spawn(chunks)):
        rng = np.random.default_rng(child)
        for k, nk in enumerate(rng.multinomial(size, p)):
            if nk:
                cell = np.outer(ra[k], rb[k]).ravel()
                counts += rng.multinomial(nk, cell / cell.sum()).reshape(counts.shape)
    return counts


def correlator(table: np.ndarray) -> float:
    """``<A B>`` for a two-outcome table with outcome values ``(+1, -1)``."""
    if table.shape != (2, 2):
        raise InputError("correlator needs a 2x2 table")
    return float(table[0, 0] + table[1, 1] - table[0, 1] - table[1, 0])
