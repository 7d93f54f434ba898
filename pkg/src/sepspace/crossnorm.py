"""Projective tensor norm values for pure states and product-size accounting."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .decomposition import SCHMIDT_CUTOFF, SeparableDecomposition
from .errors import InputError
from .linalg import as_operator, frobenius_norm


def schmidt_coefficients(state, dim_a: int, dim_b: int) -> np.ndarray:
    """Singular values of the ``dim_a x dim_b`` amplitude matrix, nonincreasing."""
    psi = np.asarray(state, dtype=complex).ravel()
    if psi.size != dim_a * dim_b:
        raise InputError(f"state has {psi.size} amplitudes, expected {dim_a * dim_b}")
    if abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise InputError("state vector is not normalised")
    return np.linalg.svd(psi.reshape(dim_a, dim_b), compute_uv=False)


def check_schmidt(lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float).ravel()
    if lam.size == 0 or np.any(lam < 0) or np.any(np.diff(lam) > SCHMIDT_CUTOFF):
        raise InputError("Schmidt vector must be nonempty, nonnegative and nonincreasing")
    if abs(np.sum(lam**2) - 1) > 1e-10:
        raise InputError("Schmidt vector not normalised")
    return lam


def gamma2_pure(lam) -> float:
    """``(sum_i lam_i)**2``: the projective 2-norm of a pure state with Schmidt vector ``lam``."""
    return float(np.sum(check_schmidt(lam)) ** 2)


def decomposition_cross_bound(D: SeparableDecomposition) -> tuple[float, float]:
    """``(sum_k p_k ||A_k|| ||B_k||, max_k ||A_k|| ||B_k||)``, both upper bounds on the cross norm."""
    prods = D.norm_products()
    active = D.weights > 0
    return float(D.weights @ prods), float(prods[active].max()) if active.any() else 0.0


def product_size(gen_a: Sequence, gen_b: Sequence) -> float:
    """Product of the largest 2-norms on each side.

    By convexity of the norm this is also the product size of the convex hulls.
    """
    if len(gen_a) == 0 or len(gen_b) == 0:
        raise InputError("generator lists must be nonempty")
    na = max(frobenius_norm(as_operator(X)) for X in gen_a)
    nb = max(frobenius_norm(as_operator(X)) for X in gen_b)
    return na * nb
