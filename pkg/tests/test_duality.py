import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_hermitian
from sepspace.basis import phase_point_basis, unit_trace_basis
from sepspace.duality import (
    GeneratorSet,
    MeasurementFamily,
    Povm,
    cone_membership,
    dual_violation,
    is_in_dual,
    measurement_compatible,
    pauli_family,
    projective_povm,
    qubit_region_predicate,
    trivial_family,
    unit_trace_extremality_probe,
)
from sepspace.errors import InputError
from sepspace.linalg import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, bloch_operator, bloch_vector

TETRA = np.array([(1, 1, 1), (-1, -1, 1), (1, -1, -1), (-1, 1, -1)], dtype=float)


def effect(r):
    return PAULI_I + r[0] * PAULI_X + r[1] * PAULI_Y + r[2] * PAULI_Z


@pytest.fixture
def tetra_quantum():
    return GeneratorSet.from_basis(phase_point_basis(2), include_quantum=True)


def test_povm_validation():
    with pytest.raises(InputError):
        Povm(2, [np.diag([1, 0]), np.diag([0, 0.5])])
    with pytest.raises(InputError):
        Povm(2, [np.diag([1.5, 1]), np.diag([-0.5, 0])])
    with pytest.raises(InputError):
        MeasurementFamily(())
    with pytest.raises(InputError):
        MeasurementFamily((trivial_family(2)[0], trivial_family(3)[0]))


def test_is_in_dual_examples(rng):
    for d in (2, 3):
        G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        M = G @ G.conj().T
        M /= 2 * np.linalg.eigvalsh(M).max()
        F = MeasurementFamily((Povm(d, [M, np.eye(d) - M]),))
        assert is_in_dual(np.eye(d) / d, F)
    assert is_in_dual(bloch_operator((1, 1, 1)), pauli_family())
    Fx = MeasurementFamily((projective_povm((1, 0, 0)),))
    X = bloch_operator((2, 0, 0))
    assert np.trace(X @ Fx[0].elements[1]).real == pytest.approx(-0.5)
    assert not is_in_dual(X, Fx)
    assert dual_violation(X, Fx) == (0, 1, pytest.approx(-0.5))
    with pytest.raises(InputError):
        is_in_dual(np.eye(3), Fx)


def test_bloch_cube_is_pauli_positive():
    for v in np.array(np.meshgrid([-1, 1], [-1, 1], [-1, 1])).T.reshape(-1, 3):
        assert is_in_dual(bloch_operator(v), pauli_family())
    assert not is_in_dual(bloch_operator((1.01, 0, 0)), pauli_family())


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 10), st.floats(0, 10))
def test_dual_is_a_convex_cone(seed, a, b):
    rng = np.random.default_rng(seed)
    F = pauli_family()
    pts = [bloch_operator(rng.uniform(-1, 1, 3)) for _ in range(2)]
    assert all(is_in_dual(X, F) for X in pts)
    assert is_in_dual(a * pts[0] + b * pts[1], F)


def test_measurement_compatible_examples(tetra_quantum):
    assert measurement_compatible(effect((-1, 0, 0)), tetra_quantum)
    assert not measurement_compatible(effect(-np.ones(3) / np.sqrt(3)), tetra_quantum)
    assert measurement_compatible(np.zeros((2, 2)), tetra_quantum)
    # without the quantum states only the tetrahedron faces constrain the effect
    bare = GeneratorSet.from_basis(phase_point_basis(2))
    assert measurement_compatible(effect((0.9, 0.9, 0.9)), bare)
    assert not measurement_compatible(effect((0.9, 0.9, 0.9)), tetra_quantum)


def test_qubit_region_on_grid(tetra_quantum):
    axis = np.linspace(-1, 1, 15)
    pts = np.array(np.meshgrid(axis, axis, axis, indexing="ij")).reshape(3, -1).T
    numeric = np.array([measurement_compatible(effect(r), tetra_quantum) for r in pts])
    # analytic region: unit ball intersected with half-spaces 1 + r.c >= 0
    analytic = np.array([np.linalg.norm(r) <= 1 + 1e-10 and np.all(1 + TETRA @ r >= -1e-10) for r in pts])
    np.testing.assert_array_equal(numeric, analytic)
    np.testing.assert_array_equal(qubit_region_predicate(pts, TETRA), analytic)
    assert 0 < analytic.sum() < len(pts)


def test_tetra_vertices_recovered():
    np.testing.assert_allclose([bloch_vector(C) for C in phase_point_basis(2)], TETRA, atol=1e-15)


def test_cone_membership_examples(rng):
    G = GeneratorSet.from_basis(unit_trace_basis(3, 2))
    g = G.generators
    c = cone_membership(g[0], G)
    assert c.member
    np.testing.assert_allclose(c.coefficients, np.eye(9)[0], atol=1e-10)
    assert cone_membership(3 * (g[1] + g[2]), G).member
    assert not cone_membership(-g[0], G).member
    assert cone_membership(-g[0], G).coefficients is None


@pytest.mark.parametrize("v", [(0, 0, -1), (0, 0, 1), (0.3, -0.2, 0.1), (1, 0, 0), (0.9, 0.9, 0.9), (0, 0, -1.5)])
def test_cone_membership_against_barycentric_solve(v):
    G = GeneratorSet.from_basis(phase_point_basis(2))
    X = bloch_operator(v)
    # analytic: trace and Bloch components give a 4x4 linear system for the coefficients
    A = np.vstack([np.ones(4), TETRA.T])
    coeff = np.linalg.solve(A, np.r_[1.0, v])
    analytic_member = bool(np.all(coeff >= -1e-12))
    cert = cone_membership(X, G)
    assert cert.member == analytic_member
    if analytic_member:
        np.testing.assert_allclose(cert.coefficients, coeff, atol=1e-10)


def test_cone_membership_rejects_quantum_cone(tetra_quantum):
    with pytest.raises(InputError):
        cone_membership(np.eye(2), tetra_quantum)


@pytest.mark.parametrize("d,basis", [(2, "pp"), (3, "pp"), (3, "ut"), (5, "ut")])
def test_extremality_probe(d, basis):
    B = phase_point_basis(d) if basis == "pp" else unit_trace_basis(d, 11)
    r = unit_trace_extremality_probe(GeneratorSet.from_basis(B, True), trials=2000, seed=4)
    assert r.passed
    assert r.max_norm_sq <= d * (1 - 1e-3) + 1e-9
    assert r.max_density_norm <= 1 + 1e-10
    assert r.density_samples == 500
    np.testing.assert_allclose(r.vertex_norms, np.sqrt(d), atol=1e-10)
    assert r.max_certificate_slack < 0


def test_probe_needs_unit_trace_and_quantum():
    from sepspace.basis import gell_mann_basis

    with pytest.raises(InputError):
        unit_trace_extremality_probe(GeneratorSet.from_basis(phase_point_basis(2)), 10)
    with pytest.raises(InputError):
        unit_trace_extremality_probe(GeneratorSet.from_basis(gell_mann_basis(2), True), 10)


def test_density_admixture_can_beat_the_linear_margin():
    # Why the probe also carries a triangle-inequality certificate: a vertex mixed with
    # its own top eigenvector exceeds d(1 - eps) while staying strictly below d.
    W = phase_point_basis(2)[0]
    w, V = np.linalg.eigh(W)
    top = np.outer(V[:, -1], V[:, -1].conj())
    eps = 1e-3
    X = (1 - eps) * W + eps * top
    nsq = np.linalg.norm(X) ** 2
    assert 2 * (1 - eps) < nsq < 2
