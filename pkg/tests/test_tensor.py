import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from cosserat_soliton import tensor as T
from cosserat_soliton.errors import InvalidField

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
matrices = arrays(np.float64, (3, 3), elements=finite)
angles = st.floats(-50, 50, allow_nan=False)


def test_sym_skew_dev_of_identity():
    np.testing.assert_array_equal(T.sym(np.eye(3)), np.eye(3))
    np.testing.assert_array_equal(T.skew(np.eye(3)), np.zeros((3, 3)))
    np.testing.assert_array_equal(T.dev(np.eye(3)), np.zeros((3, 3)))


def test_frobenius_hand_value():
    assert T.frobenius(np.diag([1.0, 2.0, 3.0]), np.eye(3)) == 6.0


def test_rotation_examples():
    np.testing.assert_array_equal(T.rotation_z(0.0), np.eye(3))
    quarter = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]], dtype=float)
    np.testing.assert_allclose(T.rotation_z(math.pi / 2), quarter, atol=1e-16)
    np.testing.assert_allclose(T.rotation_z(0.7) @ T.rotation_z(-0.7), np.eye(3), atol=1e-15)


@given(matrices)
def test_sym_plus_skew_recovers_matrix(m):
    np.testing.assert_allclose(T.sym(m) + T.skew(m), m, atol=1e-12)
    assert abs(T.trace(T.dev(m))) <= 1e-12 * (1 + np.abs(m).sum())


@given(angles)
def test_rotation_is_orthogonal_with_unit_determinant(phi):
    q = T.rotation_z(phi)
    np.testing.assert_allclose(q.T @ q, np.eye(3), atol=1e-13)
    assert math.isclose(np.linalg.det(q), 1.0, abs_tol=1e-13)


@given(angles)
def test_rotation_derivative_matches_finite_difference(phi):
    h = 1e-6
    fd = (T.rotation_z(phi + h) - T.rotation_z(phi - h)) / (2 * h)
    np.testing.assert_allclose(T.rotation_z_dphi(phi), fd, atol=1e-8)


def test_curl_of_constant_field_is_zero():
    c = np.random.default_rng(1).uniform(-1, 1, (3, 3))
    field = np.broadcast_to(c, (20, 3, 3)).copy()
    # one-sided end stencils leave rounding noise only
    np.testing.assert_allclose(T.matrix_curl(field, 0.1), np.zeros((20, 3, 3)), atol=1e-13)


def test_curl_ramp_sign():
    # with eps_123 = +1 the ramp M_12 = z gives (Curl M)_11 = -1
    z = np.linspace(0, 1, 11)
    m = np.zeros((11, 3, 3))
    m[:, 0, 1] = z
    expect = np.zeros((11, 3, 3))
    expect[:, 0, 0] = -1.0
    np.testing.assert_allclose(T.matrix_curl(m, z[1] - z[0]), expect, atol=1e-12)


def test_curl_matches_brute_force_levi_civita():
    z = np.linspace(0, 2, 41)
    h = z[1] - z[0]
    rng = np.random.default_rng(3)
    m = np.einsum("n,ij->nij", z**2, rng.uniform(-1, 1, (3, 3)))
    dm = T.d_dz(m, h)
    brute = np.zeros_like(m)
    # only d/dz (index 2) is nonzero: (Curl M)_ij = eps_j2s dM_is/dz
    for i in range(3):
        for j in range(3):
            for s in range(3):
                brute[:, i, j] += T.LEVI_CIVITA[j, 2, s] * dm[:, i, s]
    np.testing.assert_allclose(T.matrix_curl(m, h), brute, atol=1e-12)


def test_curl_of_rotation_ansatz_traces_to_twice_phi_z():
    for n, tol in ((201, 2e-4), (401, 5e-5)):
        z = np.linspace(0, 1, n)
        h = z[1] - z[0]
        r = T.rotation_z(np.sin(2 * z))
        tr = np.trace(np.swapaxes(r, 1, 2) @ T.matrix_curl(r, h), axis1=1, axis2=2)
        assert np.max(np.abs(tr - 4 * np.cos(2 * z))[1:-1]) < tol


def test_grad_star_of_linear_ramp():
    z = np.linspace(0, 1, 9)
    g = T.grad_star(z, z[1] - z[0])
    expect = np.zeros((9, 3, 3))
    expect[:, 0, 1] = -1.0
    expect[:, 1, 0] = 1.0
    np.testing.assert_allclose(g, expect, atol=1e-12)
    np.testing.assert_array_equal(T.grad_star(np.full(9, 2.5), 0.1), np.zeros((9, 3, 3)))


@given(arrays(np.float64, 12, elements=finite))
def test_grad_star_is_skew(values):
    g = T.grad_star(values, 0.1)
    np.testing.assert_array_equal(g, -np.swapaxes(g, 1, 2))


def test_polar_examples():
    f = np.eye(3) + np.diag([0, 0, 0.2])
    r, u = T.polar_decompose(f)
    np.testing.assert_allclose(r, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(u, f, atol=1e-14)
    q = T.rotation_z(0.3)
    r, u = T.polar_decompose(q)
    np.testing.assert_allclose(r, q, atol=1e-14)
    np.testing.assert_allclose(u, np.eye(3), atol=1e-14)
    stretch = np.diag([1.1, 0.9, 1.0])
    r, u = T.polar_decompose(T.rotation_z(0.5) @ stretch)
    np.testing.assert_allclose(r, T.rotation_z(0.5), atol=1e-10)
    np.testing.assert_allclose(u, stretch, atol=1e-10)


@settings(max_examples=60)
@given(angles, arrays(np.float64, (3, 3), elements=st.floats(-0.3, 0.3)))
def test_polar_round_trip(phi, perturb):
    u = 1.5 * np.eye(3) + T.sym(perturb)
    f = T.rotation_z(phi) @ u
    r, uu = T.polar_decompose(f)
    np.testing.assert_allclose(r @ uu, f, atol=1e-12)
    np.testing.assert_allclose(r.T @ r, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(uu, uu.T, atol=1e-12)
    assert np.all(np.linalg.eigvalsh(uu) > 0)


def test_polar_rejects_reflection():
    with pytest.raises(InvalidField):
        T.polar_decompose(np.diag([1.0, 1.0, -1.0]))


def test_short_grid_rejected():
    with pytest.raises(InvalidField):
        T.matrix_curl(np.zeros((3, 3, 3)), 0.1)
    with pytest.raises(InvalidField):
        T.grad_star(np.arange(10.0), 0.0)


def test_identity_suite_passes():
    rep = T.matrix_identity_suite(trials=10, seed=7)
    assert rep["passed"] and not rep["failed"]
    assert len(rep["residuals"]) == 6


def test_identity_a_equal_identity_example():
    # d/dX tr(XA) at A = I is I
    x = np.eye(3)
    grad = T._fd_gradient(lambda m: np.trace(m @ np.eye(3)), x, 1e-6)
    np.testing.assert_allclose(grad, np.eye(3), atol=1e-9)
