import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cosserat_soliton import energy as E
from cosserat_soliton.errors import InvalidField
from cosserat_soliton.params import fixture

P = fixture("type_a")
Z = np.linspace(-5, 5, 201)
H = Z[1] - Z[0]
LENGTH = Z[-1] - Z[0]


def fields(phi, psi, **kw):
    return E.AnsatzFields(np.broadcast_to(phi, Z.shape).astype(float),
                          np.broadcast_to(psi, Z.shape).astype(float), H, **kw)


def smooth(a1, a2, a3, c):
    phi = a1 * E.bump(Z, -0.5, 0.6) + a2 * E.bump(Z, 0.0, 0.8) + a3 * E.bump(Z, 0.5, 1.0)
    psi = c * E.bump(Z, 0.2, 0.9)
    return fields(phi, psi)


amp = st.floats(-2.0, 2.0, allow_nan=False)
small = st.floats(-0.3, 0.3, allow_nan=False)


def test_undeformed_state_has_zero_energy():
    f = fields(0.0, 0.0)
    for fn in (E.energy_elastic, E.energy_curvature, E.energy_interaction, E.energy_coupling):
        assert fn(P, f) == 0.0


def test_uniform_stretch_elastic_density():
    c = 0.05
    f = fields(0.0, c * Z)
    np.testing.assert_allclose(E.elastic_density(P, f), 0.5 * P.lam * c**2 + P.mu * c**2,
                               rtol=1e-12)


def test_curvature_of_constant_rotation_vanishes():
    assert E.energy_curvature(P, fields(0.8, 0.0)) == pytest.approx(0.0, abs=1e-15)


def test_curvature_of_linear_twist():
    a = 0.4
    p = P.with_(kappa2=2.3)
    dens = E.curvature_density(p, fields(a * Z, 0.0))
    # only kappa1 and kappa3 survive; kappa2 multiplies the vanishing skew part
    np.testing.assert_allclose(dens, (2 * p.kappa1 / 3 + 4 * p.kappa3) * a**2, rtol=1e-12)


def test_interaction_vanishes_without_rotation():
    assert E.energy_interaction(P, fields(0.0, 0.1 * np.sin(Z))) == 0.0


def test_coupling_examples():
    assert E.energy_coupling(P, fields(0.0, 0.1 * np.sin(Z))) == pytest.approx(0.0, abs=1e-14)
    np.testing.assert_allclose(E.coupling_density(P, fields(math.pi / 2, 0.0)), 4 * P.mu_c,
                               rtol=1e-12)


def test_kinetic_examples():
    static = fields(0.3, 0.0, phi_t=np.zeros_like(Z), psi_t=np.zeros_like(Z))
    assert E.kinetic_energies(P, static) == (0.0, 0.0)
    p = P.with_(rho=0.1, rho_rot=0.1)
    moving = fields(0.3, 0.0, phi_t=np.ones_like(Z), psi_t=np.full_like(Z, 2.0))
    elastic, rotational = E.kinetic_energies(p, moving)
    assert elastic / LENGTH == pytest.approx(0.2, rel=1e-12)
    assert rotational / LENGTH == pytest.approx(0.2, rel=1e-12)


def test_kinetic_needs_rates():
    with pytest.raises(InvalidField):
        E.kinetic_energies(P, fields(0.0, 0.0))


@settings(max_examples=40, deadline=None)
@given(amp, amp, amp, small)
def test_definition_and_expansion_agree(a1, a2, a3, c):
    f = smooth(a1, a2, a3, c)
    for dens in (E.elastic_density, E.curvature_density, E.interaction_density,
                 E.coupling_density):
        a, b = dens(P, f), dens(P, f, "expanded")
        assert np.max(np.abs(a - b)) <= 1e-12 * (1 + np.max(np.abs(a)))


@settings(max_examples=40, deadline=None)
@given(amp, amp, amp, small)
def test_reduced_density_matches_tensor_route(a1, a2, a3, c):
    f = smooth(a1, a2, a3, c)
    total = (E.elastic_density(P, f) + E.curvature_density(P, f)
             + E.interaction_density(P, f) + E.coupling_density(P, f))
    reduced = E.reduced_density(P, f.phi, f.phi_z, f.psi_z)
    np.testing.assert_allclose(total, reduced, rtol=1e-11, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(amp, amp, amp, small, st.integers(-3, 3))
def test_two_pi_shift_invariance(a1, a2, a3, c, turns):
    f = smooth(a1, a2, a3, c)
    g = E.AnsatzFields(f.phi + 2 * math.pi * turns, f.psi, f.h)
    assert E.energy_elastic(P, f) == pytest.approx(E.energy_elastic(P, g), rel=1e-10, abs=1e-12)
    assert E.energy_coupling(P, f) == pytest.approx(E.energy_coupling(P, g), rel=1e-10,
                                                    abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(amp, amp, amp, small)
def test_energies_nonnegative_where_expected(a1, a2, a3, c):
    f = smooth(a1, a2, a3, c)
    assert E.energy_elastic(P, f) >= 0
    assert E.energy_coupling(P, f) >= 0
    assert E.energy_curvature(P, f) >= 0


def test_coupling_rejects_folded_deformation():
    with pytest.raises(InvalidField, match="1 \\+ psi_z"):
        E.energy_coupling(P, fields(0.0, -1.5 * Z))


def test_fields_validation():
    with pytest.raises(InvalidField):
        E.AnsatzFields(np.zeros(4), np.zeros(4), 0.1)
    with pytest.raises(InvalidField):
        E.AnsatzFields(np.zeros(10), np.zeros(9), 0.1)
    with pytest.raises(InvalidField):
        E.AnsatzFields(np.full(10, np.nan), np.zeros(10), 0.1)
    with pytest.raises(InvalidField):
        E.AnsatzFields(np.zeros(10), np.zeros(10), -0.1)


def test_trivial_state_has_zero_variation():
    rep = E.variational_check(P, fields(0.0, 0.0))
    assert rep.directional_phi == 0.0 and rep.directional_psi == 0.0
    assert rep.pairing_phi == 0.0 and rep.pairing_psi == 0.0


def _grid(h):
    z = np.arange(-5, 5 + h / 2, h)
    return z, dict(eta_phi=E.bump(z, 0.5, 0.7), eta_psi=E.bump(z, -0.4, 0.6))


def test_single_bump_rotation():
    z, kw = _grid(0.01)
    f = E.AnsatzFields(1.2 * E.bump(z, 0.3, 1.0), np.zeros_like(z), 0.01)
    assert E.variational_check(P, f, h_fd=1e-6, **kw).discrepancy < 1e-4


def test_single_bump_displacement():
    z, kw = _grid(0.01)
    f = E.AnsatzFields(np.zeros_like(z), 0.3 * E.bump(z, -0.2, 0.8), 0.01)
    rep = E.variational_check(P, f, **kw)
    assert rep.discrepancy < 1e-4
    # with phi = 0 the displacement equation is -(lambda + 2 mu) psi_zz
    _, e_psi = E.static_residuals(P, f)
    psi_zz = np.gradient(np.gradient(f.psi, 0.01), 0.01)
    inner = slice(5, -5)
    np.testing.assert_allclose(e_psi[inner], -(P.lam + 2 * P.mu) * psi_zz[inner], atol=1e-3)


def test_variation_converges_at_second_order():
    discs = []
    for h in (0.02, 0.01, 0.005):
        z, kw = _grid(h)
        f = E.AnsatzFields(1.2 * E.bump(z, 0.3, 1.0), 0.3 * E.bump(z, -0.2, 0.8), h)
        discs.append(E.variational_check(P, f, **kw).discrepancy)
    assert discs[0] > discs[1] > discs[2]
    assert math.log2(discs[1] / discs[2]) >= 1.9


@settings(max_examples=10, deadline=None)
@given(st.floats(0.0, 10.0))
def test_variation_independent_of_kappa2(kappa2):
    z, kw = _grid(0.02)
    f = E.AnsatzFields(1.2 * E.bump(z, 0.3, 1.0), 0.3 * E.bump(z, -0.2, 0.8), 0.02)
    a = E.variational_check(P, f, **kw)
    b = E.variational_check(P.with_(kappa2=kappa2), f, **kw)
    assert abs(a.directional_phi - b.directional_phi) < 1e-10
    assert abs(a.directional_psi - b.directional_psi) < 1e-10


def test_variational_step_bounds():
    with pytest.raises(ValueError):
        E.variational_check(P, fields(0.0, 0.0), h_fd=1e-2)
