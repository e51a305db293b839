import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cosserat_soliton import simulate as S
from cosserat_soliton import soliton as So
from cosserat_soliton.errors import InvalidField, NumericalInstability
from cosserat_soliton.params import fixture

PA = fixture("type_a")
SOL = So.make_soliton(PA, 0.1)
DSG = S.SimConfig(t_end=5.0, system="dsg", m_sq=1.0, b=0.5)


def uniform_state(n, phi=0.0, psi=0.0, h=0.1):
    z = np.zeros(n)
    return S.FieldState(-0.5 * n * h, h, n, 0.0, z + phi, z + psi, z.copy(), z.copy())


def test_trivial_state_has_zero_acceleration():
    phi_tt, psi_tt = S.rhs_coupled(PA, uniform_state(32))
    assert not phi_tt.any() and not psi_tt.any()
    assert not S.rhs_dsg(1.0, 0.5, uniform_state(32)).any()


def test_uniform_pi_state_is_stationary():
    phi_tt, _ = S.rhs_coupled(PA, uniform_state(32, phi=math.pi))
    np.testing.assert_allclose(phi_tt, 0.0, atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(1e-4, 10.0), st.sampled_from(S.SCHEMES))
def test_zero_state_stays_zero(dt, scheme):
    s = uniform_state(32)
    for cfg, params in ((S.SimConfig(t_end=1.0, scheme=scheme), PA),
                        (replace(DSG, scheme=scheme), None)):
        out = S.step(s, cfg, params, dt=dt)
        for name in ("phi", "psi", "phi_t", "psi_t"):
            assert not getattr(out, name).any()


def test_leapfrog_is_reversible():
    small, _ = S.soliton_initial(SOL, -40, 40, 512)
    cfg = S.SimConfig(t_end=1.0)
    back = S.step(S.step(small, cfg, PA, dt=0.01), cfg, PA, dt=-0.01)
    for name in ("phi", "psi", "phi_t", "psi_t"):
        np.testing.assert_allclose(getattr(back, name), getattr(small, name), atol=1e-12)


def test_auto_dt_divides_t_end():
    dt, steps = S.resolve_dt(S.SimConfig(t_end=10.0), PA, 80 / 4095)
    assert steps * dt == pytest.approx(10.0, rel=1e-14)
    assert dt <= 0.4 * (80 / 4095) / S.max_wave_speed(S.SimConfig(t_end=10.0), PA)


def test_soliton_propagates():
    state, analytic = S.soliton_initial(SOL, -40, 40, 4096)
    _, m = S.run(state, S.SimConfig(t_end=10.0), PA, analytic=analytic)
    assert abs(m.measured_speed - 0.1) / 0.1 < 0.01
    assert m.l2_shape_error < 1e-3
    assert m.energy_drift < 1e-4


def test_static_dsg_kink_is_preserved():
    state, analytic = S.static_dsg_initial(1.0, 0.5, -40, 40, 8193)
    _, m = S.run(state, replace(DSG, t_end=10.0), analytic=analytic)
    assert m.l2_shape_error < 1e-6
    assert abs(m.measured_speed) < 1e-6


def test_dsg_self_convergence():
    conv = S.self_convergence(
        lambda n: S.kink_antikink_initial(1.0, 0.5, -20, 20, n, separation=8.0), DSG,
        ns=(513, 1025, 2049))
    assert conv.order == pytest.approx(2.0, abs=0.2)


def test_coupled_self_convergence_small():
    conv = S.self_convergence(lambda n: S.soliton_initial(SOL, -30, 30, n)[0],
                              S.SimConfig(t_end=2.0), PA, ns=(513, 1025, 2049))
    assert conv.order == pytest.approx(2.0, abs=0.2)


def test_schemes_agree():
    state, _ = S.soliton_initial(SOL, -30, 30, 1024)
    cfg = S.SimConfig(t_end=1.0)
    a, _ = S.run(state, cfg, PA)
    b, _ = S.run(state, replace(cfg, scheme="rk4"), PA)
    assert np.max(np.abs(a[-1].phi - b[-1].phi)) < 1e-4


def test_topological_charge_conserved():
    ka = S.kink_antikink_initial(1.0, 0.5, -40, 40, 2048, separation=30.0)
    assert S.topological_charge(ka) == pytest.approx(0.0, abs=1e-12)
    snaps, _ = S.run(ka, replace(DSG, record_every=50))
    assert len(snaps) > 2
    for s in snaps:
        assert S.topological_charge(s) == pytest.approx(0.0, abs=1e-12)
    kink, _ = S.static_dsg_initial(1.0, 0.5, -40, 40, 1024)
    snaps, _ = S.run(kink, DSG)
    assert S.topological_charge(snaps[-1]) == pytest.approx(1.0, abs=1e-12)


def test_periodic_ring_holds_static_kink():
    n = 1024
    z = -40 + 80 * np.arange(n) / n
    kappa = math.sqrt(1.5)
    phi = So.kink_profile(kappa * z + 0.5 * math.log(4.0 / (1.0 - 1 / 3)), 1 / 3)[0]
    zero = np.zeros(n)
    state = S.FieldState(-40.0, 80 / n, n, 0.0, phi, zero, zero, zero)
    cfg = replace(DSG, boundary="periodic", periodic_jump=(2 * math.pi, 0.0))
    snaps, m = S.run(state, cfg)
    assert np.max(np.abs(snaps[-1].phi - phi)) < 1e-3
    assert m.energy_drift < 1e-4


def test_runs_are_deterministic():
    state, _ = S.soliton_initial(SOL, -20, 20, 256)
    cfg = S.SimConfig(t_end=1.0, record_every=50)
    a, ma = S.run(state, cfg, PA)
    b, mb = S.run(state, cfg, PA)
    assert len(a) == len(b)
    for x, y in zip(a, b):
        assert x.t == y.t
        assert np.array_equal(x.phi, y.phi) and np.array_equal(x.psi, y.psi)
    assert ma.to_dict() == mb.to_dict()


def test_zero_duration_returns_initial_state():
    state, _ = S.soliton_initial(SOL, -20, 20, 256)
    snaps, m = S.run(state, S.SimConfig(t_end=0.0), PA)
    assert len(snaps) == 1 and snaps[0] is state
    assert m.steps == 0


def test_instability_reports_step():
    state, _ = S.soliton_initial(SOL, -40, 40, 512)
    with pytest.raises(NumericalInstability) as info:
        S.run(state, S.SimConfig(t_end=10.0, dt=0.5), PA)
    assert info.value.step is not None and info.value.step >= 1


def test_kink_center_interpolates():
    s = uniform_state(32)
    phi = np.linspace(0, 2 * math.pi, 32)
    s = replace(s, phi=phi)
    c = S.kink_center(s)
    assert c == pytest.approx(s.z0 + s.h * 15.5, abs=1e-12)
    assert S.kink_center(uniform_state(32)) is None


def test_validation():
    with pytest.raises(InvalidField):
        uniform_state(8)
    with pytest.raises(InvalidField):
        S.grid(1.0, 0.0, 100)
    with pytest.raises(ValueError):
        S.SimConfig(t_end=-1.0)
    with pytest.raises(ValueError):
        S.SimConfig(t_end=1.0, system="dsg")
    with pytest.raises(ValueError):
        S.SimConfig(t_end=1.0, dt=0.0)
    with pytest.raises(ValueError):
        S.run(uniform_state(32), S.SimConfig(t_end=1.0))
