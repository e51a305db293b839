"""Method-of-lines integration of the coupled system and of the scalar DSG equation.

Space is discretised with second-order central differences on a uniform
grid; time with velocity Verlet (default) or classical RK4.

``clamped-asymptotic`` boundaries hold the two end nodes on their asymptotic
motion: each end value moves affinely in time with its initial velocity.
For a traveling kink the tails are flat in ``phi`` and affine in ``psi``
(the background strain translates), so this is exact up to the exponentially
small tail of the profile.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import dispersion, energy, soliton
from .errors import InvalidField, NumericalInstability
from .params import MaterialParams

BOUNDARIES = ("clamped-asymptotic", "periodic")
SYSTEMS = ("coupled", "dsg")
SCHEMES = ("leapfrog", "rk4")
MIN_POINTS = 16
BLOWUP = 1e8
CFL = 0.4


@dataclass(frozen=True)
class FieldState:
    z0: float
    h: float
    n: int
    t: float
    phi: np.ndarray
    psi: np.ndarray
    phi_t: np.ndarray
    psi_t: np.ndarray

    def __post_init__(self):
        if self.n < MIN_POINTS:
            raise InvalidField(f"need n >= {MIN_POINTS}, got {self.n}")
        if not self.h > 0:
            raise InvalidField(f"grid spacing must be positive, got {self.h}")
        for name in ("phi", "psi", "phi_t", "psi_t"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (self.n,):
                raise InvalidField(f"{name} must have shape ({self.n},)")
            if not np.all(np.isfinite(arr)):
                raise InvalidField(f"{name} contains non-finite entries")
            object.__setattr__(self, name, arr)

    @property
    def z(self):
        return self.z0 + self.h * np.arange(self.n)


@dataclass(frozen=True)
class SimConfig:
    t_end: float
    dt: float | str = "auto"
    boundary: str = "clamped-asymptotic"
    record_every: int = 0
    system: str = "coupled"
    scheme: str = "leapfrog"
    m_sq: float | None = None
    b: float | None = None
    #: jumps of (phi, psi) across the period, e.g. 2 pi for a kink on a ring
    periodic_jump: tuple = (0.0, 0.0)

    def __post_init__(self):
        if not self.t_end >= 0:
            raise ValueError("t_end must be >= 0")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}")
        if self.system not in SYSTEMS:
            raise ValueError(f"system must be one of {SYSTEMS}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.system == "dsg" and (self.m_sq is None or self.b is None):
            raise ValueError("the dsg system needs m_sq and b")
        if self.dt != "auto" and not (isinstance(self.dt, (int, float)) and self.dt > 0):
            raise ValueError("dt must be 'auto' or a positive number")
        if self.record_every < 0:
            raise ValueError("record_every must be >= 0")


@dataclass(frozen=True)
class PropagationMetrics:
    l2_shape_error: float | None
    center_position: float | None
    measured_speed: float | None
    energy_drift: float
    max_abs_error: float | None = None
    psi_l2_error: float | None = None
    steps: int = 0
    dt: float = 0.0
    centers: tuple = field(default=(), repr=False)
    energies: tuple = field(default=(), repr=False)

    def to_dict(self):
        return {
            "l2_shape_error": self.l2_shape_error,
            "psi_l2_error": self.psi_l2_error,
            "max_abs_error": self.max_abs_error,
            "center_position": self.center_position,
            "measured_speed": self.measured_speed,
            "energy_drift": self.energy_drift,
            "steps": self.steps,
            "dt": self.dt,
        }


# -- spatial operators --------------------------------------------------------

def _d1_d2(f, h, periodic, jump=0.0):
    """Central first and second differences at the interior (or all) nodes."""
    if periodic:
        right = np.roll(f, -1)
        left = np.roll(f, 1)
        right[-1] += jump
        left[0] -= jump
        return (right - left) / (2 * h), (right - 2 * f + left) / (h * h)
    d1 = np.zeros_like(f)
    d2 = np.zeros_like(f)
    d1[1:-1] = (f[2:] - f[:-2]) / (2 * h)
    d2[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / (h * h)
    return d1, d2


def _coupled_acc(p, d, phi, psi, h, periodic, jumps):
    phi_z, phi_zz = _d1_d2(phi, h, periodic, jumps[0])
    psi_z, psi_zz = _d1_d2(psi, h, periodic, jumps[1])
    s = np.sin(phi)
    m = d.M
    a_phi = (m[0, 0] * phi_zz + m[0, 1] * psi_zz + p.lam * s / (2 * p.rho_rot) * psi_z
             - (p.lam + p.mu + p.mu_c) / p.rho_rot * s
             + (p.lam + p.mu) / (2 * p.rho_rot) * np.sin(2 * phi))
    a_psi = m[1, 0] * phi_zz + m[1, 1] * psi_zz - 2 * p.lam * s / p.rho * phi_z
    if not periodic:
        a_phi[[0, -1]] = 0.0
        a_psi[[0, -1]] = 0.0
    return a_phi, a_psi


def _dsg_acc(m_sq, b, phi, h, periodic, jump):
    _, phi_zz = _d1_d2(phi, h, periodic, jump)
    a = phi_zz - m_sq * np.sin(phi) - 0.5 * b * np.sin(2 * phi)
    if not periodic:
        a[[0, -1]] = 0.0
    return a


def rhs_coupled(p: MaterialParams, state: FieldState, boundary="clamped-asymptotic",
                periodic_jump=(0.0, 0.0)):
    """``(phi_tt, psi_tt)`` of the coupled system.

    With clamped boundaries the end nodes carry zero acceleration (their
    motion is prescribed).
    """
    d = dispersion.derive(p)
    return _coupled_acc(p, d, state.phi, state.psi, state.h, boundary == "periodic",
                        periodic_jump)


def rhs_dsg(m_sq: float, b: float, state: FieldState, boundary="clamped-asymptotic",
            periodic_jump=0.0):
    """``phi_tt = phi_zz - m^2 sin phi - (b/2) sin 2 phi``."""
    return _dsg_acc(m_sq, b, state.phi, state.h, boundary == "periodic", periodic_jump)


def _accel_fn(config: SimConfig, params: MaterialParams | None, h):
    periodic = config.boundary == "periodic"
    jumps = config.periodic_jump
    if config.system == "coupled":
        d = dispersion.derive(params)

        def acc(phi, psi):
            return _coupled_acc(params, d, phi, psi, h, periodic, jumps)
    else:
        def acc(phi, psi):
            return (_dsg_acc(config.m_sq, config.b, phi, h, periodic, jumps[0]),
                    np.zeros_like(psi))
    return acc


def max_wave_speed(config: SimConfig, params: MaterialParams | None):
    if config.system == "dsg":
        return 1.0
    eig = np.linalg.eigvals(dispersion.derive(params).M)
    return math.sqrt(float(np.max(eig.real)))


def resolve_dt(config: SimConfig, params: MaterialParams | None, h: float):
    """Time step and step count; ``auto`` is ``0.4 h / c_max`` rounded so the
    steps divide ``t_end`` exactly."""
    if config.t_end == 0:
        dt = CFL * h / max_wave_speed(config, params) if config.dt == "auto" else config.dt
        return float(dt), 0
    if config.dt == "auto":
        dt = CFL * h / max_wave_speed(config, params)
        steps = math.ceil(config.t_end / dt - 1e-9)
        return config.t_end / steps, steps
    steps = max(1, round(config.t_end / config.dt))
    return config.t_end / steps, steps


# -- time stepping ---------------------------------------------------------

def _leapfrog(x, v, a, dt, acc, clamped):
    vh = (v[0] + 0.5 * dt * a[0], v[1] + 0.5 * dt * a[1])
    xn = (x[0] + dt * vh[0], x[1] + dt * vh[1])
    an = acc(*xn)
    vn = (vh[0] + 0.5 * dt * an[0], vh[1] + 0.5 * dt * an[1])
    if clamped:
        # ends have zero acceleration, so their velocity is carried unchanged
        for arr_new, arr_old in zip(vn, v):
            arr_new[[0, -1]] = arr_old[[0, -1]]
    return xn, vn, an


def _rk4(x, v, dt, acc):
    def deriv(xs, vs):
        a = acc(*xs)
        return vs, a

    def shift(base, k, c):
        return (base[0] + c * k[0], base[1] + c * k[1])

    k1x, k1v = deriv(x, v)
    k2x, k2v = deriv(shift(x, k1x, dt / 2), shift(v, k1v, dt / 2))
    k3x, k3v = deriv(shift(x, k2x, dt / 2), shift(v, k2v, dt / 2))
    k4x, k4v = deriv(shift(x, k3x, dt), shift(v, k3v, dt))
    xn = tuple(x[i] + dt / 6 * (k1x[i] + 2 * k2x[i] + 2 * k3x[i] + k4x[i]) for i in range(2))
    vn = tuple(v[i] + dt / 6 * (k1v[i] + 2 * k2v[i] + 2 * k3v[i] + k4v[i]) for i in range(2))
    return xn, vn


def _finite(*arrays):
    return all(np.all(np.isfinite(a)) and np.max(np.abs(a)) < BLOWUP for a in arrays)


def step(state: FieldState, config: SimConfig, params: MaterialParams | None = None,
         dt: float | None = None) -> FieldState:
    """Advance one explicit step (a negative ``dt`` steps backwards)."""
    if dt is None:
        dt, _ = resolve_dt(config, params, state.h)
    acc = _accel_fn(config, params, state.h)
    x = (state.phi.copy(), state.psi.copy())
    v = (state.phi_t.copy(), state.psi_t.copy())
    if config.scheme == "leapfrog":
        xn, vn, _ = _leapfrog(x, v, acc(*x), dt, acc, config.boundary != "periodic")
    else:
        xn, vn = _rk4(x, v, dt, acc)
    if not _finite(*xn, *vn):
        raise NumericalInstability("non-finite or exploding field after step", step=1)
    return FieldState(state.z0, state.h, state.n, state.t + dt, xn[0], xn[1], vn[0], vn[1])


# -- diagnostics -----------------------------------------------------------

def total_energy(state: FieldState, config: SimConfig, params: MaterialParams | None = None):
    """Discrete Hamiltonian (kinetic plus reduced potential), trapezoidal in z."""
    h = state.h
    phi_z = np.gradient(state.phi, h, edge_order=2)
    if config.system == "dsg":
        dens = (0.5 * state.phi_t**2 + 0.5 * phi_z**2 + config.m_sq * (1 - np.cos(state.phi))
                + 0.25 * config.b * (1 - np.cos(2 * state.phi)))
    else:
        psi_z = np.gradient(state.psi, h, edge_order=2)
        dens = (2 * params.rho_rot * state.phi_t**2 + 0.5 * params.rho * state.psi_t**2
                + energy.reduced_density(params, state.phi, phi_z, psi_z))
    return float(np.trapezoid(dens, dx=h))


def kink_center(state: FieldState, level=math.pi):
    """Position where ``phi`` crosses ``level`` (linear interpolation).

    Uses the first crossing from the left in either direction; ``None`` if
    there is none.
    """
    f = state.phi - level
    sign = np.sign(f)
    idx = np.nonzero(sign[:-1] * sign[1:] <= 0)[0]
    idx = idx[f[idx] != f[idx + 1]]
    if idx.size == 0:
        return None
    i = int(idx[0])
    frac = f[i] / (f[i] - f[i + 1])
    return float(state.z0 + state.h * (i + frac))


def topological_charge(state: FieldState):
    return (state.phi[-1] - state.phi[0]) / (2 * math.pi)


def run(initial: FieldState, config: SimConfig, params: MaterialParams | None = None,
        analytic=None, track_every: int | None = None):
    """Integrate to ``t_end``; returns ``(snapshots, PropagationMetrics)``.

    ``analytic(z, t)`` may return ``(phi, psi)`` of a reference solution; it
    sets the shape errors at ``t_end``. Snapshots are taken every
    ``record_every`` steps (0 records only the initial and final states).
    """
    if config.system == "coupled" and params is None:
        raise ValueError("the coupled system needs material parameters")
    dt, steps = resolve_dt(config, params, initial.h)
    clamped = config.boundary != "periodic"
    acc = _accel_fn(config, params, initial.h)
    if track_every is None:
        track_every = max(1, steps // 400)

    x = (initial.phi.copy(), initial.psi.copy())
    v = (initial.phi_t.copy(), initial.psi_t.copy())
    a = acc(*x)
    snapshots = [initial]
    times, centers, energies = [initial.t], [kink_center(initial)], [
        total_energy(initial, config, params)]

    def make_state(i):
        return FieldState(initial.z0, initial.h, initial.n, initial.t + i * dt,
                          x[0].copy(), x[1].copy(), v[0].copy(), v[1].copy())

    for i in range(1, steps + 1):
        if config.scheme == "leapfrog":
            x, v, a = _leapfrog(x, v, a, dt, acc, clamped)
        else:
            x, v = _rk4(x, v, dt, acc)
        if clamped:
            # prescribed affine motion of the end nodes
            t_rel = i * dt
            for cur, init, vel in ((x[0], initial.phi, initial.phi_t),
                                   (x[1], initial.psi, initial.psi_t)):
                cur[[0, -1]] = init[[0, -1]] + t_rel * vel[[0, -1]]
            v[0][[0, -1]] = initial.phi_t[[0, -1]]
            v[1][[0, -1]] = initial.psi_t[[0, -1]]
        if not _finite(*x, *v):
            raise NumericalInstability(f"fields blew up at step {i} (t = {i * dt:.6g})", step=i)
        recorded = config.record_every and i % config.record_every == 0
        if i % track_every == 0 or i == steps or recorded:
            st = make_state(i)
            if recorded or i == steps:
                if not snapshots or snapshots[-1].t != st.t:
                    snapshots.append(st)
            if i % track_every == 0 or i == steps:
                times.append(st.t)
                centers.append(kink_center(st))
                energies.append(total_energy(st, config, params))

    final = snapshots[-1]
    e0 = energies[0]
    scale = abs(e0) if e0 != 0 else 1.0
    drift = float(max(abs(e - e0) for e in energies) / scale)
    ok = [(t, c) for t, c in zip(times, centers) if c is not None]
    speed = None
    if len(ok) >= 2:
        ts, cs = np.array(ok).T
        speed = float(np.polyfit(ts, cs, 1)[0])
    l2 = psi_l2 = max_err = None
    if analytic is not None:
        phi_a, psi_a = analytic(final.z, final.t)
        err = final.phi - phi_a
        l2 = float(np.sqrt(np.sum(err**2) / np.sum(phi_a**2)))
        max_err = float(np.max(np.abs(err)))
        if config.system == "coupled" and psi_a is not None:
            denom = np.sum(psi_a**2)
            psi_l2 = float(np.sqrt(np.sum((final.psi - psi_a) ** 2) / denom)) if denom else None
    metrics = PropagationMetrics(l2, centers[-1], speed, drift, max_err, psi_l2, steps, dt,
                                 tuple(ok), tuple(energies))
    return snapshots, metrics


# -- initial data ------------------------------------------------------------

def grid(z_min: float, z_max: float, n: int):
    if n < MIN_POINTS:
        raise InvalidField(f"need n >= {MIN_POINTS}, got {n}")
    if not z_max > z_min:
        raise InvalidField("z_max must exceed z_min")
    return np.linspace(z_min, z_max, n)


def soliton_fields(sol, z, t=0.0, constant="zero"):
    """Exact traveling-wave ``(phi, psi, phi_t, psi_t)`` at time ``t``.

    ``psi`` comes from the quadrature oracle; the traveling-wave form gives
    ``psi_t = -v psi_z``.
    """
    d = soliton.phi_derivatives(sol, z, t)
    disp = soliton.psi_quadrature(sol, z, t, constant=constant)
    return d["phi"], disp.psi, d["phi_t"], -sol.v * disp.psi_z


def soliton_initial(sol, z_min: float, z_max: float, n: int, constant="zero"):
    """Initial :class:`FieldState` and an ``analytic(z, t)`` reference."""
    z = grid(z_min, z_max, n)
    phi, psi, phi_t, psi_t = soliton_fields(sol, z, 0.0, constant)
    state = FieldState(float(z[0]), float(z[1] - z[0]), n, 0.0, phi, psi, phi_t, psi_t)

    def analytic(zz, t):
        return soliton_fields(sol, zz, t, constant)[:2]

    return state, analytic


def static_dsg_initial(m_sq: float, b: float, z_min: float, z_max: float, n: int):
    """Static DSG kink centred at ``z = 0`` and its ``analytic(z, t)``."""
    mass = m_sq + b
    r = b / mass
    shift = 0.5 * math.log(4.0 / (1.0 - r))
    kappa = math.sqrt(mass)
    z = grid(z_min, z_max, n)
    phi = soliton.kink_profile(kappa * z + shift, r)[0]
    zeros = np.zeros(n)
    state = FieldState(float(z[0]), float(z[1] - z[0]), n, 0.0, phi, zeros, zeros, zeros)

    def analytic(zz, t):
        return soliton.kink_profile(kappa * np.asarray(zz) + shift, r)[0], None

    return state, analytic


def kink_antikink_initial(m_sq: float, b: float, z_min: float, z_max: float, n: int,
                          separation: float):
    """Static DSG kink at ``-separation/2`` and antikink at ``+separation/2``."""
    mass = m_sq + b
    r = b / mass
    shift = 0.5 * math.log(4.0 / (1.0 - r))
    kappa = math.sqrt(mass)
    z = grid(z_min, z_max, n)
    kink = soliton.kink_profile(kappa * (z + separation / 2) + shift, r)[0]
    anti = soliton.kink_profile(kappa * (z - separation / 2) + shift, r)[0]
    phi = kink - anti
    zeros = np.zeros(n)
    return FieldState(float(z[0]), float(z[1] - z[0]), n, 0.0, phi, zeros, zeros, zeros)


@dataclass(frozen=True)
class ConvergenceReport:
    ns: tuple
    errors: tuple
    orders: tuple

    @property
    def order(self):
        return self.orders[-1]


def self_convergence(build, config: SimConfig, params: MaterialParams | None = None,
                     ns=(1025, 2049, 4097), field_name="phi"):
    """Observed order from runs on nested grids (``n = 2^j + 1``).

    ``build(n)`` returns the initial state on ``n`` points of a fixed domain.
    ``dt="auto"`` keeps ``dt / h`` fixed, so ``h`` and ``dt`` halve together.
    Differences of successive runs are compared on the coarsest grid.
    """
    finals = []
    for n in ns:
        snaps, _ = run(build(n), replace(config, record_every=0), params)
        finals.append(getattr(snaps[-1], field_name))
    stride = [(ns[i] - 1) // (ns[0] - 1) for i in range(len(ns))]
    coarse = [f[::s] for f, s in zip(finals, stride)]
    errors = tuple(float(np.sqrt(np.mean((coarse[i + 1] - coarse[i]) ** 2)))
                   for i in range(len(ns) - 1))
    orders = tuple(math.log2(errors[i] / errors[i + 1]) for i in range(len(errors) - 1))
    return ConvergenceReport(tuple(ns), errors, orders)
