"""Closed-form traveling kinks of the double sine-Gordon reduction.

The kink profile is written in the phase ``theta = k (z - v t)`` with
``u = exp(theta)`` and ``r = b / (m^2 + b)``::

    P(u) = 1 + (1 + r) u^2 / 2 + (1 - r)^2 u^4 / 16
    Q(u) = 1 - (1 - r) u^2 / 4
    tan(phi / 4) = u / (sqrt(P) + Q)

``sqrt(P) + Q > 0`` for every ``u`` because ``P - Q^2 = u^2``, so the arctan
form is the smooth, monotone continuation of ``2 arcsin(u / sqrt(P))``
through ``phi = pi``. The profile is point-symmetric about
``theta_c = ln(4 / (1 - r)) / 2``; the upper half is evaluated through that
symmetry so no exponential ever exceeds ``u_c = 2 / sqrt(1 - r)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from . import dispersion
from .errors import ForbiddenRegion, NoSoliton, PoleError
from .params import MaterialParams

DELTA = math.log(0.5)
TWO_PI = 2 * math.pi
FORMS = ("exact_arcsin", "paper_arctan", "linearised")
CONSTANTS = ("decaying", "zero")


@dataclass(frozen=True)
class SolitonSolution:
    params: MaterialParams
    v: float
    k: float
    m_sq: float
    b: float
    branch_sign: int = 1
    form: str = "exact_arcsin"
    delta: float = DELTA

    @property
    def mass_sq(self):
        """``m^2 + b``, the squared mass of the Klein-Gordon seed ``u``."""
        return self.m_sq + self.b

    @property
    def r(self):
        return self.b / self.mass_sq

    @property
    def theta_center(self):
        """Phase at which the kink crosses ``phi = pi``."""
        return 0.5 * math.log(4.0 / (1.0 - self.r))

    @property
    def center_offset(self):
        """``z - v t`` of the ``phi = pi`` crossing."""
        return self.theta_center / self.k

    @property
    def gap(self):
        """``v^2 - v_elas^2``."""
        return self.v**2 - (self.params.lam + 2 * self.params.mu) / self.params.rho

    @property
    def m21(self):
        p = self.params
        return 2 * (3 * p.chi1 - p.chi3) / (3 * p.rho)

    @property
    def background_strain(self):
        """Far-field ``psi_z`` left by a zero integration constant."""
        return 2 * self.params.lam / (self.params.rho * self.gap)

    def phase(self, z, t=0.0):
        return self.k * (np.asarray(z, dtype=float) - self.v * t)


def make_soliton(p: MaterialParams, v: float, branch_sign: int = 1,
                 form: str = "exact_arcsin") -> SolitonSolution:
    """Build the traveling-wave record for speed ``v``.

    Raises :class:`ForbiddenRegion` when ``k(v)`` is undefined and
    :class:`NoSoliton` when ``m^2 + b <= 0`` (no kink of this family).
    """
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}")
    if branch_sign not in (1, -1):
        raise ValueError("branch_sign must be +1 or -1")
    d = dispersion.derive(p)
    if form == "linearised":
        point = dispersion.k0_of_v(p, abs(v))
        m_sq, b = d.m0_sq, 0.0
    else:
        point = dispersion.k_of_v(p, abs(v))
        m_sq = d.m_sq
        b = dispersion.b_of_v(p, v)
    if not point.defined:
        raise ForbiddenRegion(f"k is {point.status} at v = {v}")
    if m_sq + b <= 0:
        raise NoSoliton(f"m^2 + b = {m_sq + b:.6g} <= 0 at v = {v}")
    if point.k == 0:
        raise NoSoliton(f"k = 0 at v = {v} (v = v0)")
    return SolitonSolution(p, float(v), point.k, m_sq, b, branch_sign, form)


# -- profile ---------------------------------------------------------------

def _rising(theta, r):
    u = np.exp(theta)
    u2 = u * u
    w = 1.0 - r
    P = 1.0 + 0.5 * (1.0 + r) * u2 + w * w * u2 * u2 / 16.0
    Q = 1.0 - w * u2 / 4.0
    phi = 4.0 * np.arctan(u / (np.sqrt(P) + Q))
    N = 2.0 * u + 0.5 * w * u2 * u
    dN = 2.0 + 1.5 * w * u2
    dP = (1.0 + r) * u + w * w * u2 * u / 4.0
    phi_t = N / P
    phi_tt = u * (dN * P - N * dP) / (P * P)
    return phi, phi_t, phi_tt


def kink_profile(theta, r):
    """``(Phi, dPhi/dtheta, d2Phi/dtheta2)`` of the unit kink (0 -> 2 pi)."""
    if not r < 1:
        raise NoSoliton(f"r = b / (m^2 + b) must be < 1, got {r}")
    theta = np.asarray(theta, dtype=float)
    tc = 0.5 * math.log(4.0 / (1.0 - r))
    upper = theta > tc
    mirrored = np.where(upper, 2 * tc - theta, theta)
    phi, d1, d2 = _rising(mirrored, r)
    phi = np.where(upper, TWO_PI - phi, phi)
    d2 = np.where(upper, -d2, d2)
    return phi, d1, d2


def kink_profile_direct(theta, r):
    """Same as :func:`kink_profile` without the symmetry; overflows for large theta."""
    return _rising(np.asarray(theta, dtype=float), r)


def phi_derivatives(sol: SolitonSolution, z, t=0.0):
    """``phi`` and its first/second space-time derivatives (analytic)."""
    theta = sol.phase(z, t)
    phi, d1, d2 = kink_profile(theta, sol.r)
    s = sol.branch_sign
    if s < 0:
        phi, d1, d2 = TWO_PI - phi, -d1, -d2
    k, v = sol.k, sol.v
    return {
        "phi": phi,
        "phi_z": k * d1,
        "phi_t": -v * k * d1,
        "phi_zz": k * k * d2,
        "phi_tt": v * v * k * k * d2,
        "phi_zt": -v * k * k * d2,
    }


def phi_exact(sol: SolitonSolution, z, t=0.0):
    """Kink (``branch_sign=+1``) or antikink (``-1``) rotation angle."""
    return phi_derivatives(sol, z, t)["phi"]


def dsg_residual(sol: SolitonSolution, z_hat, t=0.0):
    """Residual of ``phi_tt - phi_zhat_zhat + m^2 sin phi + (b/2) sin 2 phi``.

    Evaluated in the rescaled frame with chain-rule derivatives:
    ``theta = kappa (z_hat - v_hat t)``, ``kappa^2 = (m^2 + b) / (1 - v_hat^2)``.
    """
    if sol.form == "linearised":
        v_hat = 0.0
        kappa = math.sqrt(sol.mass_sq)
    else:
        _, v_hat = dispersion.to_rescaled(sol.params, sol.v, 0.0)
        kappa = math.sqrt(sol.mass_sq / (1 - v_hat**2))
    theta = kappa * (np.asarray(z_hat, dtype=float) - v_hat * t)
    phi, _, d2 = kink_profile(theta, sol.r)
    phi_tt = (kappa * v_hat) ** 2 * d2
    phi_zz = kappa**2 * d2
    return phi_tt - phi_zz + sol.m_sq * np.sin(phi) + 0.5 * sol.b * np.sin(2 * phi)


def klein_gordon_conditions(sol: SolitonSolution, z_hat, t=0.0):
    """Residuals of the two conditions on the seed ``u`` (rescaled frame).

    Returns ``(wave, first_order_minus, first_order_as_printed)`` where the
    second uses ``u_t^2 - u_z^2 + (m^2 + b) u^2`` and the third the printed
    ``u_t^2 + u_z^2 + (m^2 + b) u^2``.
    """
    _, v_hat = dispersion.to_rescaled(sol.params, sol.v, 0.0)
    kappa = math.sqrt(sol.mass_sq / (1 - v_hat**2))
    theta = kappa * (np.asarray(z_hat, dtype=float) - v_hat * t)
    u = np.exp(theta)
    u_t, u_z = -kappa * v_hat * u, kappa * u
    u_tt, u_zz = (kappa * v_hat) ** 2 * u, kappa**2 * u
    ms = sol.mass_sq
    return (u_tt - u_zz + ms * u,
            u_t**2 - u_z**2 + ms * u**2,
            u_t**2 + u_z**2 + ms * u**2)


def _four_arctan_exp(x):
    """``4 arctan(exp(x))`` without overflow."""
    x = np.asarray(x, dtype=float)
    neg = np.exp(-np.abs(x))
    return np.where(x > 0, TWO_PI - 4 * np.arctan(neg), 4 * np.arctan(neg))


def phi_paper_arctan(sol: SolitonSolution, z, t=0.0):
    """Literal piecewise branch form and the branch label (+1 / -1).

    ``4 arctan(e^{theta + delta})`` while ``e^{2 theta} < 4`` (label +1) and
    ``4 arctan(e^{-theta - delta})`` beyond (label -1). The second branch
    falls back towards 0, so past the switch it equals ``2 pi - phi_exact``
    when ``b = 0``.
    """
    theta = sol.phase(z, t)
    first = theta < math.log(2.0)
    phi = np.where(first, _four_arctan_exp(theta + sol.delta),
                   _four_arctan_exp(-theta - sol.delta))
    return phi, np.where(first, 1, -1)


def paper_switch_point(sol: SolitonSolution, t=0.0):
    return math.log(4.0) / (2 * sol.k) + sol.v * t


def phi_linearised(p: MaterialParams, v: float, z, t=0.0, sign: int = 1):
    """``4 arctan exp(+-(k0 (z - v t) + delta))`` of the linearised model."""
    point = dispersion.k0_of_v(p, abs(v))
    if not point.defined or point.k == 0:
        raise NoSoliton(f"k0^2 <= 0 or undefined at v = {v}")
    arg = point.k * (np.asarray(z, dtype=float) - v * t) + DELTA
    return _four_arctan_exp(sign * arg)


def psi_linearised(p: MaterialParams, v: float, z, t=0.0, sign: int = 1):
    """``4 M21 / (v^2 - v_elas^2) arctan exp(+-(k0 (z - v t) + delta))``."""
    d = dispersion.derive(p)
    gap = v * v - d.v_elas**2
    if gap == 0:
        raise PoleError("psi0 has a pole at v = v_elas")
    return d.M[1, 0] / gap * phi_linearised(p, v, z, t, sign)


# -- displacement ---------------------------------------------------------

@dataclass(frozen=True)
class DisplacementSolution:
    z: np.ndarray
    psi: np.ndarray
    psi_z: np.ndarray
    constant: str
    background_strain: float
    closed_form_defined: bool
    C: float | None
    closed_form_reason: str = ""


def psi_z_integrand(sol: SolitonSolution, z, t=0.0, constant="decaying"):
    """Right side of the once-integrated displacement equation.

    ``decaying``: ``[M21 phi_z + (2 lambda / rho)(cos phi - 1)] / (v^2 - v_elas^2)``;
    ``zero`` adds the constant ``2 lambda / (rho (v^2 - v_elas^2))``.
    """
    if constant not in CONSTANTS:
        raise ValueError(f"constant must be one of {CONSTANTS}")
    gap = sol.gap
    if gap == 0:
        raise PoleError("psi has a pole at v = v_elas")
    d = phi_derivatives(sol, z, t)
    lam, rho = sol.params.lam, sol.params.rho
    out = (sol.m21 * d["phi_z"] + 2 * lam / rho * (np.cos(d["phi"]) - 1.0)) / gap
    if constant == "zero":
        out = out + sol.background_strain
    return out


def psi_quadrature(sol: SolitonSolution, z_grid, t=0.0, constant="decaying",
                   nodes=8) -> DisplacementSolution:
    """Displacement by direct quadrature of ``psi_z``.

    The decaying part is integrated from ``-inf``: ``scipy.integrate.quad``
    covers ``(-inf, z_0]`` and an ``nodes``-point Gauss-Legendre rule covers
    each grid cell. With ``constant="zero"`` the linear background
    ``p0 (z - v t)`` is added, matching a zero integration constant.
    """
    z = np.asarray(z_grid, dtype=float)
    if z.ndim != 1 or z.size < 2 or np.any(np.diff(z) <= 0):
        raise ValueError("z_grid must be a strictly increasing 1-D array")
    if constant not in CONSTANTS:
        raise ValueError(f"constant must be one of {CONSTANTS}")

    def integrand(x):
        return psi_z_integrand(sol, x, t, "decaying")

    # adaptive quadrature for the tail up to z[0], Gauss-Legendre per cell after
    head = quad(lambda x: float(integrand(np.array([x]))[0]), -np.inf, z[0],
                epsabs=1e-15, epsrel=1e-13, limit=200)[0]
    x, w = leggauss(nodes)
    lo, hi = z[:-1], z[1:]
    half = 0.5 * (hi - lo)
    pts = 0.5 * (hi + lo)[:, None] + half[:, None] * x[None, :]
    cells = np.sum(integrand(pts.ravel()).reshape(pts.shape) * w[None, :], axis=1) * half
    psi = head + np.concatenate(([0.0], np.cumsum(cells)))
    psi_z = integrand(z)
    p0 = 0.0
    if constant == "zero":
        p0 = sol.background_strain
        psi = psi + p0 * (z - sol.v * t)
        psi_z = psi_z + p0
    closed = psi_closed_form(sol, z, t)
    return DisplacementSolution(z, psi, psi_z, constant, p0, closed.defined, closed.C,
                                closed.reason)


@dataclass(frozen=True)
class ClosedFormPsi:
    value: np.ndarray | None
    defined: bool
    reason: str
    C: float | None = None


def _y_literal(sol, theta):
    m2, b = sol.m_sq, sol.b
    e2 = np.where(theta < math.log(2.0), 0.25 * np.exp(2 * np.minimum(theta, math.log(2.0))),
                  4 * np.exp(-2 * np.maximum(theta, math.log(2.0))))
    return (8 * b * b + 12 * b * m2 + m2 * m2 * (e2 + 4)) / (8 * math.sqrt(b) * (m2 + b) ** 1.5)


def psi_closed_form(sol: SolitonSolution, z, t=0.0) -> ClosedFormPsi:
    """The printed two-term closed form with its arctanh argument.

    Only real where ``b > 0`` and ``|Y| < 1``; otherwise ``defined`` is False
    and ``reason`` names the violated condition.
    """
    if sol.b <= 0:
        return ClosedFormPsi(None, False, f"b = {sol.b:.6g} <= 0 (sqrt(b) not real)")
    theta = sol.phase(z, t)
    y = _y_literal(sol, theta)
    m2, b = sol.m_sq, sol.b
    y_inf = (8 * b * b + 12 * b * m2 + 4 * m2 * m2) / (8 * math.sqrt(b) * (m2 + b) ** 1.5)
    if abs(y_inf) >= 1 or np.any(np.abs(y) >= 1):
        worst = max(abs(y_inf), float(np.max(np.abs(y))))
        return ClosedFormPsi(None, False, f"|Y| < 1 violated (max |Y| = {worst:.6g})")
    p = sol.params
    pref = 4 * p.lam / (p.rho * sol.k * sol.gap) * math.sqrt(1 + m2 / b)
    C = -pref * math.atanh(y_inf)
    first = 4 * sol.m21 / sol.gap * np.arctan(np.exp(theta + sol.delta))
    return ClosedFormPsi(first + pref * np.arctanh(y) + C, True, "", C)


def psi_closed_form_continued(sol: SolitonSolution, z, t=0.0):
    """Real antiderivative of the decaying displacement for any ``r < 1``.

    Uses ``cos phi - 1 = -2 u^2 / P(u)`` with ``w = u^2``; the ``w``
    integral is an arccoth (``r > 0``), arctan (``r < 0``) or rational
    (``r = 0``) function. Valid on the whole line, both kink halves.
    """
    p = sol.params
    theta = sol.phase(z, t)
    phi = phi_exact(sol, z, t)
    if sol.branch_sign < 0:
        raise ValueError("continued closed form is written for the kink branch")
    r = sol.r
    a = (1 - r) ** 2 / 16
    bq = (1 + r) / 2
    with np.errstate(over="ignore"):
        w = np.exp(2 * theta)
    if abs(r) < 1e-12:
        with np.errstate(invalid="ignore"):
            integral = np.where(np.isinf(w), 4.0, w / (1 + w / 4))
    elif r > 0:
        sr = math.sqrt(r)
        with np.errstate(over="ignore", invalid="ignore"):
            y = (2 * a * w + bq) / sr
            acoth = np.arctanh(np.where(np.isinf(y), 0.0, 1.0 / y))
        integral = -(2 / sr) * (acoth - math.atanh(sr / bq))
    else:
        sr = math.sqrt(-r)
        with np.errstate(over="ignore"):
            y = (2 * a * w + bq) / sr
        integral = (2 / sr) * (np.arctan(y) - math.atan(bq / sr))
    # int (cos phi - 1) ds = -(1/k) * integral over w
    cos_part = -integral / sol.k
    return sol.m21 * phi / sol.gap + 2 * p.lam / (p.rho * sol.gap) * cos_part
