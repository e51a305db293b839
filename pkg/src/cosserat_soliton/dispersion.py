"""Wave-speed algebra: coupling matrix, k(v), quartic roots and regimes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ForbiddenRegion, PoleError
from .params import MaterialParams

# relative closeness at which a denominator counts as a pole
POLE_RTOL = 1e-12
ZERO_RTOL = 1e-13
DEGENERATE_CHI = 1e-12
DEGENERATE_SPEED = 1e-9
BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class DerivedWaveQuantities:
    M: np.ndarray
    v_elas: float
    v_rot: float
    v_chi_sq: float
    m_sq: float
    m0_sq: float
    v0: float
    v3_sq: float
    v4_sq: float
    discriminant: float

    @property
    def v3(self):
        """Smaller positive root; ``None`` when ``det M < 0`` makes it imaginary."""
        return math.sqrt(self.v3_sq) if self.v3_sq >= 0 else None

    @property
    def v4(self):
        return math.sqrt(self.v4_sq)

    @property
    def roots(self):
        """``(v1, v2, v3, v4)`` with ``v1 = -v4`` and ``v2 = -v3``."""
        v3 = self.v3
        return (-self.v4, None if v3 is None else -v3, v3, self.v4)

    @property
    def det_M(self):
        return float(self.M[0, 0] * self.M[1, 1] - self.M[0, 1] * self.M[1, 0])


def coupling_matrix(p: MaterialParams) -> np.ndarray:
    chi = 3 * p.chi1 - p.chi3
    return np.array([
        [(p.kappa1 + 6 * p.kappa3) / (3 * p.rho_rot), chi / (6 * p.rho_rot)],
        [2 * chi / (3 * p.rho), (p.lam + 2 * p.mu) / p.rho],
    ])


def derive(p: MaterialParams) -> DerivedWaveQuantities:
    M = coupling_matrix(p)
    v_el2, v_rot2 = M[1, 1], M[0, 0]
    m12m21 = M[0, 1] * M[1, 0]
    # (v_el^2 - v_rot^2)^2 + 16 (rho_rot/rho) v_chi^4 form: no cancellation
    disc = (v_el2 - v_rot2) ** 2 + 4 * m12m21
    v4_sq = 0.5 * (v_el2 + v_rot2 + math.sqrt(disc))
    # Vieta instead of the minus branch
    v3_sq = (v_el2 * v_rot2 - m12m21) / v4_sq
    q = p.lam**2 / p.rho
    # tiny mu_c: the ratio overflows, so v0 is treated as infinite
    if q < p.mu_c * 1e300:
        v0 = math.sqrt(q / p.mu_c + v_el2)
    else:
        v0 = math.inf
    return DerivedWaveQuantities(
        M=M,
        v_elas=math.sqrt(v_el2),
        v_rot=math.sqrt(v_rot2),
        v_chi_sq=float(M[0, 1]),
        m_sq=(p.lam + p.mu + p.mu_c) / p.rho_rot,
        m0_sq=p.mu_c / p.rho_rot,
        v0=v0,
        v3_sq=float(v3_sq),
        v4_sq=float(v4_sq),
        discriminant=float(disc),
    )


def discriminant_forms(p: MaterialParams):
    """Both sides of the discriminant identity: the quadratic-formula form
    ``(a + c)^2 - 4 (a c - M12 M21)`` and the sum-of-squares form."""
    M = coupling_matrix(p)
    a, c = M[1, 1], M[0, 0]
    lhs = (a + c) ** 2 - 4 * (a * c - M[0, 1] * M[1, 0])
    rhs = (a - c) ** 2 + 16 * (p.rho_rot / p.rho) * M[0, 1] ** 2
    return float(lhs), float(rhs)


def b_of_v(p: MaterialParams, v: float) -> float:
    v_el2 = (p.lam + 2 * p.mu) / p.rho
    gap = v * v - v_el2
    if abs(gap) <= POLE_RTOL * v_el2:
        raise PoleError(f"b(v) has a pole at v = v_elas = {math.sqrt(v_el2):.15g}")
    return -(p.lam**2 / (p.rho * gap) + (p.lam + p.mu)) / p.rho_rot


@dataclass(frozen=True)
class DispersionPoint:
    """k at one speed. ``status`` is ``"ok"``, ``"forbidden"`` or ``"pole"``."""

    v: float
    status: str
    k: float | None = None
    k_sq: float | None = None

    @property
    def defined(self):
        return self.status == "ok"


def _quartic(p: MaterialParams, v: float) -> float:
    """Denominator of k^2 scaled by 9 rho rho_rot (first line of the closed form)."""
    e = p.lam + 2 * p.mu - v * v * p.rho
    return (3 * e * (p.kappa1 + 6 * p.kappa3) - 9 * v * v * p.rho_rot * e
            - (3 * p.chi1 - p.chi3) ** 2)


def _quartic_scale(p: MaterialParams, v: float) -> float:
    e = abs(p.lam + 2 * p.mu) + v * v * p.rho
    return (3 * e * abs(p.kappa1 + 6 * p.kappa3) + 9 * v * v * p.rho_rot * e
            + (3 * p.chi1 - p.chi3) ** 2)


def k_of_v(p: MaterialParams, v: float) -> DispersionPoint:
    """Wavenumber of the kink traveling at speed ``v >= 0``."""
    if v < 0:
        raise ValueError("k_of_v expects v >= 0")
    den = _quartic(p, v)
    if abs(den) <= POLE_RTOL * _quartic_scale(p, v):
        return DispersionPoint(v, "pole")
    num = p.lam**2 + (p.lam + 2 * p.mu - v * v * p.rho) * p.mu_c
    # at v = v0 the numerator cancels to rounding; snap it to the exact zero
    if abs(num) <= ZERO_RTOL * (p.lam**2 + (abs(p.lam + 2 * p.mu) + v * v * p.rho) * p.mu_c):
        num = 0.0
    k_sq = 9 * num / den
    if k_sq < 0:
        return DispersionPoint(v, "forbidden", k_sq=k_sq)
    return DispersionPoint(v, "ok", k=3 * math.sqrt(num / den), k_sq=k_sq)


def k_squared_from_mass(p: MaterialParams, v: float, mass_sq: float | None = None) -> float:
    """``k^2 = (v_el^2 - v^2) / (v^4 - tr(M) v^2 + det M) * mass^2``.

    With ``mass_sq=None`` the mass is ``m^2 + b(v)``; pass ``m0^2`` for the
    linearised wavenumber.
    """
    d = derive(p)
    if mass_sq is None:
        mass_sq = d.m_sq + b_of_v(p, v)
    v2 = v * v
    quartic = v2 * v2 - np.trace(d.M) * v2 + d.det_M
    if abs(quartic) <= POLE_RTOL * (v2 * v2 + abs(np.trace(d.M)) * v2 + abs(d.det_M)):
        raise PoleError(f"k^2 has a pole at v = {v:.15g}")
    return (d.v_elas**2 - v2) / quartic * mass_sq


def k0_of_v(p: MaterialParams, v: float) -> DispersionPoint:
    """Linearised-model wavenumber with mass ``m0^2 = mu_c / rho_rot``."""
    if v < 0:
        raise ValueError("k0_of_v expects v >= 0")
    try:
        k_sq = k_squared_from_mass(p, v, p.mu_c / p.rho_rot)
    except PoleError:
        return DispersionPoint(v, "pole")
    if k_sq < 0:
        return DispersionPoint(v, "forbidden", k_sq=k_sq)
    return DispersionPoint(v, "ok", k=math.sqrt(k_sq), k_sq=k_sq)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool

    def contains(self, v):
        above = v >= self.lo if self.lo_closed else v > self.lo
        below = v <= self.hi if self.hi_closed else v < self.hi
        return above and below

    def to_dict(self):
        return {"lo": self.lo, "hi": self.hi, "lo_closed": self.lo_closed,
                "hi_closed": self.hi_closed}


@dataclass(frozen=True)
class ClassificationReport:
    regime: str
    v0: float
    v3: float | None
    v4: float
    allowed_intervals: list = field(default_factory=list)
    boundary: bool = False
    notes: str = ""


def _k_sq_sign(p, v, d):
    num = p.lam**2 + p.mu_c * p.rho * (d.v_elas**2 - v * v)
    den = (v * v - d.v3_sq) * (v * v - d.v4_sq)
    return np.sign(num) * np.sign(den)


def _is_root(v, d):
    roots = [d.v4] + ([d.v3] if d.v3 is not None else [])
    return any(abs(v - r) <= DEGENERATE_SPEED * max(1.0, r) for r in roots)


def classify(p: MaterialParams) -> ClassificationReport:
    """Regime label and the speed intervals where a kink exists (k^2 > 0).

    ``c`` when ``3 chi1 - chi3 = 0``, ``d`` when additionally
    ``v_elas = v_rot``; otherwise ``a`` if ``v0 >= v4`` and ``b`` if
    ``v0 < v4``. A tie within ``BOUNDARY_TOL`` is reported as ``a`` with
    ``boundary=True``.
    """
    d = derive(p)
    notes = []
    boundary = False
    if abs(3 * p.chi1 - p.chi3) <= DEGENERATE_CHI:
        regime = "d" if abs(d.v_elas - d.v_rot) < DEGENERATE_SPEED else "c"
        notes.append("M is diagonal (3 chi1 - chi3 = 0)")
    elif d.v0 >= d.v4 - BOUNDARY_TOL:
        regime = "a"
        if abs(d.v0 - d.v4) <= BOUNDARY_TOL:
            boundary = True
            notes.append("v0 coincides with v4 within tolerance; labelled a")
    else:
        regime = "b"
    if math.isinf(d.v0):
        notes.append("mu_c = 0: v0 is infinite")
    if d.v3 is None:
        notes.append("det M < 0: v3 is imaginary")

    critical = {0.0, d.v4}
    if d.v3 is not None and d.v3 > 0:
        critical.add(d.v3)
    if math.isfinite(d.v0):
        critical.add(d.v0)
    edges = []
    for c in sorted(critical):
        # coincident roots (type d) leave no interval between them
        if edges and c - edges[-1] <= DEGENERATE_SPEED * max(1.0, c):
            continue
        edges.append(c)
    edges.append(math.inf)
    intervals = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = lo + 1.0 if math.isinf(hi) else 0.5 * (lo + hi)
        sign = _k_sq_sign(p, mid, d)
        point = k_of_v(p, mid)
        if (sign > 0) != point.defined:
            raise AssertionError(f"sign analysis disagrees with k_of_v at v = {mid}")
        if sign <= 0:
            continue
        lo_closed = lo == 0.0 or lo == d.v0
        hi_closed = hi == d.v0
        if intervals and intervals[-1].hi == lo and not _is_root(lo, d):
            prev = intervals.pop()
            intervals.append(Interval(prev.lo, hi, prev.lo_closed, hi_closed))
        else:
            intervals.append(Interval(lo, hi, lo_closed, hi_closed))
    return ClassificationReport(regime, d.v0, d.v3, d.v4, intervals, boundary, "; ".join(notes))


@dataclass(frozen=True)
class ApproxRoots:
    v3: float
    v4: float
    epsilon: float


def approx_roots(p: MaterialParams) -> ApproxRoots:
    """First-order expansion of ``v3, v4`` in the weak-coupling parameter

    ``epsilon = (rho_rot / rho) v_chi^4 / (v_elas^2 - v_rot^2)^2``.
    """
    d = derive(p)
    if abs(d.v_elas - d.v_rot) < DEGENERATE_SPEED:
        raise ValueError("expansion invalid for v_elas = v_rot")
    a, c = d.v_elas**2, d.v_rot**2
    shift = 2 * p.rho_rot * d.v_chi_sq**2 / (p.rho * (a - c))
    elas_branch = d.v_elas * (1 + shift / a)
    rot_branch = d.v_rot * (1 - shift / c)
    eps = p.rho_rot / p.rho * d.v_chi_sq**2 / (a - c) ** 2
    lo, hi = sorted((elas_branch, rot_branch))
    return ApproxRoots(v3=lo, v4=hi, epsilon=eps)


def rescale_factor(p: MaterialParams, v: float) -> float:
    """``A(v) = v_rot^2 + M12 M21 / (v^2 - v_elas^2)``; ``z = sqrt(A) z_hat``."""
    d = derive(p)
    gap = v * v - d.v_elas**2
    if abs(gap) <= POLE_RTOL * d.v_elas**2:
        raise PoleError("rescaling has a pole at v = v_elas")
    return d.v_rot**2 + d.M[0, 1] * d.M[1, 0] / gap


def to_rescaled(p: MaterialParams, v: float, z, t=0.0):
    """Map ``(z, v)`` to ``(z_hat, v_hat)``; time is not rescaled."""
    a = rescale_factor(p, v)
    if a <= 0:
        raise ForbiddenRegion(f"rescale factor A(v) = {a:.6g} <= 0 at v = {v}")
    root = math.sqrt(a)
    return np.asarray(z, dtype=float) / root, v / root


def from_rescaled(p: MaterialParams, v: float, z_hat):
    return np.asarray(z_hat, dtype=float) * math.sqrt(rescale_factor(p, v))


def rescale_roundtrip(p: MaterialParams, v: float, z, t, mass: str = "full") -> float:
    """Max difference between ``k (z - v t)`` and ``kappa (z_hat - v_hat t)``.

    ``mass="full"`` uses ``m^2 + b`` with ``k`` from :func:`k_of_v`;
    ``mass="linearised"`` uses ``m0^2`` with ``k0``.
    """
    z = np.asarray(z, dtype=float)
    t = np.asarray(t, dtype=float)
    d = derive(p)
    z_hat, v_hat = to_rescaled(p, v, z)
    if 1 - v_hat**2 <= 0:
        raise ForbiddenRegion(f"1 - v_hat^2 = {1 - v_hat**2:.6g} <= 0")
    if mass == "full":
        mass_sq = d.m_sq + b_of_v(p, v)
        point = k_of_v(p, v)
    elif mass == "linearised":
        mass_sq = d.m0_sq
        point = k0_of_v(p, v)
    else:
        raise ValueError(f"unknown mass {mass!r}")
    if not point.defined or mass_sq <= 0:
        raise ForbiddenRegion(f"no real wavenumber at v = {v} ({point.status})")
    kappa = math.sqrt(mass_sq / (1 - v_hat**2))
    # recover z from z_hat so the residual covers both maps
    z_back = from_rescaled(p, v, z_hat)
    lhs = point.k * (z_back - v * t)
    rhs = kappa * (z_hat - v_hat * t)
    return float(np.max(np.abs(lhs - rhs)))


def amplitude_coefficients(p: MaterialParams, v: float):
    """The two prefactors that set the displacement amplitude.

    ``c1 = 16 rho_rot v_chi^2 / (rho (v^2 - v_elas^2))`` (equal to
    ``4 M21 / (v^2 - v_elas^2)``) and ``c2 = 4 lambda / (rho k (v^2 - v_elas^2))``.
    """
    d = derive(p)
    gap = v * v - d.v_elas**2
    if abs(gap) <= POLE_RTOL * d.v_elas**2:
        raise PoleError("amplitude coefficients have a pole at v = v_elas")
    point = k_of_v(p, abs(v))
    if not point.defined or point.k == 0:
        raise ForbiddenRegion(f"k undefined or zero at v = {v} ({point.status})")
    c1 = 16 * p.rho_rot * d.v_chi_sq / (p.rho * gap)
    c2 = 4 * p.lam / (p.rho * point.k * gap)
    return c1, c2
