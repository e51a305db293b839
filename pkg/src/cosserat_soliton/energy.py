"""Energy functionals of the one-axis ansatz and their variational check.

Fields are ``phi(z)`` (microrotation about z) and ``psi(z)`` (longitudinal
displacement), so ``R = rotation_z(phi)`` and ``F = 1 + diag(0, 0, psi_z)``.
Every functional is evaluated twice, once from its definition and once from
its trace expansion, and the two densities must agree pointwise.

Writing ``c = cos phi`` and ``p = psi_z``, the densities reduce to::

    elastic      mu (2 (c - 1)^2 + p^2) + lambda/2 (2 (c - 1) + p)^2
    curvature    (2 kappa1 / 3 + 4 kappa3) phi_z^2
    interaction  2 chi1 phi_z (2 c + 1 + p) + 2 chi3 / 3 phi_z (c - 1 - p)
    coupling     4 mu_c (1 - c)

``reduced_density`` implements these directly; the simulation uses it for
its energy diagnostic.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tensor as T
from .errors import CosseratError, InvalidField
from .params import MaterialParams

CURL_ROUTES = ("chain", "stencil")
DUAL_RTOL = 1e-12


@dataclass(frozen=True)
class AnsatzFields:
    phi: np.ndarray
    psi: np.ndarray
    h: float
    phi_t: np.ndarray | None = None
    psi_t: np.ndarray | None = None

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        psi = np.asarray(self.psi, dtype=float)
        if phi.ndim != 1 or phi.shape != psi.shape:
            raise InvalidField("phi and psi must be 1-D arrays of equal length")
        if phi.size < T.MIN_SAMPLES:
            raise InvalidField(f"need at least {T.MIN_SAMPLES} samples, got {phi.size}")
        if not self.h > 0:
            raise InvalidField(f"grid spacing must be positive, got {self.h}")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "psi", psi)
        for name in ("phi_t", "psi_t"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.asarray(arr, dtype=float)
                if arr.shape != phi.shape:
                    raise InvalidField(f"{name} must match the field length")
                object.__setattr__(self, name, arr)
        for name in ("phi", "psi", "phi_t", "psi_t"):
            arr = getattr(self, name)
            if arr is not None and not np.all(np.isfinite(arr)):
                raise InvalidField(f"{name} contains non-finite entries")

    @property
    def phi_z(self):
        return T.d_dz(self.phi, self.h)

    @property
    def psi_z(self):
        return T.d_dz(self.psi, self.h)


def _integrate(density, h):
    return float(np.trapezoid(density, dx=h))


def _kinematics(fields: AnsatzFields, curl_route="chain"):
    if curl_route not in CURL_ROUTES:
        raise ValueError(f"curl_route must be one of {CURL_ROUTES}")
    rbar = T.rotation_z(fields.phi)
    f = np.broadcast_to(T.IDENTITY, rbar.shape).copy()
    f[:, 2, 2] += fields.psi_z
    if curl_route == "chain":
        # d_z R = phi_z dR/dphi keeps R^T Curl R exactly symmetric
        dr = T.rotation_z_dphi(fields.phi) * fields.phi_z[:, None, None]
        curl = T.curl_from_dz(dr)
    else:
        curl = T.matrix_curl(rbar, fields.h)
    return rbar, f, curl


def _rt(rbar):
    return np.swapaxes(rbar, -1, -2)


def _check_dual(name, a, b, *scales):
    scale = 1.0 + sum(np.abs(s) for s in scales)
    err = np.max(np.abs(a - b) / scale)
    if not err <= DUAL_RTOL:
        raise CosseratError(f"{name}: definition and expansion differ by {err:.3e}")
    return float(err)


# -- elastic ---------------------------------------------------------------

def elastic_density(p: MaterialParams, fields: AnsatzFields, form="definition"):
    rbar, f, _ = _kinematics(fields)
    x = _rt(rbar) @ f
    if form == "definition":
        e = T.sym(x) - T.IDENTITY
        return p.mu * T.frobenius(e, e) + 0.5 * p.lam * T.trace(e) ** 2
    if form == "expanded":
        tr_x = T.trace(x)
        return (3 * p.mu + 4.5 * p.lam + 0.5 * p.mu * T.trace(x @ x)
                + 0.5 * p.mu * T.trace(f @ _rt(f)) - (2 * p.mu + 3 * p.lam) * tr_x
                + 0.5 * p.lam * tr_x**2)
    raise ValueError("form must be 'definition' or 'expanded'")


def energy_elastic(p: MaterialParams, fields: AnsatzFields, cross_check=True):
    """Integrated elastic energy ``mu |sym R^T F - 1|^2 + lambda/2 tr(...)^2``."""
    dens = elastic_density(p, fields)
    if cross_check:
        exp = elastic_density(p, fields, "expanded")
        _check_dual("elastic", dens, exp, 3 * p.mu + 4.5 * p.lam, exp)
    return _integrate(dens, fields.h)


# -- curvature -------------------------------------------------------------

def curvature_density(p: MaterialParams, fields: AnsatzFields, form="definition",
                      curl_route="chain"):
    rbar, _, curl = _kinematics(fields, curl_route)
    k = _rt(rbar) @ curl
    if form == "definition":
        ds = T.dev(T.sym(k))
        sk = T.skew(k)
        return (p.kappa1 * T.frobenius(ds, ds) + p.kappa2 * T.frobenius(sk, sk)
                + p.kappa3 * T.trace(k) ** 2)
    if form == "expanded":
        return (0.5 * (p.kappa1 - p.kappa2) * T.trace(k @ k)
                + 0.5 * (p.kappa1 + p.kappa2) * T.trace(_rt(curl) @ curl)
                - (p.kappa1 / 3 - p.kappa3) * T.trace(k) ** 2)
    raise ValueError("form must be 'definition' or 'expanded'")


def energy_curvature(p: MaterialParams, fields: AnsatzFields, cross_check=True,
                     curl_route="chain"):
    """Integrated curvature energy of ``R^T Curl R``.

    ``curl_route="chain"`` differentiates ``R(phi(z))`` by the chain rule;
    ``"stencil"`` applies :func:`tensor.matrix_curl` to the sampled rotations,
    which leaves an O(h^2) skew part in ``R^T Curl R``.
    """
    dens = curvature_density(p, fields, curl_route=curl_route)
    if cross_check:
        exp = curvature_density(p, fields, "expanded", curl_route)
        scale = (abs(p.kappa1) + abs(p.kappa2) + abs(p.kappa3)) * fields.phi_z**2
        _check_dual("curvature", dens, exp, scale, dens)
    return _integrate(dens, fields.h)


# -- interaction -----------------------------------------------------------

def interaction_density(p: MaterialParams, fields: AnsatzFields, form="definition",
                        curl_route="chain"):
    rbar, f, curl = _kinematics(fields, curl_route)
    k = _rt(rbar) @ curl
    x = _rt(rbar) @ f
    if form == "definition":
        return (p.chi1 * T.trace(k) * T.trace(x)
                + p.chi3 * T.frobenius(T.dev(T.sym(k)), T.dev(T.sym(x - T.IDENTITY))))
    if form == "expanded":
        return ((p.chi1 - p.chi3 / 3) * T.trace(k) * T.trace(x)
                + 0.5 * p.chi3 * (T.trace(_rt(curl) @ f) + T.trace(k @ x)))
    raise ValueError("form must be 'definition' or 'expanded'")


def energy_interaction(p: MaterialParams, fields: AnsatzFields, cross_check=True,
                       curl_route="chain"):
    dens = interaction_density(p, fields, curl_route=curl_route)
    if cross_check:
        exp = interaction_density(p, fields, "expanded", curl_route)
        scale = (abs(p.chi1) + abs(p.chi3)) * np.abs(fields.phi_z) * (3 + np.abs(fields.psi_z))
        _check_dual("interaction", dens, exp, scale)
    return _integrate(dens, fields.h)


# -- coupling ----------------------------------------------------------------

def _admissible(fields: AnsatzFields):
    stretch = 1.0 + fields.psi_z
    if np.any(stretch <= 0):
        i = int(np.argmax(stretch <= 0))
        raise InvalidField(f"1 + psi_z = {stretch[i]:.6g} <= 0 at index {i} (det F <= 0)")


def coupling_density(p: MaterialParams, fields: AnsatzFields, form="definition"):
    _admissible(fields)
    rbar, f, _ = _kinematics(fields)
    r, _ = T.polar_decompose(f)
    if form == "definition":
        e = _rt(rbar) @ r - T.IDENTITY
        return p.mu_c * T.frobenius(e, e)
    if form == "expanded":
        return 2 * p.mu_c * (3 - T.trace(_rt(rbar) @ r))
    raise ValueError("form must be 'definition' or 'expanded'")


def energy_coupling(p: MaterialParams, fields: AnsatzFields, cross_check=True):
    """``mu_c |R^T polar(F) - 1|^2``; rejects fields with ``1 + psi_z <= 0``."""
    dens = coupling_density(p, fields)
    if cross_check:
        exp = coupling_density(p, fields, "expanded")
        _check_dual("coupling", dens, exp, 6 * p.mu_c)
    return _integrate(dens, fields.h)


def potential_energy(p: MaterialParams, fields: AnsatzFields, cross_check=False,
                     curl_route="chain"):
    return (energy_elastic(p, fields, cross_check)
            + energy_curvature(p, fields, cross_check, curl_route)
            + energy_interaction(p, fields, cross_check, curl_route)
            + energy_coupling(p, fields, cross_check))


def kinetic_energies(p: MaterialParams, fields: AnsatzFields):
    """``(rho/2 int psi_t^2, rho_rot int |R_t|^2)``."""
    if fields.phi_t is None or fields.psi_t is None:
        raise InvalidField("kinetic energies need phi_t and psi_t")
    r_t = T.rotation_z_dphi(fields.phi) * fields.phi_t[:, None, None]
    elastic = 0.5 * p.rho * _integrate(fields.psi_t**2, fields.h)
    rotational = p.rho_rot * _integrate(T.frobenius(r_t, r_t), fields.h)
    return elastic, rotational


def reduced_density(p: MaterialParams, phi, phi_z, psi_z):
    """Total potential density of the ansatz in closed form (see module doc)."""
    c = np.cos(phi)
    el = p.mu * (2 * (c - 1) ** 2 + psi_z**2) + 0.5 * p.lam * (2 * (c - 1) + psi_z) ** 2
    curv = (2 * p.kappa1 / 3 + 4 * p.kappa3) * phi_z**2
    inter = (2 * p.chi1 * phi_z * (2 * c + 1 + psi_z)
             + 2 * p.chi3 / 3 * phi_z * (c - 1 - psi_z))
    coup = 4 * p.mu_c * (1 - c)
    return el + curv + inter + coup


# -- variational check ----------------------------------------------------

def static_residuals(p: MaterialParams, fields: AnsatzFields):
    """Static parts of the two field equations, ``(E_phi, E_psi)``.

    ``E_phi`` is the bracket multiplying ``delta phi`` without the inertia
    term; ``E_psi`` the displacement equation without ``rho psi_tt``.
    Derivatives use the central stencils of :mod:`tensor`.
    """
    phi, h = fields.phi, fields.h
    s = np.sin(phi)
    phi_z, psi_z = fields.phi_z, fields.psi_z
    phi_zz, psi_zz = T.d2_dz2(phi, h), T.d2_dz2(fields.psi, h)
    e_phi = (4 * (p.lam + p.mu + p.mu_c) * s - 2 * (p.lam + p.mu) * np.sin(2 * phi)
             - 2 * p.lam * s * psi_z - 4 * (p.kappa1 / 3 + 2 * p.kappa3) * phi_zz
             - 2 * (p.chi1 - p.chi3 / 3) * psi_zz)
    e_psi = (-p.lam * (psi_zz - 2 * phi_z * s) - 2 * p.mu * psi_zz
             + 2 / 3 * (p.chi3 - 3 * p.chi1) * phi_zz)
    return e_phi, e_psi


def bump(z, center, width):
    """Smooth localized test function (Gaussian; negligible at the grid ends)."""
    return np.exp(-(((np.asarray(z) - center) / width) ** 2))


@dataclass(frozen=True)
class VariationReport:
    discrepancy_phi: float
    discrepancy_psi: float
    directional_phi: float
    directional_psi: float
    pairing_phi: float
    pairing_psi: float
    h: float
    h_fd: float
    tolerance: float

    @property
    def discrepancy(self):
        return max(self.discrepancy_phi, self.discrepancy_psi)

    @property
    def diverged(self):
        return self.discrepancy > 10 * self.tolerance

    def to_dict(self):
        return {
            "discrepancy_phi": self.discrepancy_phi,
            "discrepancy_psi": self.discrepancy_psi,
            "directional_phi": self.directional_phi,
            "directional_psi": self.directional_psi,
            "pairing_phi": self.pairing_phi,
            "pairing_psi": self.pairing_psi,
            "h": self.h,
            "h_fd": self.h_fd,
            "tolerance": self.tolerance,
            "diverged": self.diverged,
        }


def variational_check(p: MaterialParams, fields: AnsatzFields, h_fd: float = 1e-6,
                      eta_phi=None, eta_psi=None, tolerance: float = 1e-4,
                      curl_route="chain") -> VariationReport:
    """Compare the discrete first variation of the potential with the field equations.

    The total potential is differentiated in the directions ``eta_phi`` and
    ``eta_psi`` by central differences with step ``h_fd``; the result is
    compared with ``int E eta dz`` built from :func:`static_residuals`. The
    discrepancy is normalised by ``||E||_2 ||eta||_2`` so that a vanishing
    pairing (equilibrium states) is handled. Test fields should be negligible
    near the grid ends; boundary terms are not modelled.
    """
    if not 1e-8 <= h_fd <= 1e-4:
        raise ValueError("h_fd must lie in [1e-8, 1e-4]")
    n, h = fields.phi.size, fields.h
    z = np.arange(n) * h
    if eta_phi is None:
        eta_phi = bump(z, z[n // 2] + 0.1 * z[-1] * 0.5, 0.05 * z[-1])
    if eta_psi is None:
        eta_psi = bump(z, z[n // 2] - 0.1 * z[-1] * 0.5, 0.05 * z[-1])
    e_phi, e_psi = static_residuals(p, fields)

    def energy(phi, psi):
        return potential_energy(p, AnsatzFields(phi, psi, h), curl_route=curl_route)

    out = []
    for eta, res, which in ((eta_phi, e_phi, "phi"), (eta_psi, e_psi, "psi")):
        if which == "phi":
            plus = energy(fields.phi + h_fd * eta, fields.psi)
            minus = energy(fields.phi - h_fd * eta, fields.psi)
        else:
            plus = energy(fields.phi, fields.psi + h_fd * eta)
            minus = energy(fields.phi, fields.psi - h_fd * eta)
        directional = (plus - minus) / (2 * h_fd)
        pairing = _integrate(res * eta, h)
        norm = np.sqrt(_integrate(res**2, h) * _integrate(eta**2, h))
        disc = abs(directional - pairing) / norm if norm > 0 else abs(directional)
        out.append((float(disc), float(directional), float(pairing)))
    (dphi, dir_phi, pair_phi), (dpsi, dir_psi, pair_psi) = out
    return VariationReport(dphi, dpsi, dir_phi, dir_psi, pair_phi, pair_psi, h, h_fd,
                           tolerance)
