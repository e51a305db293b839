"""3x3 matrix algebra and z-only matrix fields.

Matrix fields are ``(n, 3, 3)`` arrays sampled on a uniform grid of spacing
``h``. Only the z-direction derivative is non-zero, so every ``Curl`` reduces
to a contraction of the Levi-Civita symbol with ``(0, 0, d/dz)``.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidField

MIN_SAMPLES = 5

#: Levi-Civita symbol with eps[0, 1, 2] = +1.
LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_i, _k, _j] = -1.0

IDENTITY = np.eye(3)


def sym(m):
    return 0.5 * (m + np.swapaxes(m, -1, -2))


def skew(m):
    return 0.5 * (m - np.swapaxes(m, -1, -2))


def trace(m):
    return np.trace(m, axis1=-2, axis2=-1)


def dev(m):
    return m - trace(m)[..., None, None] * IDENTITY / 3.0


def frobenius(a, b):
    """Frobenius product ``tr(A B^T)``; broadcasts over leading axes."""
    return np.einsum("...ij,...ij->...", a, b)


def rotation_z(phi):
    """Rotation by ``phi`` about the z axis; accepts scalars or arrays."""
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    out = np.zeros(phi.shape + (3, 3))
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    out[..., 2, 2] = 1.0
    return out


def rotation_z_dphi(phi):
    """Derivative of :func:`rotation_z` with respect to the angle."""
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    out = np.zeros(phi.shape + (3, 3))
    out[..., 0, 0] = -s
    out[..., 0, 1] = -c
    out[..., 1, 0] = c
    out[..., 1, 1] = -s
    return out


def _check_grid(values, h):
    values = np.asarray(values, dtype=float)
    if values.shape[0] < MIN_SAMPLES:
        raise InvalidField(f"need at least {MIN_SAMPLES} samples, got {values.shape[0]}")
    if not h > 0:
        raise InvalidField(f"grid spacing must be positive, got {h}")
    if not np.all(np.isfinite(values)):
        raise InvalidField("field contains non-finite entries")
    return values


def d_dz(values, h, periodic=False):
    """First derivative along axis 0.

    Central second-order stencil in the interior; one-sided second-order
    stencils at the two ends unless ``periodic``.
    """
    f = _check_grid(values, h)
    if periodic:
        return (np.roll(f, -1, axis=0) - np.roll(f, 1, axis=0)) / (2 * h)
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2 * h)
    out[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
    out[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
    return out


def d2_dz2(values, h, periodic=False):
    """Second derivative along axis 0 (one-sided second order at the ends)."""
    f = _check_grid(values, h)
    if periodic:
        return (np.roll(f, -1, axis=0) - 2 * f + np.roll(f, 1, axis=0)) / h**2
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / h**2
    out[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / h**2
    out[-1] = (2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]) / h**2
    return out


def curl_from_dz(dm_dz):
    """``(Curl M)_ij = eps_jrs d_r M_is`` given only ``d_z M``."""
    return np.einsum("js,...is->...ij", LEVI_CIVITA[:, 2, :], dm_dz)


def matrix_curl(samples, h, periodic=False):
    """Matrix Curl of a z-dependent field by finite differences.

    Column 3 of the result is identically zero; columns 1 and 2 are
    ``-d_z M[:, 1]`` and ``+d_z M[:, 0]``.
    """
    samples = _check_grid(samples, h)
    if samples.shape[1:] != (3, 3):
        raise InvalidField(f"expected (n, 3, 3) samples, got {samples.shape}")
    return curl_from_dz(d_dz(samples, h, periodic=periodic))


def grad_star(scalar, h, periodic=False):
    """Skew embedding ``(grad f)*_ik = eps_ijk d_j f`` of a z-only gradient."""
    df = d_dz(scalar, h, periodic=periodic)
    return LEVI_CIVITA[:, 2, :] * df[:, None, None]


def polar_decompose(f, tol=1e-15, max_iter=100):
    """Polar factors ``F = R U`` by scaled Newton iteration on the rotation.

    Iterates ``R <- (g R + R^{-T} / g) / 2`` with determinant scaling
    ``g = |det R|^{-1/3}`` until the relative Frobenius change drops below
    ``tol`` or stalls at rounding level; afterwards ``U = sym(R^T F)``. Works on a single matrix
    or on a stack ``(..., 3, 3)``.
    """
    f = np.asarray(f, dtype=float)
    if f.shape[-2:] != (3, 3):
        raise InvalidField(f"expected (..., 3, 3) input, got {f.shape}")
    if not np.all(np.isfinite(f)):
        raise InvalidField("matrix contains non-finite entries")
    det = np.linalg.det(f)
    if np.any(det <= 0):
        raise InvalidField("polar decomposition requires det F > 0")

    r = f.copy()
    last = np.inf
    for _ in range(max_iter):
        g = np.abs(np.linalg.det(r)) ** (-1.0 / 3.0)
        r_new = 0.5 * (g[..., None, None] * r
                       + np.swapaxes(np.linalg.inv(r), -1, -2) / g[..., None, None])
        change = np.max(np.linalg.norm(r_new - r, axis=(-2, -1))
                        / np.linalg.norm(r_new, axis=(-2, -1)))
        r = r_new
        # past the quadratic phase, stop once rounding makes the change stall
        if change <= tol or (change < 1e-8 and change >= last):
            break
        last = change
    u = sym(np.swapaxes(r, -1, -2) @ f)
    return r, u


# -- identity suite ---------------------------------------------------------

def _fd_gradient(func, x, step):
    grad = np.zeros_like(x)
    for i in range(3):
        for j in range(3):
            e = np.zeros_like(x)
            e[i, j] = step
            grad[i, j] = (func(x + e) - func(x - e)) / (2 * step)
    return grad


def _periodic_field(rng, z, modes=3, shape=(3, 3)):
    a = rng.uniform(-1, 1, size=(modes,) + shape)
    b = rng.uniform(-1, 1, size=(modes,) + shape)
    c = rng.uniform(-1, 1, size=shape)
    m = np.arange(1, modes + 1)
    cos = np.cos(np.outer(z, m))
    sin = np.sin(np.outer(z, m))
    return c + np.einsum("nm,m...->n...", cos, a) + np.einsum("nm,m...->n...", sin, b)


def _curl_variation_residual(rng, n):
    """Residual of the integrated curl-variation identities on one random trial.

    Returns normalised residuals ``(general, a_equal_identity)``. The general
    one is Richardson-extrapolated from ``n`` and ``2n`` grids to remove the
    O(h^2) product-rule error of the central stencil.
    """
    state = rng.bit_generator.state
    results = []
    for npts in (n, 2 * n):
        rng.bit_generator.state = state
        z = np.linspace(0, 2 * np.pi, npts, endpoint=False)
        h = z[1] - z[0]
        a = _periodic_field(rng, z)
        b = _periodic_field(rng, z)
        dr = _periodic_field(rng, z)
        f = trace(a)
        curl_dr = matrix_curl(dr, h, periodic=True)
        curl_b = matrix_curl(b, h, periodic=True)
        gstar = grad_star(f, h, periodic=True)
        lhs = h * np.sum(f * frobenius(b, curl_dr))
        rhs = h * np.sum(frobenius(-b @ gstar + f[:, None, None] * curl_b, dr))
        scale = np.sqrt(h * np.sum(frobenius(f[:, None, None] * b, f[:, None, None] * b))
                        * h * np.sum(frobenius(curl_dr, curl_dr)))
        lhs1 = h * np.sum(frobenius(b, curl_dr))
        rhs1 = h * np.sum(frobenius(curl_b, dr))
        scale1 = np.sqrt(h * np.sum(frobenius(b, b)) * h * np.sum(frobenius(curl_dr, curl_dr)))
        results.append(((lhs - rhs) / scale, (lhs1 - rhs1) / scale1))
    (g1, i1), (g2, i2) = results
    general = abs((4 * g2 - g1) / 3)
    return general, max(abs(i1), abs(i2))


def matrix_identity_suite(trials=100, seed=20240601, tol=1e-6, fd_step=1e-6, grid=1024):
    """Numerically verify the matrix-calculus and curl-variation identities.

    Random matrices have entries in [-1, 1]. Each trace derivative is checked
    against central finite differences with step ``fd_step``; the curl
    identities use smooth periodic fields on ``grid`` points. Returns a
    report dict with the worst residual per identity and the list of
    identities that exceeded ``tol``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    worst = {
        "d tr(XA)/dX = A^T": 0.0,
        "d tr(AXB)/dX = A^T B^T": 0.0,
        "d tr(XX^T)/dX = 2X": 0.0,
        "d tr(AXBX)/dX = A^T X^T B^T + B^T X^T A^T": 0.0,
        "tr(A) B : d(Curl R) = (-B (grad tr A)* + tr(A) Curl B) : dR": 0.0,
        "B : d(Curl R) = Curl B : dR": 0.0,
    }
    keys = list(worst)
    for _ in range(trials):
        x, a, b = (rng.uniform(-1, 1, (3, 3)) for _ in range(3))
        cases = [
            (lambda m: np.trace(m @ a), a.T),
            (lambda m: np.trace(a @ m @ b), a.T @ b.T),
            (lambda m: np.trace(m @ m.T), 2 * x),
            (lambda m: np.trace(a @ m @ b @ m), a.T @ x.T @ b.T + b.T @ x.T @ a.T),
        ]
        for key, (func, exact) in zip(keys, cases):
            approx = _fd_gradient(func, x, fd_step)
            res = np.linalg.norm(approx - exact) / max(np.linalg.norm(exact), 1.0)
            worst[key] = max(worst[key], float(res))
        general, ident = _curl_variation_residual(rng, grid)
        worst[keys[4]] = max(worst[keys[4]], float(general))
        worst[keys[5]] = max(worst[keys[5]], float(ident))
    failed = [k for k, v in worst.items() if not v <= tol]
    return {
        "seed": seed,
        "trials": trials,
        "tolerance": tol,
        "residuals": worst,
        "failed": failed,
        "passed": not failed,
    }
