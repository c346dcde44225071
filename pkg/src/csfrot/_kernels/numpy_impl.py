"""Vectorized numpy kernels for the graph flow (reference backend).

Family codes: 0 = power ``(-z)**(-alpha)``, 1 = exp_inverse ``exp(-1/z)``.
"""

import numpy as np


def profile_eval(code, alpha, z):
    if code == 0:
        m = -z
        r = m ** (-alpha)
        return r, alpha * r / m, alpha * (alpha + 1.0) * r / (m * m)
    r = np.exp(-1.0 / z)
    z2 = z * z
    return r, r / z2, r * (1.0 / (z2 * z2) - 2.0 / (z2 * z))


def _derivs(z, dtheta):
    zp = np.roll(z, -1)
    zm = np.roll(z, 1)
    return (zp - zm) / (2.0 * dtheta), (zp - 2.0 * z + zm) / (dtheta * dtheta)


def graph_rhs(z, dtheta, r, r1, r2):
    """∂_t z at fixed θ, ``-κ w / (r sqrt(q))``."""
    zd, zdd = _derivs(z, dtheta)
    q = r1 * r1 + 1.0
    sq = np.sqrt(q)
    w2 = r * r + q * zd * zd
    num = (r1 * zd * zd / sq) * (2.0 * q - r * r2) + (r / sq) * (r * r1 - zdd * q)
    return -num / (w2 * r * sq)


def rhs_builtin(code, alpha, z, dtheta):
    r, r1, r2 = profile_eval(code, alpha, z)
    return graph_rhs(z, dtheta, r, r1, r2)


def rk4_step(code, alpha, z, dtheta, dt):
    k1 = rhs_builtin(code, alpha, z, dtheta)
    k2 = rhs_builtin(code, alpha, z + 0.5 * dt * k1, dtheta)
    k3 = rhs_builtin(code, alpha, z + 0.5 * dt * k2, dtheta)
    k4 = rhs_builtin(code, alpha, z + dt * k3, dtheta)
    return z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def min_w2(z, dtheta, r, r1):
    zd = (np.roll(z, -1) - np.roll(z, 1)) / (2.0 * dtheta)
    return float(np.min(r * r + (r1 * r1 + 1.0) * zd * zd))


def cfl_dt(code, alpha, z, dtheta, safety):
    r, r1, _ = profile_eval(code, alpha, z)
    return safety * dtheta * dtheta * min_w2(z, dtheta, r, r1)


def diagnostics_from_arrays(z, dtheta, r, r1, r2, k):
    """(z_min, z_max, v_max, kappa_min, kappa_max, length, g_max, max k v²)."""
    zd, zdd = _derivs(z, dtheta)
    q = r1 * r1 + 1.0
    sq = np.sqrt(q)
    w2 = r * r + q * zd * zd
    w = np.sqrt(w2)
    kappa = ((r1 * zd * zd / sq) * (2.0 * q - r * r2) + (r / sq) * (r * r1 - zdd * q)) / (w2 * w)
    v2 = w2 / (r * r)
    kv2 = k * v2
    g = v2 / (1.0 - kv2) * kappa * kappa
    return (
        float(np.min(z)),
        float(np.max(z)),
        float(np.sqrt(np.max(v2))),
        float(np.min(kappa)),
        float(np.max(kappa)),
        float(np.sum(w) * dtheta),
        float(np.max(g)),
        float(np.max(kv2)),
    )


def diagnostics(code, alpha, z, dtheta, k):
    r, r1, r2 = profile_eval(code, alpha, z)
    return diagnostics_from_arrays(z, dtheta, r, r1, r2, k)
