"""Loop kernels compiled with numba; same signatures as ``numpy_impl``."""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _profile_point(code, alpha, z):
    if code == 0:
        m = -z
        r = m ** (-alpha)
        return r, alpha * r / m, alpha * (alpha + 1.0) * r / (m * m)
    r = math.exp(-1.0 / z)
    z2 = z * z
    return r, r / z2, r * (1.0 / (z2 * z2) - 2.0 / (z2 * z))


@njit(cache=True)
def profile_eval(code, alpha, z):
    n = z.size
    r = np.empty(n)
    r1 = np.empty(n)
    r2 = np.empty(n)
    for i in range(n):
        r[i], r1[i], r2[i] = _profile_point(code, alpha, z[i])
    return r, r1, r2


@njit(cache=True)
def _rhs_point(zi, zp, zm, inv2h, invh2, r, r1, r2):
    zd = (zp - zm) * inv2h
    zdd = (zp - 2.0 * zi + zm) * invh2
    q = r1 * r1 + 1.0
    sq = math.sqrt(q)
    w2 = r * r + q * zd * zd
    num = (r1 * zd * zd / sq) * (2.0 * q - r * r2) + (r / sq) * (r * r1 - zdd * q)
    return -num / (w2 * r * sq)


@njit(cache=True)
def graph_rhs(z, dtheta, r, r1, r2):
    n = z.size
    out = np.empty(n)
    inv2h = 1.0 / (2.0 * dtheta)
    invh2 = 1.0 / (dtheta * dtheta)
    for i in range(n):
        out[i] = _rhs_point(z[i], z[(i + 1) % n], z[i - 1], inv2h, invh2, r[i], r1[i], r2[i])
    return out


@njit(cache=True)
def _rhs_into(code, alpha, z, dtheta, out):
    n = z.size
    inv2h = 1.0 / (2.0 * dtheta)
    invh2 = 1.0 / (dtheta * dtheta)
    for i in range(n):
        r, r1, r2 = _profile_point(code, alpha, z[i])
        out[i] = _rhs_point(z[i], z[(i + 1) % n], z[i - 1], inv2h, invh2, r, r1, r2)


@njit(cache=True)
def rhs_builtin(code, alpha, z, dtheta):
    out = np.empty(z.size)
    _rhs_into(code, alpha, z, dtheta, out)
    return out


@njit(cache=True)
def rk4_step(code, alpha, z, dtheta, dt):
    n = z.size
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    _rhs_into(code, alpha, z, dtheta, k1)
    for i in range(n):
        tmp[i] = z[i] + 0.5 * dt * k1[i]
    _rhs_into(code, alpha, tmp, dtheta, k2)
    for i in range(n):
        tmp[i] = z[i] + 0.5 * dt * k2[i]
    _rhs_into(code, alpha, tmp, dtheta, k3)
    for i in range(n):
        tmp[i] = z[i] + dt * k3[i]
    _rhs_into(code, alpha, tmp, dtheta, k4)
    out = np.empty(n)
    for i in range(n):
        out[i] = z[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    return out


@njit(cache=True)
def cfl_dt(code, alpha, z, dtheta, safety):
    n = z.size
    best = np.inf
    for i in range(n):
        r, r1, _ = _profile_point(code, alpha, z[i])
        zd = (z[(i + 1) % n] - z[i - 1]) / (2.0 * dtheta)
        w2 = r * r + (r1 * r1 + 1.0) * zd * zd
        if w2 < best:
            best = w2
    return safety * dtheta * dtheta * best


@njit(cache=True)
def diagnostics(code, alpha, z, dtheta, k):
    n = z.size
    z_min = np.inf
    z_max = -np.inf
    v2_max = 0.0
    k_min = np.inf
    k_max = -np.inf
    length = 0.0
    g_max = -np.inf
    kv2_max = 0.0
    inv2h = 1.0 / (2.0 * dtheta)
    invh2 = 1.0 / (dtheta * dtheta)
    for i in range(n):
        zi = z[i]
        zp = z[(i + 1) % n]
        zm = z[i - 1]
        r, r1, r2 = _profile_point(code, alpha, zi)
        zd = (zp - zm) * inv2h
        zdd = (zp - 2.0 * zi + zm) * invh2
        q = r1 * r1 + 1.0
        sq = math.sqrt(q)
        w2 = r * r + q * zd * zd
        w = math.sqrt(w2)
        kap = ((r1 * zd * zd / sq) * (2.0 * q - r * r2) + (r / sq) * (r * r1 - zdd * q)) / (w2 * w)
        v2 = w2 / (r * r)
        kv2 = k * v2
        g = v2 / (1.0 - kv2) * kap * kap
        z_min = min(z_min, zi)
        z_max = max(z_max, zi)
        v2_max = max(v2_max, v2)
        k_min = min(k_min, kap)
        k_max = max(k_max, kap)
        length += w
        g_max = max(g_max, g)
        kv2_max = max(kv2_max, kv2)
    return z_min, z_max, math.sqrt(v2_max), k_min, k_max, length * dtheta, g_max, kv2_max
