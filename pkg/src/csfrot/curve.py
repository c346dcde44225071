"""Closed curves that are graphs ``z = z(θ)`` over the parallels.

A :class:`GraphCurve` stores ``z`` on the uniform periodic grid
``θ_i = 2π i / n`` (no duplicated endpoint).  With ``ż = dz/dθ`` and
``q = r'² + 1`` the coordinate speed is ``w = sqrt(r² + q ż²)`` and the unit
normal has frame components ``u = <N, E_z> = r / w`` and
``n_theta = <N, E_θ> = -ż sqrt(q) / w``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .geometry import surface_scalars

MIN_SAMPLES = 16


@dataclass(frozen=True, eq=False)
class GraphCurve:
    z_values: np.ndarray

    def __post_init__(self):
        z = np.array(self.z_values, dtype=float)
        if z.ndim != 1:
            raise InputError("z_values must be one-dimensional")
        if z.size < MIN_SAMPLES:
            raise InputError(f"a graph curve needs at least {MIN_SAMPLES} samples, got {z.size}")
        if not np.all(np.isfinite(z)):
            raise InputError("z_values must be finite")
        z.setflags(write=False)
        object.__setattr__(self, "z_values", z)

    @classmethod
    def from_function(cls, fn, n):
        return cls(fn(2.0 * math.pi * np.arange(n) / n))

    @property
    def n(self):
        return self.z_values.size

    @property
    def theta_step(self):
        return 2.0 * math.pi / self.n

    @property
    def theta(self):
        return self.theta_step * np.arange(self.n)


@dataclass(frozen=True, eq=False)
class CurveFields:
    w: np.ndarray
    u: np.ndarray
    n_theta: np.ndarray
    kappa: np.ndarray
    v: np.ndarray
    zdot: np.ndarray
    zddot: np.ndarray


def fd_periodic(values, theta_step):
    """Second-order centered first and second differences with wraparound."""
    f = np.asarray(values, dtype=float)
    if f.ndim != 1 or f.size < 4:
        raise InputError("fd_periodic needs a 1-d array of length >= 4")
    fp = np.roll(f, -1)
    fm = np.roll(f, 1)
    d1 = (fp - fm) / (2.0 * theta_step)
    d2 = (fp - 2.0 * f + fm) / (theta_step * theta_step)
    return d1, d2


def graph_curvature(profile, z, zdot, zddot):
    """Curvature of a graph ``z(θ)`` from pointwise ``z, ż, z̈``.

    ``κ w³ = r' ż² (2q - r r'') / sqrt(q) + (r / sqrt(q)) (r r' - z̈ q)``.
    Note the ``1/sqrt(q)`` (not ``1/q``) on the ż² term.
    """
    profile.check_domain(z)
    r, r1, r2 = profile.arrays(z)
    zdot = np.asarray(zdot, dtype=float)
    zddot = np.asarray(zddot, dtype=float)
    q = r1 * r1 + 1.0
    sq = np.sqrt(q)
    w2 = r * r + q * zdot * zdot
    num = (r1 * zdot * zdot / sq) * (2.0 * q - r * r2) + (r / sq) * (r * r1 - zddot * q)
    return num / (w2 * np.sqrt(w2))


def curve_fields(profile, curve):
    z = curve.z_values
    profile.check_domain(z)
    zdot, zddot = fd_periodic(z, curve.theta_step)
    r, r1, _ = profile.arrays(z)
    sq = np.sqrt(r1 * r1 + 1.0)
    w = np.sqrt(r * r + (sq * zdot) ** 2)
    u = r / w
    return CurveFields(
        w=w,
        u=u,
        n_theta=-zdot * sq / w,
        kappa=graph_curvature(profile, z, zdot, zddot),
        v=w / r,
        zdot=zdot,
        zddot=zddot,
    )


def arc_length(profile, curve):
    """Length of the curve, rectangle rule on the periodic grid."""
    z = curve.z_values
    profile.check_domain(z)
    zdot, _ = fd_periodic(z, curve.theta_step)
    r, r1, _ = profile.arrays(z)
    w = np.sqrt(r * r + (r1 * r1 + 1.0) * zdot * zdot)
    return float(np.sum(w) * curve.theta_step)


def d_ds(field, fields, theta_step):
    """Arc-length derivative ``(1/w) d/dθ``."""
    field = np.asarray(field, dtype=float)
    if field.shape != fields.w.shape:
        raise InputError(f"field length {field.shape} does not match curve {fields.w.shape}")
    return fd_periodic(field, theta_step)[0] / fields.w


def laplacian(field, fields, theta_step):
    return d_ds(d_ds(field, fields, theta_step), fields, theta_step)


@dataclass(frozen=True)
class IdentityResiduals:
    """Max-norm residuals of the five pointwise arc-length identities.

    ds_u       ∂_s u            vs (-κ + 𝒦u) n_theta
    ds_ntheta  ∂_s n_theta      vs -u(-κ + 𝒦u)
    ds_z       ∂_s z            vs -n_theta / sqrt(q)
    lap_u      Δu               vs -∂_s κ n_theta - 𝒦κ(1-u²) + (2𝒦²+K̄)(u-u³) - u(𝒦u-κ)²
    lap_z      Δz               vs -r'r''(1-u²)/q² - (κu - 𝒦u²)/sqrt(q)
    """

    ds_u: float
    ds_ntheta: float
    ds_z: float
    lap_u: float
    lap_z: float

    NAMES = ("ds_u", "ds_ntheta", "ds_z", "lap_u", "lap_z")

    def as_tuple(self):
        return tuple(getattr(self, k) for k in self.NAMES)


def static_identity_residuals(profile, curve):
    z = curve.z_values
    h = curve.theta_step
    f = curve_fields(profile, curve)
    s = surface_scalars(profile, z)
    _, r1, r2 = profile.arrays(z)
    q = s.g_zz
    k, kc, kb, u, nt = f.kappa, s.kcal, s.kbar, f.u, f.n_theta
    bracket = -k + kc * u

    def sup(x):
        return float(np.max(np.abs(x)))

    ds_u = d_ds(u, f, h)
    lap_u = d_ds(ds_u, f, h)
    ds_z = d_ds(z, f, h)
    lap_z = d_ds(ds_z, f, h)
    rhs_lap_u = (-d_ds(k, f, h) * nt - kc * k * (1.0 - u * u)
                 + (2.0 * kc * kc + kb) * (u - u ** 3) - u * (kc * u - k) ** 2)
    rhs_lap_z = -r1 * r2 * (1.0 - u * u) / (q * q) - (k * u - kc * u * u) / np.sqrt(q)
    return IdentityResiduals(
        ds_u=sup(ds_u - bracket * nt),
        ds_ntheta=sup(d_ds(nt, f, h) + u * bracket),
        ds_z=sup(ds_z + nt / np.sqrt(q)),
        lap_u=sup(lap_u - rhs_lap_u),
        lap_z=sup(lap_z - rhs_lap_z),
    )
