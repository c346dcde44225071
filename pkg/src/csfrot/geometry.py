"""Closed-form geometric scalars of a rotational surface.

Coordinates are ``(θ, z)`` with metric ``r² dθ² + (r'² + 1) dz²`` and the
orthonormal frame ``E_θ = ∂_θ / r``, ``E_z = ∂_z / sqrt(r'² + 1)``.

Covariant derivatives of the frame (Levi-Civita connection)::

    ∇_{E_θ} E_θ = -c E_z        ∇_{E_z} E_θ = 0
    ∇_{E_θ} E_z = +c E_θ        ∇_{E_z} E_z = 0

with the single scalar ``c = r' / (r sqrt(r'² + 1))`` returned by
:func:`connection_coefficient`.  It coincides with the curvature of the
parallels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SurfaceScalars:
    """Surface quantities at ``z`` (scalars, or arrays matching ``z``).

    kcal      curvature of the parallel through z
    kbar      Gauss curvature
    g_speed   speed of the rotationally symmetric flow, r'/(r (r'²+1))
    pc_theta, pc_z   principal curvatures w.r.t. the outward normal
    g_theta_theta, g_zz   metric coefficients
    """

    z: object
    kcal: object
    kbar: object
    g_speed: object
    pc_theta: object
    pc_z: object
    g_theta_theta: object
    g_zz: object


def _prep(profile, z):
    profile.check_domain(z)
    return profile.arrays(z)


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def surface_scalars(profile, z):
    r, r1, r2 = _prep(profile, z)
    q = r1 * r1 + 1.0
    sq = np.sqrt(q)
    return SurfaceScalars(
        z=_out(np.asarray(z, dtype=float)),
        kcal=_out(r1 / (r * sq)),
        kbar=_out(-r2 / (r * q * q)),
        g_speed=_out(r1 / (r * q)),
        pc_theta=_out(-1.0 / (r * sq)),
        pc_z=_out(r2 / (q * sq)),
        g_theta_theta=_out(r * r),
        g_zz=_out(q),
    )


def kcal_prime(profile, z):
    """z-derivative of the parallel curvature, ``-sqrt(r'²+1) (kcal² + kbar)``."""
    s = surface_scalars(profile, z)
    return _out(-np.sqrt(s.g_zz) * (s.kcal * s.kcal + s.kbar))


def g_prime(profile, z):
    """z-derivative of ``g_speed``.

    Strictly positive wherever ``r r'' > 2 r'²(r'²+1)`` and ``r' <= 1/sqrt(2)``;
    no sign is promised elsewhere.
    """
    r, r1, r2 = _prep(profile, z)
    p = r1 * r1
    q = p + 1.0
    return _out((r * r2 * (1.0 - p) - p * q) / (r * r * q * q))


def connection_coefficient(profile, z):
    r, r1, _ = _prep(profile, z)
    return _out(r1 / (r * np.sqrt(r1 * r1 + 1.0)))
