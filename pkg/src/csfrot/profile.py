"""Rotation profiles r(z) and the admissibility window of the surface.

A profile generates the surface ``(r(z) cos θ, r(z) sin θ, z)``.  The flow
theory needs the surface to satisfy, on a window ``J = (-inf, b_tilde)``,

    0 < r'(z) <= 1/sqrt(2)        and        r r'' > 2 r'^2 (r'^2 + 1).

Built-in families are the power profile ``(-z)**(-alpha)`` and the
exponential profile ``exp(-1/z)``, both defined for ``z < 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import InadmissibleProfileError, InputError

POWER = 0
EXP_INVERSE = 1
CUSTOM = -1

_FAMILY_CODES = {"power": POWER, "exp_inverse": EXP_INVERSE, "custom": CUSTOM}

SLOPE_MAX = 1.0 / math.sqrt(2.0)
BISECTION_TOL = 1e-10


@dataclass(frozen=True)
class ProfileSpec:
    """A profile family with its parameters and open domain ``(lo, hi)``.

    Use the constructors :meth:`power`, :meth:`exp_inverse` and
    :meth:`custom` rather than instantiating directly.
    """

    family: str
    alpha: float = 0.0
    domain: tuple = (-math.inf, 0.0)
    scan_range: Optional[tuple] = None
    r: Optional[Callable] = field(default=None, compare=False, repr=False)
    r1: Optional[Callable] = field(default=None, compare=False, repr=False)
    r2: Optional[Callable] = field(default=None, compare=False, repr=False)

    @classmethod
    def power(cls, alpha, *, admissible_only=True):
        """``r(z) = (-z)**(-alpha)`` on ``z < 0``.

        ``admissible_only=False`` lifts the ``0 < alpha < 1`` restriction so
        that inadmissible exponents can serve as negative controls.
        """
        alpha = float(alpha)
        if not math.isfinite(alpha) or alpha <= 0.0:
            raise InputError(f"power profile needs alpha > 0, got {alpha}")
        if admissible_only and alpha >= 1.0:
            raise InputError(
                f"power profile needs 0 < alpha < 1, got {alpha}; "
                "alpha >= 1 never satisfies r r'' > 2 r'^2 (r'^2 + 1)"
            )
        return cls("power", alpha=alpha)

    @classmethod
    def exp_inverse(cls):
        """``r(z) = exp(-1/z)`` on ``z < 0``."""
        return cls("exp_inverse", scan_range=(-50.0, -0.1))

    @classmethod
    def custom(cls, r, r1, r2, domain, scan_range=None):
        """A user profile with analytic first and second derivatives.

        The three callables must accept and return numpy arrays.
        ``scan_range`` bounds the admissibility scan used to locate the
        window; it defaults to the domain clipped to a finite interval.
        """
        lo, hi = float(domain[0]), float(domain[1])
        if not lo < hi:
            raise InputError(f"empty custom domain {domain!r}")
        if scan_range is None:
            scan_range = (max(lo, hi - 50.0), hi - 1e-6 * max(1.0, abs(hi)))
        return cls("custom", domain=(lo, hi), scan_range=tuple(scan_range),
                   r=r, r1=r1, r2=r2)

    @property
    def code(self):
        return _FAMILY_CODES[self.family]

    @property
    def is_builtin(self):
        return self.family != "custom"

    def to_dict(self):
        if self.family == "power":
            return {"family": "power", "alpha": self.alpha}
        if self.family == "exp_inverse":
            return {"family": "exp_inverse"}
        raise InputError("custom profiles are not serializable")

    @classmethod
    def from_dict(cls, data):
        family = data.get("family")
        if family == "power":
            if "alpha" not in data:
                raise InputError("power profile requires 'alpha'")
            return cls.power(data["alpha"])
        if family == "exp_inverse":
            return cls.exp_inverse()
        raise InputError(f"unknown profile family {family!r}")

    def check_domain(self, z):
        z = np.asarray(z, dtype=float)
        lo, hi = self.domain
        if not np.all(np.isfinite(z)) or np.any(z <= lo) or np.any(z >= hi):
            raise InputError(f"z outside the {self.family} profile domain ({lo}, {hi})")

    def arrays(self, z):
        """Return ``(r, r', r'')`` for scalar or array ``z``, without domain checks."""
        if self.family == "power":
            a = self.alpha
            m = -np.asarray(z, dtype=float)
            r = m ** (-a)
            return r, a * r / m, a * (a + 1.0) * r / (m * m)
        if self.family == "exp_inverse":
            z = np.asarray(z, dtype=float)
            r = np.exp(-1.0 / z)
            z2 = z * z
            return r, r / z2, r * (1.0 / (z2 * z2) - 2.0 / (z2 * z))
        z = np.asarray(z, dtype=float)
        return (np.asarray(self.r(z), dtype=float),
                np.asarray(self.r1(z), dtype=float),
                np.asarray(self.r2(z), dtype=float))


@dataclass(frozen=True)
class ProfileEvaluation:
    z: float
    r: float
    r1: float
    r2: float


@dataclass(frozen=True)
class ValidityWindow:
    """Upper end of the admissible window found by :func:`validity_window`.

    ``margin`` is the smallest value of ``r r'' - 2 r'^2 (r'^2 + 1)`` over the
    scanned points below ``b_tilde``.
    """

    b_tilde: float
    checked_range: tuple
    margin: float


def evaluate(profile, z):
    """Closed-form ``(r, r', r'')`` at one point."""
    profile.check_domain(z)
    r, r1, r2 = profile.arrays(float(z))
    return ProfileEvaluation(float(z), float(r), float(r1), float(r2))


def setting_rs_margin(profile, z):
    """Return ``(slope_ok, inequality_margin)`` at ``z``.

    ``slope_ok`` is ``0 < r' <= 1/sqrt(2)``; the margin is
    ``r r'' - 2 r'^2 (r'^2 + 1)`` and is positive where the curvature
    condition holds.  Both accept arrays.
    """
    profile.check_domain(z)
    r, r1, r2 = profile.arrays(z)
    slope_ok = (r1 > 0.0) & (r1 <= SLOPE_MAX)
    margin = r * r2 - 2.0 * r1 * r1 * (r1 * r1 + 1.0)
    if np.ndim(slope_ok) == 0:
        return bool(slope_ok), float(margin)
    return slope_ok, margin


def power_btilde(alpha):
    """Closed-form window endpoint for the power family, ``0 < alpha < 1``."""
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}")
    e = 1.0 / (2.0 * (alpha + 1.0))
    slope_bound = -((2.0 * alpha**2) ** e)
    curvature_bound = -((2.0 * alpha**3 / (1.0 - alpha)) ** e)
    return min(slope_bound, curvature_bound)


def _admissible(profile, z):
    slope_ok, margin = setting_rs_margin(profile, z)
    return slope_ok & (margin > 0.0)


def validity_window(profile, z_lo, z_hi, n_scan=10_000):
    """Largest ``b_tilde <= z_hi`` with both conditions holding on ``[z_lo, b_tilde)``.

    The range is scanned on ``n_scan`` uniform points, then the first
    transition to inadmissible is refined by bisection to ``1e-10``.
    If the whole scan is admissible, ``b_tilde = z_hi``.
    """
    z_lo, z_hi = float(z_lo), float(z_hi)
    if not z_lo < z_hi:
        raise InputError(f"need z_lo < z_hi, got [{z_lo}, {z_hi}]")
    if n_scan < 2:
        raise InputError("n_scan must be at least 2")
    grid = np.linspace(z_lo, z_hi, int(n_scan))
    ok = _admissible(profile, grid)
    if not ok[0]:
        raise InadmissibleProfileError(
            f"profile inadmissible on range [{z_lo}, {z_hi}]: conditions fail at z={z_lo}"
        )
    bad = np.flatnonzero(~ok)
    if bad.size == 0:
        b_tilde = z_hi
        inside = grid
    else:
        j = int(bad[0])
        lo, hi = grid[j - 1], grid[j]
        while hi - lo > BISECTION_TOL:
            mid = 0.5 * (lo + hi)
            if _admissible(profile, mid):
                lo = mid
            else:
                hi = mid
        b_tilde = float(hi)
        inside = grid[:j]
    _, margin = setting_rs_margin(profile, inside)
    return ValidityWindow(b_tilde, (z_lo, z_hi), float(np.min(margin)))


_WINDOW_CACHE = {}


def window_upper(profile, n_scan=10_000):
    """``b_tilde`` used to guard flows: closed form for power, scanned otherwise."""
    if profile.family == "power":
        return power_btilde(profile.alpha)
    key = (profile.family, n_scan)
    if profile.is_builtin and key in _WINDOW_CACHE:
        return _WINDOW_CACHE[key]
    lo, hi = profile.scan_range
    b = validity_window(profile, lo, hi, n_scan).b_tilde
    if profile.is_builtin:
        _WINDOW_CACHE[key] = b
    return b
