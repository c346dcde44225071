"""Curve shortening flow of a graph ``z(θ, t)`` and the circle comparison ODE.

The flow moves each material point with velocity ``-κ N``.  Writing
``-κ N`` in coordinates gives material velocities

    dθ/dt = V = κ ż sqrt(q) / (w r),     dz/dt = -κ r / (w sqrt(q)) = -κ u / sqrt(q).

At a fixed grid angle the tangential drift ``V ż`` is subtracted, so the
graph evolves by

    ∂_t z |_θ = -κ w / (r sqrt(q)).

Its ``z̈`` coefficient is ``1/w²``; an explicit step is stable for
``dt <= safety * Δθ² * min w²``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, fields as dc_fields
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .curve import GraphCurve, CurveFields, curve_fields, MIN_SAMPLES
from .errors import (BlowupError, DtUnderflowError, FlowDomainError, FlowError,
                     InputError, MonitorDomainError)
from .profile import ProfileSpec, window_upper

log = logging.getLogger(__name__)

DT_UNDERFLOW = 1e-14
_TIME_EPS = 1e-12
_DENSE_CHECK = 8192


@dataclass(frozen=True)
class Mode:
    m: int
    amplitude: float
    phase: float = 0.0


@dataclass(frozen=True)
class InitialCurveSpec:
    """``z0(θ) = c0 + Σ a_m cos(mθ + φ_m)``."""

    c0: float
    modes: Tuple[Mode, ...] = ()

    def __post_init__(self):
        modes = tuple(m if isinstance(m, Mode) else Mode(*m) for m in self.modes)
        for m in modes:
            if int(m.m) != m.m or m.m < 1:
                raise InputError(f"mode numbers must be integers >= 1, got {m.m}")
        object.__setattr__(self, "modes", modes)

    @classmethod
    def from_dict(cls, data):
        modes = [Mode(int(d["m"]), float(d["amplitude"]), float(d.get("phase", 0.0)))
                 for d in data.get("modes", [])]
        return cls(float(data["c0"]), tuple(modes))

    def to_dict(self):
        return {"c0": self.c0,
                "modes": [{"m": m.m, "amplitude": m.amplitude, "phase": m.phase}
                          for m in self.modes]}

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        z = np.full(theta.shape, float(self.c0))
        for m in self.modes:
            z = z + m.amplitude * np.cos(m.m * theta + m.phase)
        return z

    def derivatives(self, theta):
        """Analytic ``(ż, z̈)``."""
        theta = np.asarray(theta, dtype=float)
        d1 = np.zeros(theta.shape)
        d2 = np.zeros(theta.shape)
        for m in self.modes:
            arg = m.m * theta + m.phase
            d1 = d1 - m.amplitude * m.m * np.sin(arg)
            d2 = d2 - m.amplitude * m.m**2 * np.cos(arg)
        return d1, d2

    def sample(self, n):
        return GraphCurve.from_function(self, n)

    def z_range(self, n=_DENSE_CHECK):
        z = self(2.0 * math.pi * np.arange(n) / n)
        return float(z.min()), float(z.max())


@dataclass(frozen=True)
class FlowConfig:
    """Parameters of one flow run.

    ``snapshot_every`` is a simulated-time cadence; ``None`` records only the
    initial and final curves and ``0`` records every accepted step.
    ``diag_every`` decimates the diagnostics (the final row is always kept).
    """

    profile: ProfileSpec
    initial: InitialCurveSpec
    n: int = 256
    t_end: float = 1.0
    cfl_safety: float = 0.25
    snapshot_every: Optional[float] = None
    kappa_blowup_guard: float = 1e6
    diag_every: int = 1

    def __post_init__(self):
        if int(self.n) != self.n or self.n < MIN_SAMPLES:
            raise InputError(f"n must be an integer >= {MIN_SAMPLES}, got {self.n}")
        if not (self.t_end > 0 and math.isfinite(self.t_end)):
            raise InputError(f"t_end must be positive, got {self.t_end}")
        if not 0.0 < self.cfl_safety <= 0.5:
            raise InputError(f"cfl_safety must lie in (0, 0.5], got {self.cfl_safety}")
        if self.snapshot_every is not None and self.snapshot_every < 0:
            raise InputError("snapshot_every must be >= 0")
        if self.diag_every < 1:
            raise InputError("diag_every must be >= 1")
        if not self.kappa_blowup_guard > 0:
            raise InputError("kappa_blowup_guard must be positive")
        b = window_upper(self.profile)
        lo, hi = self.initial.z_range(max(_DENSE_CHECK, self.n))
        if not hi < b:
            raise InputError(
                f"initial curve outside validity window: max z0 = {hi:.7g} >= b_tilde = {b:.7g}")
        if not lo > self.profile.domain[0]:
            raise InputError("initial curve outside validity window: below the profile domain")
        object.__setattr__(self, "n", int(self.n))

    @property
    def b_tilde(self):
        return window_upper(self.profile)


@dataclass(frozen=True, eq=False)
class FlowState:
    t: float
    curve: GraphCurve
    fields: CurveFields
    dt_last: float = 0.0


@dataclass(frozen=True)
class DiagnosticsRow:
    t: float
    z_min: float
    z_max: float
    v_max: float
    kappa_min: float
    kappa_max: float
    length: float
    g_max: float
    dt: float

    @classmethod
    def header(cls):
        return [f.name for f in dc_fields(cls)]

    def values(self):
        return [getattr(self, k) for k in self.header()]


@dataclass(frozen=True, eq=False)
class GradientMonitor:
    """``g = φ(v) κ²`` with ``φ(v) = v² / (1 - k v²)``."""

    k: float
    phi: np.ndarray
    g: np.ndarray

    @property
    def g_max(self):
        return float(np.max(self.g))


def monitor_k(v_sup):
    """``k = 1 / (2 v_sup²)``."""
    return 0.5 / (v_sup * v_sup)


def gradient_monitor(fields, k):
    v2 = fields.v * fields.v
    kv2 = k * v2
    if np.any(kv2 >= 1.0):
        raise MonitorDomainError(f"monitor domain violated: max k v^2 = {kv2.max():.6g} >= 1")
    phi = v2 / (1.0 - kv2)
    return GradientMonitor(float(k), phi, phi * fields.kappa**2)


@dataclass(eq=False)
class RunResult:
    config: FlowConfig
    diagnostics: List[DiagnosticsRow] = field(default_factory=list)
    snapshots: List[Tuple[float, GraphCurve]] = field(default_factory=list)
    reason: str = "completed"
    k: float = 0.5

    @property
    def completed(self):
        return self.reason == "completed"

    def column(self, name):
        return np.array([getattr(row, name) for row in self.diagnostics])

    @property
    def t_final(self):
        return self.diagnostics[-1].t if self.diagnostics else 0.0


class _Kernel:
    """Binds a profile to the fused backend kernels, or to numpy for custom profiles."""

    def __init__(self, profile):
        self.profile = profile
        if profile.is_builtin:
            self.impl = _kernels.backend
            self.args = (profile.code, float(profile.alpha))
        else:
            self.impl = None

    def rhs(self, z, h):
        if self.impl is not None:
            return self.impl.rhs_builtin(*self.args, z, h)
        r, r1, r2 = self.profile.arrays(z)
        return _kernels.numpy_impl.graph_rhs(z, h, r, r1, r2)

    def step(self, z, h, dt):
        if self.impl is not None:
            return self.impl.rk4_step(*self.args, z, h, dt)
        k1 = self.rhs(z, h)
        k2 = self.rhs(z + 0.5 * dt * k1, h)
        k3 = self.rhs(z + 0.5 * dt * k2, h)
        k4 = self.rhs(z + dt * k3, h)
        return z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def cfl(self, z, h, safety):
        if self.impl is not None:
            return float(self.impl.cfl_dt(*self.args, z, h, safety))
        r, r1, _ = self.profile.arrays(z)
        return safety * h * h * _kernels.numpy_impl.min_w2(z, h, r, r1)

    def diagnostics(self, z, h, k):
        if self.impl is not None:
            return self.impl.diagnostics(*self.args, z, h, k)
        r, r1, r2 = self.profile.arrays(z)
        return _kernels.numpy_impl.diagnostics_from_arrays(z, h, r, r1, r2, k)


def _check_window(profile, z, b_tilde, h, t=None):
    z_max = float(np.max(z))
    if not np.all(np.isfinite(z)):
        raise BlowupError("curvature blow-up guard tripped: non-finite z", t=t)
    if z_max >= b_tilde:
        raise FlowDomainError(f"left validity window: max z = {z_max:.17g} >= {b_tilde:.17g}", t=t)
    floor = profile.domain[0]
    if math.isfinite(floor) and float(np.min(z)) <= floor + 10.0 * h:
        raise FlowDomainError("reached the profile's domain floor", t=t)


def rhs_graph(profile, curve):
    """``∂_t z`` at fixed θ for every sample."""
    z = curve.z_values
    _check_window(profile, z, window_upper(profile), curve.theta_step)
    return _Kernel(profile).rhs(np.ascontiguousarray(z), curve.theta_step)


def cfl_dt(profile, curve, safety=0.25):
    """``safety * Δθ² * min w²``."""
    if not 0.0 < safety <= 0.5:
        raise InputError(f"safety must lie in (0, 0.5], got {safety}")
    profile.check_domain(curve.z_values)
    return _Kernel(profile).cfl(np.ascontiguousarray(curve.z_values), curve.theta_step, safety)


def initial_state(profile, curve):
    return FlowState(0.0, curve, curve_fields(profile, curve), 0.0)


def step_rk4(profile, state, dt, safety=0.25, kappa_blowup_guard=1e6):
    """One classical RK4 step of the graph equation."""
    limit = cfl_dt(profile, state.curve, safety)
    if dt > limit * (1.0 + 1e-12):
        raise InputError(f"dt = {dt:.6g} exceeds the stability limit {limit:.6g} (safety {safety})")
    if dt < DT_UNDERFLOW:
        raise DtUnderflowError(f"dt underflow: {dt:.3g}", t=state.t)
    h = state.curve.theta_step
    z = _Kernel(profile).step(np.ascontiguousarray(state.curve.z_values), h, dt)
    t = state.t + dt
    _check_window(profile, z, window_upper(profile), h, t=t)
    curve = GraphCurve(z)
    f = curve_fields(profile, curve)
    if float(np.max(np.abs(f.kappa))) > kappa_blowup_guard:
        raise BlowupError("curvature blow-up guard tripped", t=t)
    return FlowState(t, curve, f, dt)


def run(config, on_row=None, on_snapshot=None):
    """Integrate to ``config.t_end`` with CFL-limited RK4 steps.

    ``on_row(row)`` and ``on_snapshot(t, curve)`` are called as records are
    produced, so callers can stream them.  On failure a :class:`FlowError`
    is raised with ``.partial`` holding the :class:`RunResult` so far.
    """
    profile = config.profile
    kern = _Kernel(profile)
    b_tilde = config.b_tilde
    curve0 = config.initial.sample(config.n)
    h = curve0.theta_step
    z = np.ascontiguousarray(curve0.z_values)
    v_sup0 = float(np.max(curve_fields(profile, curve0).v))
    k = monitor_k(v_sup0)
    result = RunResult(config, k=k)

    def emit_row(t, z, dt):
        d = kern.diagnostics(z, h, k)
        row = DiagnosticsRow(t, d[0], d[1], d[2], d[3], d[4], d[5], d[6], dt)
        # the offending row is kept so partial output shows why the run stopped
        result.diagnostics.append(row)
        if on_row is not None:
            on_row(row)
        if d[7] >= 1.0:
            raise MonitorDomainError("monitor domain violated", t=t)
        if max(abs(d[3]), abs(d[4])) > config.kappa_blowup_guard:
            raise BlowupError("curvature blow-up guard tripped", t=t)

    def emit_snapshot(t, z):
        curve = GraphCurve(z)
        result.snapshots.append((t, curve))
        if on_snapshot is not None:
            on_snapshot(t, curve)

    every = config.snapshot_every
    t = 0.0
    n_steps = 0
    snap_index = 1
    last_snap_t = 0.0
    try:
        emit_row(0.0, z, 0.0)
        emit_snapshot(0.0, z)
        while config.t_end - t > _TIME_EPS * max(1.0, config.t_end):
            dt = kern.cfl(z, h, config.cfl_safety)
            if not dt >= DT_UNDERFLOW:
                raise DtUnderflowError(f"dt underflow: {dt:.3g}", t=t)
            target = config.t_end
            snap_target = every * snap_index if every else None
            if snap_target is not None and snap_target < target:
                target = snap_target
            remaining = target - t
            if dt >= remaining:
                dt, t_new = remaining, target
            elif 2.0 * dt > remaining:
                dt = 0.5 * remaining
                t_new = t + dt
            else:
                t_new = t + dt
            z = kern.step(z, h, dt)
            _check_window(profile, z, b_tilde, h, t=t_new)
            t = t_new
            n_steps += 1
            at_end = config.t_end - t <= _TIME_EPS * max(1.0, config.t_end)
            if n_steps % config.diag_every == 0 or at_end:
                emit_row(t, z, dt)
            if every == 0:
                emit_snapshot(t, z)
                last_snap_t = t
            elif snap_target is not None and t == snap_target:
                emit_snapshot(t, z)
                last_snap_t = t
                snap_index += 1
        if last_snap_t != t:
            emit_snapshot(t, z)
    except FlowError as exc:
        if exc.t is None:
            exc.t = t
        result.reason = str(exc)
        exc.partial = result
        raise
    log.debug("run finished: %d steps, t=%.6g", n_steps, t)
    return result


def _g(profile, z):
    r, r1, _ = profile.arrays(z)
    return float(r1 / (r * (r1 * r1 + 1.0)))


def circle_flow(profile, z0, t_end, tol=1e-10, t_eval=None):
    """Solve ``dz/dt = -g_speed(z)`` by step-doubling RK4.

    Returns arrays ``(t, z)``.  With ``t_eval`` the steps are clipped to land
    on each requested time and only those times are returned.
    """
    z0 = float(z0)
    profile.check_domain(z0)
    lo, hi = profile.domain

    def f(z):
        if not (lo < z < hi) or not math.isfinite(z):
            raise FlowDomainError(f"circle flow left the profile domain at z={z}")
        return -_g(profile, z)

    def rk4(z, h):
        k1 = f(z)
        k2 = f(z + 0.5 * h * k1)
        k3 = f(z + 0.5 * h * k2)
        k4 = f(z + h * k3)
        return z + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0

    if t_eval is None:
        targets = [float(t_end)]
    else:
        targets = sorted(float(x) for x in t_eval)
        if targets and targets[0] < 0:
            raise InputError("t_eval must be non-negative")
    ts, zs = ([], []) if t_eval is not None else ([0.0], [z0])
    t, z = 0.0, z0
    h = min(1e-2, float(t_end)) if t_end > 0 else 1e-2
    for target in targets:
        while target - t > 1e-15 * max(1.0, target):
            step = min(h, target - t)
            try:
                full = rk4(z, step)
                half = rk4(rk4(z, 0.5 * step), 0.5 * step)
            except FlowDomainError as exc:
                exc.t = t
                raise
            err = abs(half - full)
            if err <= tol:
                t = target if step == target - t else t + step
                z = half + (half - full) / 15.0
                if t_eval is None:
                    ts.append(t)
                    zs.append(z)
            fac = 4.0 if err == 0 else min(4.0, max(0.1, 0.9 * (tol / err) ** 0.2))
            if err <= tol and step < h:
                h = max(h, step * fac)
            else:
                h = step * fac
            if h < DT_UNDERFLOW:
                raise DtUnderflowError("circle flow step underflow", t=t)
        if t_eval is not None:
            ts.append(t)
            zs.append(z)
    return np.array(ts), np.array(zs)
