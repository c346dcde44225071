"""Executable checks for the flow: identities, convergence orders and theorem-level properties.

Each check returns :class:`CheckReport` objects.  Failures are reported,
not raised; the only exception is a violated precondition (for example an
unordered pair handed to :func:`check_comparison`), which raises
:class:`~csfrot.errors.InputError`.

Infinite-time statements (``z -> -inf``, ``κ -> 0``) are not falsifiable on a
finite horizon.  :func:`check_longtime` tests finite proxies and reports
``INCONCLUSIVE`` when the horizon is too short or the run stopped early.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .curve import (IdentityResiduals, curve_fields, fd_periodic, laplacian,
                    static_identity_residuals)
from .errors import FlowError, InputError
from .flow import FlowConfig, InitialCurveSpec, Mode, circle_flow, run
from .geometry import g_prime, kcal_prime, surface_scalars
from .profile import ProfileSpec, power_btilde, validity_window, window_upper

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class CheckReport:
    name: str
    status: str
    observed: float
    threshold: float
    context: str = ""

    @property
    def passed(self):
        return self.status == PASS

    def to_json(self):
        d = asdict(self)
        d["passed"] = self.passed
        return json.dumps(d, sort_keys=True, allow_nan=True)

    def line(self):
        return (f"{self.status:<12} {self.name}: observed={self.observed:.6g} "
                f"threshold={self.threshold:.6g} [{self.context}]")


def _report(name, ok, observed, threshold, context=""):
    return CheckReport(name, PASS if ok else FAIL, float(observed), float(threshold), context)


def observed_orders(errors, ratio=2.0):
    """Successive convergence orders ``log_ratio(e_i / e_{i+1})``."""
    e = np.asarray(errors, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(e[:-1] / e[1:]) / math.log(ratio)


# -- profile / geometry -------------------------------------------------------

def check_validity_window(alphas=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
                          z_range=(-10.0, -0.1), n_scan=10_000, tol=1e-6):
    worst = 0.0
    for a in alphas:
        w = validity_window(ProfileSpec.power(a), *z_range, n_scan)
        worst = max(worst, abs(w.b_tilde - power_btilde(a)))
    return _report("window.power_btilde", worst <= tol, worst, tol,
                   f"alpha in {list(alphas)}")


def _admissible_points(profile, count, rng, margin=0.05, span=10.0):
    b = window_upper(profile)
    return rng.uniform(b - span, b - margin, size=count)


def _fd_ratio(f, df, zs, h):
    """Worst ``e(h)/e(h/2)`` of the centered difference of ``f`` versus ``df``."""
    ratios = []
    for z in zs:
        errs = [abs((f(z + s) - f(z - s)) / (2 * s) - df(z)) for s in (h, h / 2)]
        ratios.append(errs[0] / errs[1])
    return np.array(ratios)


def check_curvature_algebra(profile, n_random=1000, seed=0, rel_tol=1e-12,
                            h=2e-2, ratio_band=(3.5, 4.5)):
    rng = np.random.default_rng(seed)
    zs = _admissible_points(profile, n_random, rng)
    s = surface_scalars(profile, zs)
    rel = np.abs(s.kbar - s.pc_theta * s.pc_z) / np.abs(s.kbar)
    out = [_report("geometry.gauss_factorization", rel.max() <= rel_tol, rel.max(), rel_tol,
                   f"{n_random} random z, seed {seed}")]
    probe = _admissible_points(profile, 8, rng, margin=0.2, span=5.0)
    lo, hi = ratio_band
    for name, f, df in (
        ("geometry.kcal_prime_order", lambda z: surface_scalars(profile, z).kcal,
         lambda z: kcal_prime(profile, z)),
        ("geometry.g_prime_order", lambda z: surface_scalars(profile, z).g_speed,
         lambda z: g_prime(profile, z)),
    ):
        r = _fd_ratio(f, df, probe, h)
        worst = r[np.argmax(np.abs(r - 4.0))]
        out.append(_report(name, bool(np.all((r >= lo) & (r <= hi))), worst, 4.0,
                           f"error ratio under h-halving, h={h}, band {ratio_band}"))
    return out


def check_admissible_geometry(profile, n_scan=2000, margin=0.05, span=20.0):
    """``K̄ < 0``, ``2𝒦² + K̄ < 0`` and ``G' > 0`` on the window."""
    b = window_upper(profile)
    zs = np.linspace(b - span, b - margin, n_scan)
    s = surface_scalars(profile, zs)
    worst = max(float(np.max(s.kbar)), float(np.max(2 * s.kcal**2 + s.kbar)),
                float(np.max(-g_prime(profile, zs))))
    return _report("geometry.sign_conditions", worst < 0.0, worst, 0.0,
                   f"z in [{b - span:.4g}, {b - margin:.4g}]")


# -- static identities --------------------------------------------------------

def check_static_identities(profile, curve_family, grid_sizes=(64, 128, 256, 512),
                            min_order=1.8, floor=1e-11):
    """One report per identity; passes if the residuals sit at round-off or decay at ``min_order``."""
    rows = np.array([static_identity_residuals(profile, curve_family.sample(n)).as_tuple()
                     for n in grid_sizes])
    out = []
    for j, name in enumerate(IdentityResiduals.NAMES):
        res = rows[:, j]
        ctx = "n=" + ",".join(str(n) for n in grid_sizes) + " res=" + ",".join(
            f"{x:.3g}" for x in res)
        if np.all(res <= floor):
            out.append(CheckReport(f"static.{name}", PASS, float(res.max()), floor,
                                   ctx + " (round-off floor)"))
            continue
        orders = observed_orders(res)
        worst = float(np.nanmin(orders))
        out.append(_report(f"static.{name}", worst >= min_order, worst, min_order, ctx))
    return out


# -- flow runs ----------------------------------------------------------------

def _as_result(run_output):
    if isinstance(run_output, FlowError):
        return run_output.partial
    return run_output


def check_circle_consistency(run_output, profile, tol=1e-6, symmetry_tol=1e-12):
    res = _as_result(run_output)
    t = res.column("t")
    _, z_ode = circle_flow(profile, res.snapshots[0][1].z_values[0], t[-1], t_eval=t)
    gap = float(np.max(np.abs(res.column("z_max") - z_ode)))
    spread = float(np.max(res.column("z_max") - res.column("z_min")))
    for _, c in res.snapshots:
        spread = max(spread, float(np.ptp(c.z_values)))
    n = res.config.n
    return [
        _report("circle.ode_match", gap <= tol, gap, tol, f"n={n}, t<={t[-1]:.4g}"),
        _report("circle.theta_constant", spread <= symmetry_tol, spread, symmetry_tol, f"n={n}"),
    ]


def check_graph_preservation(run_output, rel_tol=1e-3):
    res = _as_result(run_output)
    v = res.column("v_max")
    bound = v[0] * (1.0 + rel_tol)
    ratio = float(v.max() / v[0])
    status = PASS if v.max() <= bound else FAIL
    if status == PASS and not res.completed:
        status = INCONCLUSIVE
    return CheckReport("graph.v_bound", status, ratio, 1.0 + rel_tol,
                       f"max_t v_max / v_max(0); {_describe(res)}")


def check_monotone_descent(run_output, tol=1e-6):
    """Each accepted step lowers ``z_max`` at least at rate ``G``.

    With ``z_max`` decreasing and ``G`` increasing, ``dz_max/dt <= -G(z_max)``
    integrates over one step to ``Δz_max <= -Δt * G(z_max(t + Δt))``.
    """
    res = _as_result(run_output)
    profile = res.config.profile
    t = res.column("t")
    z = res.column("z_max")
    dt = np.diff(t)
    dz = np.diff(z)
    if dt.size == 0:
        return CheckReport("descent.rate", INCONCLUSIVE, math.nan, tol, "no steps")
    g_end = surface_scalars(profile, z[1:]).g_speed
    slack = dz / dt + g_end
    worst = float(np.max(slack))
    strict = bool(np.all(dz < 0))
    return _report("descent.rate", strict and worst <= tol, worst, tol,
                   f"max(dz/dt + G(z_max)); strictly decreasing={strict}; {_describe(res)}")


def check_comparison(run_a, run_b, tol=1e-6, precondition_tol=1e-12):
    """``z̃_min(t) - z_max(t) >= -tol`` given ``z_max(0) <= z̃_min(0)``."""
    a, b = _as_result(run_a), _as_result(run_b)
    if a.config.profile != b.config.profile:
        raise InputError("comparison needs both runs on the same profile")
    za0, zb0 = a.diagnostics[0].z_max, b.diagnostics[0].z_min
    if za0 > zb0 + precondition_tol:
        raise InputError(f"comparison precondition violated: z_max(0)={za0:.17g} > "
                         f"z_min(0)={zb0:.17g}")
    ta, tb = a.column("t"), b.column("t")
    t_hi = min(ta[-1], tb[-1])
    sa = ta <= t_hi
    sb = tb <= t_hi
    gap_a = np.interp(ta[sa], tb, b.column("z_min")) - a.column("z_max")[sa]
    gap_b = b.column("z_min")[sb] - np.interp(tb[sb], ta, a.column("z_max"))
    worst = float(min(gap_a.min(), gap_b.min()))
    status = PASS if worst >= -tol else FAIL
    if status == PASS and not (a.completed and b.completed):
        status = INCONCLUSIVE
    return CheckReport("comparison.ordering", status, worst, -tol,
                       f"min_t (z_min_b - z_max_a), t<={t_hi:.4g}")


def check_longtime(run_output, profile, min_t_end=50.0, descent=5.0, kappa_factor=0.1,
                   g_factor=2.0):
    """Finite-horizon proxies for ``z -> -inf`` and ``κ -> 0``.

    (i) ``z_max(end) < z_max(0) - descent``; (ii) ``κ_max(end) < kappa_factor κ_max(0)``
    with ``κ_max`` non-increasing on the final half; (iii) ``g_max`` on the
    final half stays below ``g_factor`` times its peak over the first half.
    """
    res = _as_result(run_output)
    if not res.completed or res.config.t_end < min_t_end:
        why = "run stopped early" if not res.completed else (
            f"horizon {res.config.t_end:g} < {min_t_end:g}")
        return [CheckReport(f"longtime.{k}", INCONCLUSIVE, math.nan, math.nan, why)
                for k in ("descent", "curvature_decay", "monitor_bounded")]
    t = res.column("t")
    z = res.column("z_max")
    kmax = res.column("kappa_max")
    g = res.column("g_max")
    half = t >= 0.5 * t[-1]
    drop = z[0] - z[-1]
    ratio = kmax[-1] / kmax[0]
    mono = bool(np.all(np.diff(kmax[half]) <= 1e-12))
    g_late = float(g[half].max())
    g_peak = float(g[~half].max()) if np.any(~half) else float(g[0])
    ctx = f"t_end={t[-1]:.4g}; {_describe(res)}"
    return [
        _report("longtime.descent", drop > descent, drop, descent, "z_max(0) - z_max(end); " + ctx),
        _report("longtime.curvature_decay", ratio < kappa_factor and mono, ratio, kappa_factor,
                f"kappa_max(end)/kappa_max(0); monotone final half={mono}; " + ctx),
        _report("longtime.monitor_bounded", g_late <= g_factor * g_peak, g_late / g_peak,
                g_factor, "max g (final half) / max g (first half); " + ctx),
    ]


def evolution_residuals(snapshots, profile):
    """Max-norm residuals of the z- and u-evolution equations at the middle of three snapshots.

    Fixed-θ time differences are turned into material derivatives with the
    tangential drift ``V = κ ż sqrt(q) / (w r)``.
    """
    if len(snapshots) < 3:
        raise InputError("need at least 3 consecutive snapshots")
    (t0, c0), (t1, c1), (t2, c2) = snapshots[-3:]
    h0, h1 = t1 - t0, t2 - t1
    if not (h0 > 0 and h1 > 0):
        raise InputError("snapshot times must increase")
    a0 = -h1 / (h0 * (h0 + h1))
    a1 = (h1 - h0) / (h0 * h1)
    a2 = h0 / (h1 * (h0 + h1))
    f0, f1, f2 = (curve_fields(profile, c) for c in (c0, c1, c2))
    z = c1.z_values
    dth = c1.theta_step
    zt = a0 * c0.z_values + a1 * z + a2 * c2.z_values
    ut = a0 * f0.u + a1 * f1.u + a2 * f2.u
    r, r1, r2 = profile.arrays(z)
    s = surface_scalars(profile, z)
    q = s.g_zz
    u, k, kc, kb = f1.u, f1.kappa, s.kcal, s.kbar
    drift = k * f1.zdot * np.sqrt(q) / (f1.w * r)
    zt_mat = zt + drift * f1.zdot
    ut_mat = ut + drift * fd_periodic(u, dth)[0]
    rhs_z = r1 * r2 * (1 - u * u) / (q * q) - r1 * u * u / (r * q)
    rhs_u = -(2 * kc * kc + kb) * (u - u**3) + u * (kc * u - k) ** 2
    res_z = zt_mat - laplacian(z, f1, dth) - rhs_z
    res_u = ut_mat - laplacian(u, f1, dth) - rhs_u
    return float(np.max(np.abs(res_z))), float(np.max(np.abs(res_u)))


def check_evolution_residuals(run_outputs, profile, min_order=1.5, floor=1e-6):
    """Residuals of the z- and u-equations under grid refinement.

    ``run_outputs`` is a sequence of runs ordered coarse to fine (each
    halving Δθ) with at least three dense trailing snapshots.  A single run
    passes only if its residuals are below ``floor``.
    """
    runs = [_as_result(r) for r in run_outputs]
    pairs = np.array([evolution_residuals(r.snapshots, profile) for r in runs])
    ns = [r.config.n for r in runs]
    out = []
    for j, name in enumerate(("z", "u")):
        res = pairs[:, j]
        ctx = "n=" + ",".join(map(str, ns)) + " res=" + ",".join(f"{x:.3g}" for x in res)
        if np.all(res <= floor):
            out.append(CheckReport(f"evolution.{name}", PASS, float(res.max()), floor,
                                   ctx + " (below floor)"))
        elif len(res) < 2:
            out.append(CheckReport(f"evolution.{name}", FAIL, float(res.max()), floor, ctx))
        else:
            worst = float(np.nanmin(observed_orders(res)))
            out.append(_report(f"evolution.{name}", worst >= min_order, worst, min_order, ctx))
    return out


def _describe(res):
    init = res.config.initial
    modes = "".join(f"{m.amplitude:+g}cos({m.m}θ)" for m in init.modes)
    return f"z0={init.c0:g}{modes}, n={res.config.n}, {res.reason}"


def _safe_run(config):
    try:
        return run(config)
    except FlowError as exc:
        return exc


# -- suite --------------------------------------------------------------------

GROUPS = ("window", "geometry", "static", "circle", "graph", "descent", "comparison",
          "evolution", "longtime")


def perturbed(c0, *modes):
    return InitialCurveSpec(c0, tuple(Mode(*m) for m in modes))


def run_suite(only=None, alpha=0.5, longtime_t_end=1000.0, n_graph=256, log=None,
              profile=None):
    """Run the default verification suite; returns reports in a fixed order.

    ``only`` restricts to a subset of :data:`GROUPS`.  ``profile`` overrides
    the power profile built from ``alpha``.  ``log(report)`` is called as
    each report is produced.
    """
    selected = set(GROUPS if not only else only)
    unknown = selected - set(GROUPS)
    if unknown:
        raise InputError(f"unknown suite groups: {sorted(unknown)}")
    if profile is None:
        profile = ProfileSpec.power(alpha)
    reports = []

    def add(items):
        items = items if isinstance(items, list) else [items]
        for rep in items:
            reports.append(rep)
            if log is not None:
                log(rep)

    if "window" in selected:
        add(check_validity_window())
    if "geometry" in selected:
        add(check_curvature_algebra(profile))
        add(check_admissible_geometry(profile))
    if "static" in selected:
        add(check_static_identities(profile, perturbed(-2.0, (1, 0.1))))
        add(check_static_identities(ProfileSpec.power(0.3),
                                    perturbed(-3.0, (2, 0.05), (3, 0.02))))
    if "circle" in selected:
        circ = _safe_run(FlowConfig(profile, InitialCurveSpec(-2.0), n=64, t_end=1.0,
                                    snapshot_every=0.1))
        add(check_circle_consistency(circ, profile))
    graph_runs = []
    if selected & {"graph", "descent"}:
        for init in (perturbed(-2.0, (1, 0.1)), perturbed(-3.0, (1, 0.5))):
            graph_runs.append(_safe_run(FlowConfig(profile, init, n=n_graph, t_end=2.0)))
    if "graph" in selected:
        for r in graph_runs:
            add(check_graph_preservation(r))
    if "descent" in selected:
        for r in graph_runs:
            add(check_monotone_descent(r))
    if "comparison" in selected:
        for lower, upper in ((perturbed(-3.0, (1, 0.1)), perturbed(-2.0, (1, 0.1))),
                             (InitialCurveSpec(-3.0), InitialCurveSpec(-2.0)),
                             (perturbed(-2.2, (1, 0.1)), perturbed(-2.0, (1, 0.1)))):
            ra = _safe_run(FlowConfig(profile, lower, n=n_graph, t_end=2.0))
            rb = _safe_run(FlowConfig(profile, upper, n=n_graph, t_end=2.0))
            add(check_comparison(ra, rb))
    if "evolution" in selected:
        init = perturbed(-2.0, (1, 0.1))
        runs = [_safe_run(FlowConfig(profile, init, n=n, t_end=0.05, snapshot_every=0))
                for n in (128, 256)]
        add(check_evolution_residuals(runs, profile))
    if "longtime" in selected:
        # circles stay θ-constant, so the coarsest grid gives the same trajectory
        lt = _safe_run(FlowConfig(profile, InitialCurveSpec(-2.0), n=16, t_end=longtime_t_end,
                                  diag_every=50))
        add(check_longtime(lt, profile))
    return reports
