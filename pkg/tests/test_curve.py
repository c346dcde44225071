import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import geodesic_curvature_oracle
from csfrot.curve import (GraphCurve, IdentityResiduals, arc_length, curve_fields, d_ds,
                          fd_periodic, graph_curvature, laplacian, static_identity_residuals)
from csfrot.errors import InputError
from csfrot.flow import InitialCurveSpec, Mode
from csfrot.geometry import surface_scalars
from csfrot.profile import ProfileSpec


def wavy(c0=-2.0, a=0.1, m=1):
    return InitialCurveSpec(c0, (Mode(m, a),))


def test_fd_constant_is_zero():
    d1, d2 = fd_periodic(np.full(32, 3.5), 2 * math.pi / 32)
    assert np.all(d1 == 0) and np.all(d2 == 0)


def test_fd_cosine_error_bound_and_order():
    def errs(n):
        th = 2 * math.pi * np.arange(n) / n
        d1, d2 = fd_periodic(np.cos(th), 2 * math.pi / n)
        return np.max(np.abs(d1 + np.sin(th))), np.max(np.abs(d2 + np.cos(th)))

    e1, e2 = errs(256)
    h = 2 * math.pi / 256
    assert e1 <= h * h / 6 * (1 + 1e-6)
    assert e1 == pytest.approx(1.0e-4, rel=0.05)
    f1, f2 = errs(512)
    assert e1 / f1 == pytest.approx(4.0, abs=0.05)
    assert e2 / f2 == pytest.approx(4.0, abs=0.05)


def test_fd_rejects_tiny_arrays():
    with pytest.raises(InputError):
        fd_periodic(np.zeros(3), 1.0)


def test_graph_curve_validation():
    with pytest.raises(InputError):
        GraphCurve(np.zeros(15) - 2)
    with pytest.raises(InputError):
        GraphCurve(np.array([-2.0] * 15 + [np.nan]))
    c = GraphCurve(np.full(16, -2.0))
    assert c.n == 16 and c.theta_step == pytest.approx(2 * math.pi / 16)
    with pytest.raises(ValueError):
        c.z_values[0] = 0.0


def test_circle_fields(half):
    f = curve_fields(half, GraphCurve(np.full(64, -2.0)))
    kc = surface_scalars(half, -2.0).kcal
    np.testing.assert_allclose(f.kappa, kc, rtol=1e-14)
    assert np.all(f.u == 1.0) and np.all(f.n_theta == 0.0)
    assert kc == pytest.approx(0.2461830, abs=1e-7)


def test_curvature_value_at_theta_zero(half):
    oracle = geodesic_curvature_oracle(0.5, lambda t: -2 + mp.mpf("0.1") * mp.cos(t), 0)
    k = graph_curvature(half, -1.9, 0.0, -0.1)
    assert k == pytest.approx(oracle, rel=1e-13)
    assert k == pytest.approx(0.4519, abs=1e-4)
    f = curve_fields(half, wavy().sample(128))
    assert f.u[0] == 1.0


@given(st.floats(min_value=-6.0, max_value=-1.0), st.floats(min_value=-0.3, max_value=0.3),
       st.integers(min_value=1, max_value=4), st.floats(min_value=0.0, max_value=2 * math.pi))
@settings(max_examples=25, deadline=None)
def test_curvature_matches_embedded_oracle(c0, amp, m, theta):
    half = ProfileSpec.power(0.5)
    init = InitialCurveSpec(c0, (Mode(m, amp),))
    z = float(init(theta))
    zd, zdd = (float(x) for x in init.derivatives(theta))
    oracle = geodesic_curvature_oracle(0.5, lambda t: c0 + amp * mp.cos(m * t), theta)
    assert graph_curvature(half, z, zd, zdd) == pytest.approx(oracle, rel=1e-11, abs=1e-13)


def test_arc_length_examples(half):
    assert arc_length(half, GraphCurve(np.full(64, -2.0))) == pytest.approx(
        2 * math.pi * 2 ** -0.5, rel=1e-14)
    assert arc_length(half, GraphCurve(np.full(64, -1.0))) == pytest.approx(2 * math.pi,
                                                                              rel=1e-14)
    init = wavy()
    lengths = [arc_length(half, init.sample(n)) for n in (32, 64, 128, 256)]
    r_min = (2.1) ** -0.5
    assert lengths[-1] > 2 * math.pi * r_min
    errs = np.abs(np.array(lengths[:-1]) - lengths[-1])
    assert errs[1] <= errs[0] / 4 or errs[1] < 1e-13


def test_d_ds_basics(half):
    circle = GraphCurve(np.full(64, -2.0))
    f = curve_fields(half, circle)
    h = circle.theta_step
    assert np.all(d_ds(np.ones(64), f, h) == 0)
    assert np.all(d_ds(circle.z_values, f, h) == 0)
    with pytest.raises(InputError):
        d_ds(np.ones(10), f, h)


def test_d_ds_of_height_matches_normal(half):
    def err(n):
        c = wavy().sample(n)
        f = curve_fields(half, c)
        q = surface_scalars(half, c.z_values).g_zz
        return np.max(np.abs(d_ds(c.z_values, f, c.theta_step) + f.n_theta / np.sqrt(q)))

    assert err(256) < 1e-12 or err(256) < err(128) / 3.5


def test_static_identities_vanish_on_circles(half):
    res = static_identity_residuals(half, GraphCurve(np.full(64, -2.0)))
    assert isinstance(res, IdentityResiduals)
    assert max(res.as_tuple()) <= 1e-12
    assert len(res.as_tuple()) == len(IdentityResiduals.NAMES) == 5


@pytest.mark.parametrize("alpha,init", [
    (0.5, wavy()),
    (0.3, InitialCurveSpec(-3.0, (Mode(2, 0.05),))),
])
def test_static_identities_second_order(alpha, init):
    prof = ProfileSpec.power(alpha)
    a = static_identity_residuals(prof, init.sample(128)).as_tuple()
    b = static_identity_residuals(prof, init.sample(256)).as_tuple()
    for x, y in zip(a, b):
        if x < 1e-13:
            continue
        assert x / y == pytest.approx(4.0, abs=0.6)


def test_laplacian_of_u_on_circle(half):
    c = GraphCurve(np.full(32, -3.0))
    f = curve_fields(half, c)
    assert np.all(laplacian(f.u, f, c.theta_step) == 0)
