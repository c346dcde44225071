import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from csfrot import _kernels
from csfrot._kernels import numpy_impl
from csfrot.profile import EXP_INVERSE, POWER

numba_impl = pytest.importorskip("csfrot._kernels.numba_impl")

cases = st.tuples(
    st.sampled_from([(POWER, 0.3), (POWER, 0.5), (POWER, 0.8), (EXP_INVERSE, 0.0)]),
    st.floats(min_value=-6.0, max_value=-2.5),
    st.floats(min_value=0.0, max_value=0.4),
    st.sampled_from([16, 33, 64, 128]),
)


def _curve(c0, amp, n):
    th = 2 * math.pi * np.arange(n) / n
    return np.ascontiguousarray(c0 + amp * np.cos(th) + 0.3 * amp * np.sin(3 * th))


@given(cases)
@settings(max_examples=40, deadline=None)
def test_backends_agree(case):
    (code, alpha), c0, amp, n = case
    z = _curve(c0, amp, n)
    h = 2 * math.pi / n
    for a, b in zip(numpy_impl.profile_eval(code, alpha, z), numba_impl.profile_eval(code, alpha, z)):
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-300)
    np.testing.assert_allclose(numpy_impl.rhs_builtin(code, alpha, z, h),
                               numba_impl.rhs_builtin(code, alpha, z, h), rtol=1e-12, atol=1e-14)
    dt_np = numpy_impl.cfl_dt(code, alpha, z, h, 0.25)
    dt_nb = numba_impl.cfl_dt(code, alpha, z, h, 0.25)
    assert dt_np == pytest.approx(dt_nb, rel=1e-13)
    np.testing.assert_allclose(numpy_impl.rk4_step(code, alpha, z, h, dt_np),
                               numba_impl.rk4_step(code, alpha, z, h, dt_np), rtol=1e-13)
    k = 0.25
    np.testing.assert_allclose(numpy_impl.diagnostics(code, alpha, z, h, k),
                               numba_impl.diagnostics(code, alpha, z, h, k), rtol=1e-12)


def test_rk4_step_does_not_mutate_input():
    z = _curve(-3.0, 0.2, 64)
    before = z.copy()
    for impl in (numpy_impl, numba_impl):
        impl.rk4_step(POWER, 0.5, z, 2 * math.pi / 64, 1e-4)
        assert np.array_equal(z, before)


def test_circle_rhs_is_minus_g():
    z = np.full(32, -2.0)
    for impl in (numpy_impl, numba_impl):
        np.testing.assert_allclose(impl.rhs_builtin(POWER, 0.5, z, 2 * math.pi / 32), -8 / 33,
                                   rtol=1e-14)


@pytest.mark.parametrize("flag,expected", [("1", "numpy"), ("true", "numpy"), ("", "numba")])
def test_env_flag_selects_backend(flag, expected):
    env = dict(os.environ, CSFROT_DISABLE_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", "import csfrot; print(csfrot.BACKEND_NAME)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected


def test_active_backend_is_consistent():
    expected = numpy_impl if _kernels.numba_impl is None else _kernels.numba_impl
    assert _kernels.backend is expected


def test_numpy_fallback_reproduces_run(tmp_path):
    code = ("from csfrot import *\n"
            "r = run(FlowConfig(ProfileSpec.power(0.5), "
            "InitialCurveSpec(-2.0, (Mode(1, 0.2),)), n=64, t_end=0.05))\n"
            "print(repr(float(r.diagnostics[-1].z_max)), len(r.diagnostics))\n")
    outs = []
    for flag in ("1", "0"):
        env = dict(os.environ, CSFROT_DISABLE_NUMBA=flag)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                   text=True, check=True).stdout.split())
    assert outs[0][1] == outs[1][1]
    assert float(outs[0][0]) == pytest.approx(float(outs[1][0]), rel=1e-13)
