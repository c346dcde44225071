import math

import mpmath as mp
import pytest

from csfrot.profile import ProfileSpec

ACCEPTANCE_LINES = []


@pytest.fixture
def half():
    return ProfileSpec.power(0.5)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def power_circle_time(alpha, z0, z):
    """Exact time for a circle to move from ``z0`` to ``z`` on ``r = (-z)^-alpha``.

    Integrates ``dt = -dz / G(z)`` with ``1/G = (m/alpha)(1 + alpha^2 m^(-2alpha-2))``, ``m = -z``.
    """
    m0, m = -z0, -z
    return (m * m - m0 * m0) / (2 * alpha) + (m0 ** (-2 * alpha) - m ** (-2 * alpha)) / 2


def geodesic_curvature_oracle(alpha, zfun, theta, dps=40):
    """Geodesic curvature of ``θ -> (r cos θ, r sin θ, z(θ))`` on the power surface.

    Computed from the embedded space curve with mpmath differentiation, so it
    shares no algebra with the package.  Sign: positive for the parallels.
    """
    with mp.workdps(dps):
        def X(th):
            z = zfun(th)
            r = (-z) ** (-alpha)
            return mp.matrix([r * mp.cos(th), r * mp.sin(th), z])

        th = mp.mpf(theta)
        d1 = mp.matrix([mp.diff(lambda s: X(s)[i], th) for i in range(3)])
        d2 = mp.matrix([mp.diff(lambda s: X(s)[i], th, 2) for i in range(3)])
        z = zfun(th)
        r = (-z) ** (-alpha)
        r1 = alpha * r / (-z)
        xt = mp.matrix([-r * mp.sin(th), r * mp.cos(th), 0])
        xz = mp.matrix([r1 * mp.cos(th), r1 * mp.sin(th), 1])
        nrm = _cross(xt, xz)
        nrm = nrm / mp.norm(nrm)
        val = _dot(d2, _cross(nrm, d1)) / mp.norm(d1) ** 3
        return float(-val)


def _cross(a, b):
    return mp.matrix([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                      a[0] * b[1] - a[1] * b[0]])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


TWO_PI = 2 * math.pi
