"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_backends.py [--n 64 128 256] [--steps 2000]

Both backends are imported directly, so the CSFROT_DISABLE_NUMBA flag does
not matter here.  The first numba call is excluded (JIT compile or cache load).
"""

import argparse
import math
import time

import numpy as np

from csfrot._kernels import numpy_impl
from csfrot.profile import POWER

try:
    from csfrot._kernels import numba_impl
except ImportError:  # numba missing
    numba_impl = None


def _curve(n):
    th = 2 * math.pi * np.arange(n) / n
    return np.ascontiguousarray(-2.0 + 0.1 * np.cos(th))


def time_steps(impl, n, steps, alpha=0.5):
    z = _curve(n)
    h = 2 * math.pi / n
    impl.rk4_step(POWER, alpha, z, h, 1e-5)  # warm-up
    t0 = time.perf_counter()
    for _ in range(steps):
        dt = impl.cfl_dt(POWER, alpha, z, h, 0.25)
        z = impl.rk4_step(POWER, alpha, z, h, dt)
    elapsed = time.perf_counter() - t0
    return elapsed, z


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[32, 64, 128, 256, 512])
    ap.add_argument("--steps", type=int, default=2000)
    args = ap.parse_args(argv)
    backends = [("numpy", numpy_impl)]
    if numba_impl is not None:
        backends.append(("numba", numba_impl))
    else:
        print("numba not available; timing numpy only")
    print(f"{'n':>6} " + " ".join(f"{name + ' us/step':>16}" for name, _ in backends)
          + ("    speedup   max|dz|" if len(backends) == 2 else ""))
    for n in args.n:
        times, finals = [], []
        for _, impl in backends:
            elapsed, z = time_steps(impl, n, args.steps)
            times.append(elapsed / args.steps * 1e6)
            finals.append(z)
        row = f"{n:>6} " + " ".join(f"{t:>16.2f}" for t in times)
        if len(backends) == 2:
            row += f" {times[0] / times[1]:>10.1f}x {np.max(np.abs(finals[0] - finals[1])):9.1e}"
        print(row)


if __name__ == "__main__":
    main()
