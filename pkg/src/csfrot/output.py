"""CSV writers with fixed 17-significant-digit formatting."""

import csv
import os

import numpy as np

from .curve import curve_fields
from .flow import DiagnosticsRow

SNAPSHOT_HEADER = ["t", "theta", "z", "kappa", "u", "n_theta"]
GEOMETRY_HEADER = ["z", "kcal", "kbar", "g_speed", "pc_theta", "pc_z"]


def fmt(x):
    return format(float(x), ".17g")


def open_csv(path, header):
    fh = open(path, "w", newline="", encoding="utf-8")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    fh.flush()
    return fh, writer


class RunWriter:
    """Streams diagnostics and snapshots of one run into ``output_dir``.

    Diagnostics are flushed with each snapshot and every ``flush_rows`` rows,
    so an interrupted run leaves a readable prefix on disk.
    """

    def __init__(self, output_dir, profile, flush_rows=1000):
        os.makedirs(output_dir, exist_ok=True)
        self.profile = profile
        self.flush_rows = flush_rows
        self.diag_path = os.path.join(output_dir, "diagnostics.csv")
        self.snap_path = os.path.join(output_dir, "snapshots.csv")
        self._dfh, self._dw = open_csv(self.diag_path, DiagnosticsRow.header())
        self._sfh, self._sw = open_csv(self.snap_path, SNAPSHOT_HEADER)
        self._pending = 0

    def on_row(self, row):
        self._dw.writerow([fmt(x) for x in row.values()])
        self._pending += 1
        if self._pending >= self.flush_rows:
            self._dfh.flush()
            self._pending = 0

    def on_snapshot(self, t, curve):
        f = curve_fields(self.profile, curve)
        ts = fmt(t)
        for th, z, k, u, nt in zip(curve.theta, curve.z_values, f.kappa, f.u, f.n_theta):
            self._sw.writerow([ts, fmt(th), fmt(z), fmt(k), fmt(u), fmt(nt)])
        self._sfh.flush()
        self._dfh.flush()
        self._pending = 0

    def close(self):
        for fh in (self._dfh, self._sfh):
            if not fh.closed:
                fh.flush()
                fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_geometry(stream, scalars):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(GEOMETRY_HEADER)
    cols = [np.atleast_1d(getattr(scalars, k)) for k in GEOMETRY_HEADER]
    for row in zip(*cols):
        writer.writerow([fmt(x) for x in row])
