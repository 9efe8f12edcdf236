"""Flat-file formats: versioned CSV schemas for clouds, support samples,
polygons, region boundaries and convergence reports.

All floats are written with shortest round-trip repr, so identical inputs
produce byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .convexgeom import ConvexPolygon, SpectrumCloud, SupportSamples

CSV_MARKER = "# speclim-csv v1"


def _write(path, header_cols, rows):
    path = Path(path)
    lines = [CSV_MARKER, ",".join(header_cols)]
    lines.extend(",".join(row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_spectrum_csv(cloud: SpectrumCloud, path) -> None:
    cols = [f"x_{i + 1}" for i in range(cloud.d)] + ["mult"]
    rows = (
        [_fmt(v) for v in pt] + [str(int(mu))]
        for pt, mu in zip(cloud.points, cloud.multiplicities)
    )
    _write(path, cols, rows)


def read_spectrum_csv(path) -> SpectrumCloud:
    rows = _read_rows(path)
    d = len(rows[0]) - 1 if rows else 2
    pts = np.array([[float(v) for v in r[:-1]] for r in rows]).reshape(len(rows), d)
    mult = np.array([int(r[-1]) for r in rows], dtype=np.int64)
    return SpectrumCloud(d=d, points=pts, multiplicities=mult)


def write_support_csv(samples: SupportSamples, path) -> None:
    cols = [f"alpha_{i + 1}" for i in range(samples.d)] + ["phi"]
    rows = (
        [_fmt(v) for v in a] + [_fmt(p)]
        for a, p in zip(samples.directions, samples.values)
    )
    _write(path, cols, rows)


def read_support_csv(path, lipschitz_bound: float = float("inf")) -> SupportSamples:
    rows = _read_rows(path)
    d = len(rows[0]) - 1
    dirs = np.array([[float(v) for v in r[:-1]] for r in rows])
    vals = np.array([float(r[-1]) for r in rows])
    return SupportSamples(d=d, directions=dirs, values=vals,
                          lipschitz_bound=lipschitz_bound)


def write_polygon_csv(poly: ConvexPolygon, path) -> None:
    _write(path, ["x", "y"], ([_fmt(x), _fmt(y)] for x, y in poly.vertices))


def write_boundary_csv(points: np.ndarray, path, columns=("H", "F")) -> None:
    _write(path, list(columns), ([_fmt(a), _fmt(b)] for a, b in points))


def write_report_csv(rows, path) -> None:
    cols = ["hbar", "d_hausdorff", "support_gap", "route_discrepancy"]
    _write(
        path,
        cols,
        (
            [_fmt(r.hbar), _fmt(r.d_hausdorff), _fmt(r.support_gap),
             _fmt(r.route_discrepancy)]
            for r in rows
        ),
    )


def _read_rows(path):
    out = []
    header_seen = False
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            header_seen = True
            continue
        out.append(line.split(","))
    return out
