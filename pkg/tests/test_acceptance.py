"""Acceptance gate: one test per criterion, at the stated tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion.
"""

import math
import time
from dataclasses import replace
from fractions import Fraction

import numpy as np

from oracles import halfplane_violation
from speclim import btsphere as bt
from speclim import cli
from speclim import numrange as nr
from speclim import pdoradial as pr
from speclim.convexgeom import (SupportSamples, cloud_from_points,
                                hausdorff_convex, hausdorff_points, hull2d,
                                polygon_cloud, reconstruct_from_support,
                                sample_support, sample_support_fn)
from speclim.jointspec import (CommutingFamily, hull_via_support,
                               joint_spectrum, support_via_lambda)
from speclim.symspec import (SymmetricMatrix, commutator_norm, eigvalsh,
                             lambda_extremes, operator_norm)

DIRS = 720


def _report(name, detail):
    print(f"acceptance {name}: PASS ({detail})")


def test_c01_oracle_equivalence():
    t0 = time.monotonic()
    for m in range(1, 13):
        oz = bt.toeplitz_oracle(m, bt.POLY_Z)
        assert list(oz.diag) == [Fraction(m - 2 * k, m + 2) for k in range(m + 1)]
        assert not oz.im.any()
        sz = bt.toeplitz_coordinate(m, "z")
        assert np.array_equal(np.diagonal(oz.re), np.diagonal(sz.entries))
        ox = bt.toeplitz_oracle(m, bt.POLY_X)
        sx = bt.toeplitz_coordinate(m, "x")
        assert np.abs(np.sort(eigvalsh(ox.symmetric()))
                      - np.sort(eigvalsh(sx))).max() <= 1e-12
        oy = bt.toeplitz_oracle(m, bt.POLY_Y)
        sy = bt.toeplitz_coordinate(m, "y")
        assert np.abs(eigvalsh(oy.embedded()) - eigvalsh(sy.embedded())).max() <= 1e-12
    elapsed = time.monotonic() - t0
    assert elapsed < 10.0
    _report("criterion 1 (oracle equivalence, m <= 12)", f"{elapsed:.2f}s")


def test_c02_axiom_battery():
    t0 = time.monotonic()
    for m in range(1, 65):
        one = bt.toeplitz_oracle(m, bt.POLY_ONE)
        assert np.array_equal(one.re, np.eye(m + 1)) and not one.im.any()
        pos = bt.toeplitz_oracle(m, bt.poly_add(bt.POLY_ONE, bt.POLY_Z))
        lo, _ = lambda_extremes(pos.symmetric())
        assert abs(lo - 2.0 / (m + 2)) <= 1e-12
    report = bt.axiom_battery([8, 16, 32, 64, 128], sup_f=1.0)
    assert all(r.q1_defect == 0.0 for r in report.rows)
    assert 0.8 <= report.q4_exponent <= 1.2
    elapsed = time.monotonic() - t0
    assert elapsed < 30.0
    _report("criterion 2 (axiom battery)",
            f"q4 exponent {report.q4_exponent:.3f}, {elapsed:.2f}s")


def test_c03_spectral_limit_gap():
    gaps = []
    for m in range(1, 257):
        _, hi = lambda_extremes(bt.toeplitz_coordinate(m, "z"))
        assert hi == float(Fraction(m, m + 2))  # bit-exact lambda_max
        assert Fraction(1) - Fraction(m, m + 2) == Fraction(2, m + 2)
        gaps.append(1.0 - hi)
    assert all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))
    assert gaps[-1] == 1.0 - float(Fraction(256, 258))
    _report("criterion 3 (spectral-limit gap 2/(m+2), m <= 256)",
            f"final gap {gaps[-1]:.2e}, strictly decreasing")


def test_c04_toric_convergence():
    prev = None
    for m in (2, 4, 8, 16, 32):
        fam, region = bt.toric_product_family(m, [[1, 0], [0, 1]])
        cloud = joint_spectrum(fam)
        s_cloud = sample_support(cloud, DIRS)
        s_region = sample_support_fn(region.support, 2, DIRS, math.sqrt(2.0))
        d_h = hausdorff_convex(s_cloud, s_region)
        assert abs(d_h - 2.0 * math.sqrt(2.0) / (m + 2)) <= 1e-9
        recon = reconstruct_from_support(s_cloud)
        gap = hausdorff_convex(sample_support(polygon_cloud(recon), DIRS), s_region)
        assert gap <= 2.0 * math.sqrt(2.0) / (m + 2) + 1e-4
        if prev is not None:
            assert gap < prev
        prev = gap
    _report("criterion 4 (toric d_H = 2*sqrt(2)/(m+2), m in 2..32)",
            f"last reconstruction gap {prev:.4f}")


def test_c05_coupled_momenta():
    t0 = time.monotonic()
    for a1, a2 in ((1, 1), (1, 2)):
        dhs = []
        region = bt.coupled_region(a1, a2)
        s_region = None
        for m in (2, 4, 8, 16):
            fam = bt.coupled_momenta(a1, a2, m)
            F, H = fam.ops
            assert commutator_norm(F, H) <= 1e-12 * operator_norm(H)
            _, f_hi = lambda_extremes(F)
            _, h_hi = lambda_extremes(H)
            assert abs(f_hi - (a1 + a2)) <= 1e-10
            assert abs(h_hi - 1.0) <= 1e-10
            cloud = joint_spectrum(fam, seed=1)
            s_cloud = sample_support(cloud, DIRS)
            if s_region is None:
                bound = float(np.hypot(a1 + a2, 1.0))
                s_region = sample_support_fn(region.support, 2, DIRS, bound)
            dhs.append(hausdorff_convex(s_cloud, s_region))
        assert all(dhs[i + 1] < dhs[i] for i in range(len(dhs) - 1))
        assert dhs[-1] / dhs[0] <= 0.5
    elapsed = time.monotonic() - t0
    assert elapsed < 120.0
    _report("criterion 5 (coupled momenta, (1,1) and (1,2), m in 2..16)",
            f"{elapsed:.1f}s, last/first {dhs[-1] / dhs[0]:.3f}")


def _route_gap(fam) -> float:
    s_lambda = hull_via_support(fam, DIRS)
    s_cloud = sample_support(joint_spectrum(fam, seed=3), DIRS)
    return float(np.abs(s_lambda.values - s_cloud.values).max()) / fam.scale


def test_c06_route_equivalence():
    suite = {
        "toric m=2": bt.toric_product_family(2, [[1, 0], [0, 1]])[0],
        "toric m=8": bt.toric_product_family(8, [[1, 0], [0, 1]])[0],
        "toric m=16": bt.toric_product_family(16, [[1, 0], [0, 1]])[0],
        "toric sum m=6": bt.toric_product_family(6, [[1, 0], [1, 1]])[0],
        "coupled (1,1) m=2": bt.coupled_momenta(1, 1, 2),
        "coupled (1,1) m=8": bt.coupled_momenta(1, 1, 8),
        "coupled (1,2) m=4": bt.coupled_momenta(1, 2, 4),
    }
    rng = np.random.default_rng(0)
    diag = tuple(SymmetricMatrix(np.diag(rng.standard_normal(12))) for _ in range(3))
    suite["diagonal triple"] = CommutingFamily(ops=diag)
    worst = 0.0
    for name, fam in suite.items():
        gap = _route_gap(fam)
        assert gap <= 1e-7, (name, gap)
        worst = max(worst, gap)
    _report("criterion 6 (route equivalence over 720 directions)",
            f"worst relative gap {worst:.2e}")


def test_c07_rotational_system():
    V = pr.potential("linear")
    grid = pr.RadialGrid(R=12.0, N=2400)
    cloud = pr.joint_spectrum_rot(V, 0.25, 2.0, grid)
    oracle = pr.harmonic_oracle(0.25, 2.0)
    assert cloud.size == oracle.size
    assert hausdorff_points(cloud, oracle) <= 1e-4
    ratio_text = []
    for name in ("linear", "linear_plus_quadratic"):
        cfg = replace(cli.load_config("rotational"),
                      out_dir="/tmp/speclim-accept-rot", potential=name,
                      hbar_list=(0.4, 0.2, 0.1))
        report = cli.run_convergence(cfg)
        for ratio in report.ratios:
            assert 0.35 <= ratio <= 0.65, (name, ratio)
        ratio_text.append(f"{name}: " + ",".join(f"{x:.2f}" for x in report.ratios))
    rng = np.random.default_rng(7)
    for name in ("linear", "linear_plus_quadratic"):
        Vp = pr.potential(name)
        z = np.sort(rng.uniform(1e-3, 4.0, (1000, 2)), axis=1)
        for z1, z2 in z:
            lhs = math.sqrt(pr.legendre_g(Vp, 0.5 * (z1 + z2)))
            rhs = 0.5 * (math.sqrt(pr.legendre_g(Vp, z1))
                         + math.sqrt(pr.legendre_g(Vp, z2)))
            assert lhs >= rhs - 1e-9
    _report("criterion 7 (rotational system)", "; ".join(ratio_text))


def test_c08_noncommuting_sigma():
    for m in (4, 10):
        ops = (bt.toeplitz_coordinate(m, "x"), bt.toeplitz_coordinate(m, "z"))
        s = nr.sigma_region(ops, 360)
        assert np.abs(s.values - m / (m + 2)).max() <= 1e-10
        disk = SupportSamples(d=2, directions=s.directions,
                              values=np.ones(360), lipschitz_bound=1.0)
        assert abs(hausdorff_convex(s, disk) - 2.0 / (m + 2)) <= 1e-10
    fam = bt.coupled_momenta(1, 2, 4)
    a = nr.sigma_region(fam.ops, DIRS)
    b = sample_support(joint_spectrum(fam, seed=2), DIRS)
    gap_coupled = float(np.abs(a.values - b.values).max())
    assert gap_coupled <= 1e-9 * max(1.0, fam.scale)
    fam2, _ = bt.toric_product_family(8, [[1, 0], [0, 1]])
    a2 = nr.sigma_region(fam2.ops, DIRS)
    b2 = sample_support(joint_spectrum(fam2, seed=2), DIRS)
    assert np.abs(a2.values - b2.values).max() <= 1e-9
    _report("criterion 8 (non-commuting Sigma)",
            f"coupled Sigma-vs-hull gap {gap_coupled:.2e}")


def test_c09_convex_geometry_suite():
    n_dirs = 240
    mesh = 2.0 * np.pi / n_dirs
    for seed in range(100):
        rng = np.random.default_rng(1000 + seed)
        cloud = cloud_from_points(3.0 * rng.standard_normal((40, 2)))
        hull = hull2d(cloud)
        s_cloud = sample_support(cloud, n_dirs)
        s_hull = sample_support(polygon_cloud(hull), n_dirs)
        # hull/support duality: identical sampled support functions
        assert np.array_equal(s_cloud.values, s_hull.values)
        # Lipschitz bound with the max point norm as constant
        assert s_cloud.check_lipschitz(slack=1e-12) <= 0.0
        # Minkowski offset: +eps on the support reconstructs an eps-fattened body
        eps = 0.5
        fat = reconstruct_from_support(
            SupportSamples(d=2, directions=s_hull.directions,
                           values=s_hull.values + eps,
                           lipschitz_bound=s_hull.lipschitz_bound + eps))
        s_fat = sample_support(polygon_cloud(fat), n_dirs)
        offs = s_fat.values - s_hull.values
        slack = (2.0 * s_fat.lipschitz_bound) * mesh
        assert offs.min() >= eps - 1e-9
        assert offs.max() <= eps + slack
        assert halfplane_violation(fat.vertices, hull.vertices) <= -eps + slack
        # round trip within the linear mesh bound
        recon = reconstruct_from_support(s_hull)
        s_recon = sample_support(polygon_cloud(recon), n_dirs)
        bound = (s_hull.lipschitz_bound + s_recon.lipschitz_bound) * mesh
        assert np.abs(s_recon.values - s_hull.values).max() <= bound
    _report("criterion 9 (convex-geometry suite, 100 seeded sets)",
            f"mesh bound at {n_dirs} directions")


def test_c10_determinism():
    import tempfile
    from pathlib import Path

    def run(system, threads, out):
        cfg = replace(cli.load_config(system), out_dir=str(out),
                      hbar_list=(0.5, 0.25), n_dirs=180, threads=threads, seed=42)
        cli.run_convergence(cfg)
        return {p.name: p.read_bytes() for p in sorted(Path(out).iterdir())}

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for system in ("toric", "numrange"):
            runs = [run(system, threads, tmp / f"{system}{i}")
                    for i, threads in enumerate((1, 1, 2, 8))]
            assert all(r == runs[0] for r in runs[1:]), system
    _report("criterion 10 (determinism across 1/2/8 worker threads)",
            "byte-identical artifacts")
