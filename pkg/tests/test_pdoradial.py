"""Radial sectors: Legendre transform, classical region, discretization, oracle."""

import math

import numpy as np
import pytest

from oracles import grid_search_max
from speclim import pdoradial as pr
from speclim.convexgeom import hausdorff_points
from speclim.symspec import eigvalsh


class TestPotentials:
    def test_builtins_admissible(self):
        for name in ("linear", "quadratic", "linear_plus_quadratic"):
            assert pr.potential(name).admissible

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            pr.potential("cubic")

    def test_inadmissible_detected(self):
        decreasing = pr.RadialPotential(V=lambda r: -r, V_prime=lambda r: -1.0)
        assert not decreasing.admissible
        with pytest.raises(ValueError, match="admissib"):
            pr.legendre_g(decreasing, 1.0)


class TestLegendre:
    def test_linear_closed_form(self):
        V = pr.potential("linear")
        assert abs(pr.legendre_g(V, 2.0) - 1.0) < 1e-12
        for z in (0.3, 1.0, 4.2):
            assert abs(pr.legendre_g(V, z) - z * z / 4.0) < 1e-12

    def test_zero_exact(self):
        assert pr.legendre_g(pr.potential("linear"), 0.0) == 0.0
        assert pr.legendre_g(pr.potential("quadratic"), 0.0) == 0.0

    def test_quadratic_closed_form(self):
        V = pr.potential("quadratic")
        assert abs(pr.legendre_g(V, 3.0) - 2.0) < 1e-12

    def test_matches_grid_search(self):
        for name in ("linear", "quadratic", "linear_plus_quadratic"):
            V = pr.potential(name)
            for z in (0.7, 1.9, 3.1):
                brute = grid_search_max(lambda r: r * (z - V.V(r)), 0.0, 8.0)
                assert abs(pr.legendre_g(V, z) - brute) < 1e-7

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            pr.legendre_g(pr.potential("linear"), -0.1)


class TestClassicalRegionRot:
    def test_linear_is_wedge(self):
        region = pr.classical_region_rot(pr.potential("linear"), 2.0)
        assert region.contains((1.0, 1.0 / math.sqrt(2.0) - 1e-9))
        assert not region.contains((1.0, 1.0 / math.sqrt(2.0) + 1e-6))
        assert not region.contains((2.1, 0.0))

    def test_origin_on_boundary(self):
        for name in ("linear", "quadratic"):
            region = pr.classical_region_rot(pr.potential(name), 1.5)
            assert region.contains((0.0, 0.0))
            assert not region.contains((0.0, 1e-3))

    def test_boundary_samples_contained(self):
        region = pr.classical_region_rot(pr.potential("linear_plus_quadratic"), 2.0)
        for p in region.boundary_samples(120):
            assert region.contains(p)

    def test_midpoint_convexity(self):
        region = pr.classical_region_rot(pr.potential("linear"), 2.0)
        rng = np.random.default_rng(0)
        members = []
        while len(members) < 2000:
            p = rng.uniform([0.0, -1.5], [2.0, 1.5])
            if region.contains(p):
                members.append(p)
        members = np.array(members)
        mids = 0.5 * (members[:1000] + members[1000:])
        assert all(region.contains(p) for p in mids)

    def test_support_dominates_members(self):
        region = pr.classical_region_rot(pr.potential("linear"), 2.0)
        rng = np.random.default_rng(1)
        pts = []
        while len(pts) < 200:
            p = rng.uniform([0.0, -1.5], [2.0, 1.5])
            if region.contains(p):
                pts.append(p)
        pts = np.array(pts)
        for theta in np.linspace(0, 2 * np.pi, 12, endpoint=False):
            alpha = np.array([np.cos(theta), np.sin(theta)])
            assert (pts @ alpha).max() <= region.support(alpha) + 1e-9


class TestRadialHamiltonian:
    def test_harmonic_ground_state(self):
        V = pr.potential("linear")
        grid = pr.RadialGrid(R=12.0, N=1200)
        w = eigvalsh(pr.radial_hamiltonian(V, 0.5, 0, grid))
        assert abs(w[0] - math.sqrt(2.0) * 0.5) < 5e-5

    def test_second_order_convergence(self):
        V = pr.potential("linear")
        errs = []
        for N in (300, 600, 1200):
            w = eigvalsh(pr.radial_hamiltonian(V, 0.5, 0, pr.RadialGrid(R=12.0, N=N)))
            errs.append(abs(w[0] - math.sqrt(2.0) * 0.5))
        assert 3.2 <= errs[0] / errs[1] <= 4.8
        assert 3.2 <= errs[1] / errs[2] <= 4.8

    def test_sector_sign_symmetry(self):
        V = pr.potential("quadratic")
        grid = pr.RadialGrid(R=6.0, N=64)
        a = pr.radial_hamiltonian(V, 0.3, 2, grid)
        b = pr.radial_hamiltonian(V, 0.3, -2, grid)
        assert np.array_equal(a.entries, b.entries)

    def test_grid_guards(self):
        with pytest.raises(ValueError):
            pr.RadialGrid(R=10.0, N=8)
        with pytest.raises(ValueError):
            pr.RadialGrid(R=-1.0, N=64)
        with pytest.raises(ValueError):
            pr.radial_hamiltonian(pr.potential("linear"), 0.0, 0,
                                  pr.RadialGrid(R=10.0, N=64))


class TestJointSpectrumRot:
    def test_harmonic_oracle_match(self):
        V = pr.potential("linear")
        grid = pr.RadialGrid(R=12.0, N=2400)
        cloud = pr.joint_spectrum_rot(V, 0.25, 2.0, grid)
        oracle = pr.harmonic_oracle(0.25, 2.0)
        assert cloud.size == oracle.size
        assert hausdorff_points(cloud, oracle) <= 1e-4

    def test_points_inside_region_with_hbar_slack(self):
        V = pr.potential("linear")
        grid = pr.RadialGrid(R=12.0, N=1200)
        hbar = 0.25
        cloud = pr.joint_spectrum_rot(V, hbar, 2.0, grid)
        for H, F in cloud.points:
            assert abs(F) <= math.sqrt(2.0 * pr.legendre_g(V, max(H, 0.0))) + 2 * hbar

    def test_empty_window(self):
        V = pr.potential("linear")
        grid = pr.RadialGrid(R=12.0, N=600)
        cloud = pr.joint_spectrum_rot(V, 0.25, 0.2, grid)
        assert cloud.size == 0

    def test_wall_guard(self):
        V = pr.potential("linear")
        grid = pr.RadialGrid(R=1.0, N=64)
        with pytest.raises(ValueError, match="truncation"):
            pr.joint_spectrum_rot(V, 0.25, 1.5, grid)


class TestHarmonicOracle:
    def test_first_levels(self):
        cloud = pr.harmonic_oracle(0.5, 1.6)
        pts = {tuple(np.round(p, 12)) for p in cloud.points}
        e0 = math.sqrt(2.0) * 0.5
        want = {(round(e0, 12), 0.0),
                (round(2 * e0, 12), 0.5), (round(2 * e0, 12), -0.5)}
        assert pts == want

    def test_degeneracy_count(self):
        hbar = 0.1
        for levels in (3, 6, 10):
            e_max = math.sqrt(2.0) * hbar * (levels + 1) + 1e-12
            cloud = pr.harmonic_oracle(hbar, e_max)
            assert cloud.size == (levels + 1) * (levels + 2) // 2

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            pr.harmonic_oracle(0.0, 1.0)


class TestConcavity:
    @pytest.mark.parametrize("name", ["linear", "linear_plus_quadratic"])
    def test_sqrt_g_midpoint_concavity(self, name):
        V = pr.potential(name)
        rng = np.random.default_rng(7)
        z = np.sort(rng.uniform(1e-3, 4.0, (1000, 2)), axis=1)
        for z1, z2 in z:
            lhs = math.sqrt(pr.legendre_g(V, 0.5 * (z1 + z2)))
            rhs = 0.5 * (math.sqrt(pr.legendre_g(V, z1)) + math.sqrt(pr.legendre_g(V, z2)))
            assert lhs >= rhs - 1e-9

    def test_g_convex_increasing(self):
        V = pr.potential("linear_plus_quadratic")
        zs = np.linspace(0.0, 4.0, 81)
        g = np.array([pr.legendre_g(V, z) for z in zs])
        assert np.all(np.diff(g) >= -1e-12)
        assert np.all(np.diff(g, 2) >= -1e-9)
