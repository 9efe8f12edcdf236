"""Joint spectra: simultaneous diagonalization vs the lambda_max route."""

import numpy as np
import pytest

from oracles import coupled_joint_points
from speclim.btsphere import coupled_momenta, tensor_product, toeplitz_coordinate
from speclim.convexgeom import (cloud_from_points, hausdorff_points,
                                reconstruct_from_support, sample_support)
from speclim.jointspec import (CommutingFamily, hull_via_support,
                               joint_eigenbasis, joint_spectrum,
                               support_via_lambda)
from speclim.symspec import SymmetricMatrix, eigvalsh, lambda_extremes


def diag_family(*diags):
    return CommutingFamily(ops=tuple(SymmetricMatrix(np.diag(np.asarray(d, dtype=float)))
                                     for d in diags))


class TestCommutingFamily:
    def test_noncommuting_rejected_with_pair(self):
        a = SymmetricMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
        b = SymmetricMatrix(np.array([[1.0, 0.0], [0.0, -1.0]]))
        with pytest.raises(ValueError, match="operators 0 and 1"):
            CommutingFamily(ops=(a, b))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            CommutingFamily(ops=(SymmetricMatrix(np.eye(2)), SymmetricMatrix(np.eye(3))))

    def test_scale_is_max_norm(self):
        fam = diag_family([1.0, -4.0], [2.0, 0.5])
        assert fam.scale == 4.0


class TestJointSpectrum:
    def test_diagonal_pair(self):
        fam = diag_family([1.0, 2.0], [5.0, 6.0])
        cloud = joint_spectrum(fam)
        got = {tuple(p) for p in cloud.points}
        assert got == {(1.0, 5.0), (2.0, 6.0)}

    def test_toric_grid(self):
        z = toeplitz_coordinate(2, "z")
        eye = SymmetricMatrix(np.eye(3))
        fam = CommutingFamily(ops=(tensor_product(z, eye), tensor_product(eye, z)))
        cloud = joint_spectrum(fam)
        assert cloud.size == 9
        assert np.all(cloud.multiplicities == 1)
        want = {(a, b) for a in (-0.5, 0.0, 0.5) for b in (-0.5, 0.0, 0.5)}
        assert {tuple(p) for p in np.round(cloud.points, 12)} == want

    def test_coupled_nine_dimensional_vs_exact_oracle(self):
        fam = coupled_momenta(1, 1, 1)
        cloud = joint_spectrum(fam, seed=5)
        oracle = cloud_from_points(coupled_joint_points(1, 1, 1))
        assert cloud.total_multiplicity == 9
        assert hausdorff_points(cloud, oracle) < 1e-11

    def test_seed_independence(self):
        fam = coupled_momenta(1, 2, 2)
        clouds = [joint_spectrum(fam, seed=s) for s in (0, 1, 2, 3, 4)]
        base = clouds[0]
        for other in clouds[1:]:
            assert other.size == base.size
            assert hausdorff_points(base, other) <= 1e-9 * fam.scale
            assert sorted(other.multiplicities) == sorted(base.multiplicities)

    def test_exact_duplicate_labels_merge(self):
        fam = diag_family([1.0, 1.0, 3.0], [2.0, 2.0, 7.0])
        cloud = joint_spectrum(fam)
        assert cloud.size == 2
        assert sorted(cloud.multiplicities) == [1, 2]


class TestSupportViaLambda:
    def test_basis_directions(self):
        fam = diag_family([1.0, -2.0], [0.5, 3.0])
        assert support_via_lambda(fam, np.array([1.0, 0.0])) == 1.0
        assert support_via_lambda(fam, np.array([0.0, 1.0])) == 3.0

    def test_coupled_h_direction_exact_one(self):
        fam = coupled_momenta(1, 1, 4)
        assert abs(support_via_lambda(fam, np.array([0.0, 1.0])) - 1.0) < 1e-12

    def test_coupled_f_direction(self):
        fam = coupled_momenta(1, 2, 4)
        assert abs(support_via_lambda(fam, np.array([1.0, 0.0])) - 3.0) < 1e-12

    def test_nonunit_rejected(self):
        fam = diag_family([1.0, 2.0])
        with pytest.raises(ValueError, match="unit"):
            support_via_lambda(fam, np.array([2.0]))


class TestHullViaSupport:
    def test_single_operator_endpoints(self):
        fam = diag_family([-1.5, 0.25, 2.0])
        s = hull_via_support(fam, 16)
        assert np.array_equal(s.directions, [[1.0], [-1.0]])
        assert np.array_equal(s.values, [2.0, 1.5])

    def test_toric_square_reconstruction(self):
        z = toeplitz_coordinate(2, "z")
        eye = SymmetricMatrix(np.eye(3))
        fam = CommutingFamily(ops=(tensor_product(z, eye), tensor_product(eye, z)))
        poly = reconstruct_from_support(hull_via_support(fam, 720))
        corners = np.array([[0.5, 0.5], [-0.5, 0.5], [-0.5, -0.5], [0.5, -0.5]])
        assert hausdorff_points(cloud_from_points(poly.vertices),
                                cloud_from_points(corners)) < 5e-3

    def test_route_equivalence_coupled_m8(self):
        fam = coupled_momenta(1, 1, 8)
        s_lambda = hull_via_support(fam, 180)
        s_cloud = sample_support(joint_spectrum(fam), 180)
        assert np.abs(s_lambda.values - s_cloud.values).max() <= 1e-8 * fam.scale


class TestInvariants:
    def test_projection_property_multiset(self):
        # spectrum of the direction combination equals projected joint labels
        fam = coupled_momenta(1, 2, 3)
        cloud = joint_spectrum(fam, tol=1e-12)
        pts = np.repeat(cloud.points, cloud.multiplicities, axis=0)
        rng = np.random.default_rng(0)
        for _ in range(4):
            alpha = rng.standard_normal(2)
            alpha /= np.linalg.norm(alpha)
            from speclim.jointspec import linear_combination

            w = eigvalsh(linear_combination(fam.ops, alpha))
            proj = np.sort(pts @ alpha)
            assert np.abs(w - proj).max() <= 1e-9 * fam.scale

    def test_joint_eigenbasis_residuals(self):
        fam = coupled_momenta(1, 1, 3)
        basis = joint_eigenbasis(fam, tol=1e-9, seed=2)
        for j, op in enumerate(fam.ops):
            M = basis.basis.T @ op.entries @ basis.basis
            off = np.abs(M - np.diag(np.diagonal(M))).max()
            assert off <= 1e-9 * fam.op_norms[j]
        assert np.abs(basis.basis.T @ basis.basis - np.eye(fam.n)).max() < 1e-9

    def test_labels_match_extremes(self):
        fam = coupled_momenta(1, 2, 2)
        cloud = joint_spectrum(fam)
        lo, hi = lambda_extremes(fam.ops[0])
        assert abs(cloud.points[:, 0].max() - hi) < 1e-10
        assert abs(cloud.points[:, 0].min() - lo) < 1e-10
