"""Joint spectra of commuting symmetric families.

Two independent routes: simultaneous diagonalization through a seeded generic
combination with per-operator refinement of degenerate clusters, and the
support function through lambda_max of direction combinations.  Their
agreement is the central cross-check of the convergence machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .convexgeom import SpectrumCloud, SupportSamples, directions
from .symspec import SymmetricMatrix, eigh, lambda_extremes, operator_norm, commutator_norm

_GAP_FACTOR = 1e-8  # cluster gap threshold relative to norm * dimension


@dataclass(frozen=True)
class CommutingFamily:
    """Ordered tuple of equal-dimension symmetric operators that commute.

    Pairwise commutator norms are validated at construction against
    ``commute_tol`` times the larger operator norm; the offending pair is
    named on failure.  Tuple components of all joint-spectrum output follow
    the declaration order given here.
    """

    ops: tuple[SymmetricMatrix, ...]
    commute_tol: float = 1e-10
    op_norms: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        ops = tuple(self.ops)
        if not ops:
            raise ValueError("family must contain at least one operator")
        n = ops[0].n
        for op in ops:
            if op.n != n:
                raise ValueError("operators must share one dimension")
        norms = tuple(operator_norm(op) for op in ops)
        scale = max(norms)
        for i in range(len(ops)):
            for j in range(i + 1, len(ops)):
                c = commutator_norm(ops[i], ops[j])
                allowed = self.commute_tol * max(norms[i], norms[j], np.finfo(float).tiny)
                if c > allowed:
                    raise ValueError(
                        f"operators {i} and {j} do not commute: "
                        f"commutator norm {c:.3e} exceeds {allowed:.3e}"
                    )
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "op_norms", norms)

    @property
    def d(self) -> int:
        return len(self.ops)

    @property
    def n(self) -> int:
        return self.ops[0].n

    @property
    def scale(self) -> float:
        return max(self.op_norms)


@dataclass(frozen=True)
class JointEigenbasis:
    """Orthogonal basis that diagonalizes every family member, with the
    per-operator diagonal values as point labels."""

    basis: np.ndarray
    labels: np.ndarray


def _symmetrized(M: np.ndarray) -> SymmetricMatrix:
    return SymmetricMatrix((M + M.T) / 2.0)


def _split_runs(w: np.ndarray, threshold: float):
    """Index ranges of consecutive eigenvalues closer than threshold."""
    runs = []
    start = 0
    for i in range(1, w.shape[0] + 1):
        if i == w.shape[0] or w[i] - w[i - 1] > threshold:
            runs.append((start, i))
            start = i
    return runs


def _refine(basis: np.ndarray, lo: int, hi: int, fam: CommutingFamily, op_idx: int):
    if hi - lo <= 1 or op_idx >= fam.d:
        return
    if op_idx > fam.d:
        raise RuntimeError("cluster refinement exceeded family depth")
    V = basis[:, lo:hi]
    M = V.T @ fam.ops[op_idx].entries @ V
    dec = eigh(_symmetrized(M))
    basis[:, lo:hi] = V @ dec.eigenvectors
    thr = _GAP_FACTOR * max(fam.op_norms[op_idx], np.finfo(float).tiny) * (hi - lo)
    for a, b in _split_runs(dec.eigenvalues, thr):
        _refine(basis, lo + a, lo + b, fam, op_idx + 1)


def _joint_basis(fam: CommutingFamily, seed: int):
    """Simultaneous eigenbasis and per-operator labels, declaration order."""
    rng = np.random.default_rng(seed)
    c = 1.0 + rng.random(fam.d)
    c /= np.linalg.norm(c)
    combo = linear_combination(fam.ops, c)
    dec = eigh(combo)
    basis = np.ascontiguousarray(dec.eigenvectors)
    from .symspec import gershgorin_norm

    thr = _GAP_FACTOR * gershgorin_norm(combo) * fam.n
    for a, b in _split_runs(dec.eigenvalues, thr):
        _refine(basis, a, b, fam, 0)
    labels = np.empty((fam.n, fam.d))
    for j, op in enumerate(fam.ops):
        labels[:, j] = np.einsum("ij,ij->j", basis, op.entries @ basis)
    return basis, labels


def linear_combination(ops, coeffs) -> SymmetricMatrix:
    """Sum of coeff_j * T_j as an exactly symmetric matrix."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    acc = coeffs[0] * ops[0].entries
    for c, op in zip(coeffs[1:], ops[1:]):
        acc += c * op.entries
    return SymmetricMatrix(acc)


def joint_eigenbasis(fam: CommutingFamily, tol: float = 1e-9, seed: int = 0) -> JointEigenbasis:
    """Joint eigenbasis validated against per-operator off-diagonal residuals."""
    basis, labels = _joint_basis(fam, seed)
    for j, op in enumerate(fam.ops):
        M = basis.T @ op.entries @ basis
        off = np.abs(M - np.diag(np.diagonal(M))).max()
        if off > tol * max(fam.op_norms[j], np.finfo(float).tiny):
            raise ValueError(
                f"operator {j} is not diagonal in the joint basis "
                f"(off-diagonal residual {off:.3e})"
            )
    return JointEigenbasis(basis=basis, labels=labels)


def _merge_labels(labels: np.ndarray, radius: float):
    order = np.lexsort(labels.T[::-1])
    reps: list[np.ndarray] = []
    counts: list[int] = []
    for idx in order:
        p = labels[idx]
        hit = -1
        for r in range(len(reps) - 1, -1, -1):
            if p[0] - reps[r][0] > radius:
                break
            if np.linalg.norm(p - reps[r]) <= radius:
                hit = r
                break
        if hit >= 0:
            counts[hit] += 1
        else:
            reps.append(p)
            counts.append(1)
    return np.array(reps), np.array(counts, dtype=np.int64)


def joint_spectrum(fam: CommutingFamily, tol: float = 1e-7, seed: int = 0) -> SpectrumCloud:
    """Joint spectrum as a point cloud, multiplicities merged at tol * scale.

    A seeded generic combination splits the spectrum; degenerate clusters are
    refined by diagonalizing each operator in declaration order inside the
    cluster.  The merged label multiset is seed-independent.
    """
    _, labels = _joint_basis(fam, seed)
    radius = tol * max(fam.scale, np.finfo(float).tiny)
    points, counts = _merge_labels(labels, radius)
    return SpectrumCloud(d=fam.d, points=points, multiplicities=counts)


def support_via_lambda(fam: CommutingFamily, alpha) -> float:
    """lambda_max of the direction combination sum_j alpha_j T_j."""
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.shape != (fam.d,):
        raise ValueError(f"direction must have {fam.d} components")
    if abs(np.linalg.norm(alpha) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    _, hi = lambda_extremes(linear_combination(fam.ops, alpha))
    return hi


def hull_via_support(fam: CommutingFamily, n_dirs: int) -> SupportSamples:
    """Support samples of the joint spectrum computed through lambda_max.

    Equals (to mesh precision) the sampled support of the joint-spectrum
    cloud; the two routes cross-validate each other.
    """
    dirs = directions(fam.d, n_dirs)
    vals = np.array([support_via_lambda(fam, a) for a in dirs])
    bound = float(np.sqrt(sum(x * x for x in fam.op_norms)))
    return SupportSamples(d=fam.d, directions=dirs, values=vals,
                          lipschitz_bound=bound)
