"""Expectation map and joint numerical range for possibly non-commuting families.

Mixed states, pure-state sampling of the range, and the convex body Sigma of
expectation values represented through its support function lambda_max of
direction combinations.  For commuting families Sigma coincides with the
joint-spectrum hull.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .convexgeom import SpectrumCloud, SupportSamples, directions
from .jointspec import linear_combination
from .symspec import SymmetricMatrix, lambda_extremes, operator_norm

_CHUNK = 1024


@dataclass(frozen=True)
class MixedState:
    """Convex mixture of orthonormal vectors: weights sum to one, Gram = Id."""

    weights: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        v = np.asarray(self.vectors, dtype=np.float64)
        if v.ndim != 2 or w.shape != (v.shape[1],):
            raise ValueError("one weight per state vector required")
        if w.min() < -1e-15:
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to one (unit trace)")
        gram = v.T @ v
        if np.abs(gram - np.eye(v.shape[1])).max() > 1e-10:
            raise ValueError("state vectors must be orthonormal")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "vectors", v)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]


def expectation(fam, Q: MixedState) -> np.ndarray:
    """Expectation point (trace(T_1 Q), ..., trace(T_d Q))."""
    out = np.empty(len(fam))
    for j, op in enumerate(fam):
        if op.n != Q.n:
            raise ValueError("state dimension does not match the family")
        out[j] = float(np.einsum("ik,ik->", Q.vectors, op.entries @ Q.vectors * Q.weights))
    return out


def _chunk_points(fam, seed: int, chunk_index: int, count: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence([seed, chunk_index]))
    n = fam[0].n
    u = rng.standard_normal((count, n))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    pts = np.empty((count, len(fam)))
    for j, op in enumerate(fam):
        pts[:, j] = np.einsum("ij,ij->i", u, u @ op.entries)
    return pts


def sample_numerical_range(fam, N: int, seed: int = 0, threads: int = 1) -> SpectrumCloud:
    """N pure-state expectation points from seeded Gaussian unit vectors.

    Sampling is chunked with per-chunk seeds derived from the master seed, so
    the output is independent of the thread count.
    """
    if N < 1:
        raise ValueError("at least one sample required")
    n0 = fam[0].n
    for op in fam:
        if op.n != n0:
            raise ValueError("family operators must share one dimension")
    bounds = [(c, min(_CHUNK, N - c * _CHUNK)) for c in range((N + _CHUNK - 1) // _CHUNK)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: _chunk_points(fam, seed, b[0], b[1]), bounds))
    else:
        parts = [_chunk_points(fam, seed, c, cnt) for c, cnt in bounds]
    pts = np.vstack(parts)
    return SpectrumCloud(d=len(fam), points=pts,
                         multiplicities=np.ones(N, dtype=np.int64))


def sigma_support(fam, alpha) -> float:
    """Support function of Sigma: lambda_max of the direction combination."""
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.shape != (len(fam),):
        raise ValueError(f"direction must have {len(fam)} components")
    if abs(np.linalg.norm(alpha) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    _, hi = lambda_extremes(linear_combination(fam, alpha))
    return hi


def sigma_region(fam, n_dirs: int) -> SupportSamples:
    """Support samples of the expectation body Sigma on the standard directions."""
    dirs = directions(len(fam), n_dirs)
    vals = np.array([sigma_support(fam, a) for a in dirs])
    norms = [operator_norm(op) for op in fam]
    bound = float(np.sqrt(sum(x * x for x in norms)))
    return SupportSamples(d=len(fam), directions=dirs, values=vals,
                          lipschitz_bound=bound)
