"""Dense real symmetric spectral kernel.

Eigendecompositions (Householder tridiagonalization + implicit-shift QL via
the selected kernel backend), spectral extremes, operator and commutator
norms, and a real embedding for complex Hermitian matrices.  All operations
are pure functions; values are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernel


class EigenConvergenceError(RuntimeError):
    """QL iteration exhausted its sweep budget on one deflation block."""

    def __init__(self, block: int, cap: int):
        super().__init__(
            f"QL failed to converge within {cap} sweeps (block index {block})"
        )
        self.block = block


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense real symmetric matrix; exact entrywise symmetry is enforced."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.ascontiguousarray(self.entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("entries must be a square matrix")
        if a.shape[0] < 1:
            raise ValueError("dimension must be at least 1")
        if not np.array_equal(a, a.T):
            raise ValueError("matrix is not exactly symmetric")
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues sorted ascending with the matching orthogonal column basis."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def gershgorin_norm(A: SymmetricMatrix) -> float:
    """Upper bound for the operator norm (max absolute row sum)."""
    return float(np.abs(A.entries).sum(axis=1).max()) if A.n else 0.0


def _is_tridiagonal(a: np.ndarray) -> bool:
    n = a.shape[0]
    if n <= 2:
        return True
    return not np.any(np.triu(a, 2))


def _solve(a: np.ndarray, want_vectors: bool):
    """Eigenvalues (and optionally the transposed eigenvector matrix) of a."""
    n = a.shape[0]
    cap = 50 * n
    if _is_tridiagonal(a):
        d = np.diagonal(a).astype(np.float64).copy()
        e = np.zeros(n)
        if n > 1:
            e[: n - 1] = np.diagonal(a, 1)
        zt = np.eye(n) if want_vectors else None
    else:
        buf = a.astype(np.float64, copy=True)
        d, e = _kernel.tridiagonalize(buf, want_vectors)
        zt = np.ascontiguousarray(buf.T) if want_vectors else None
    fail = _kernel.ql(d, e, zt, cap)
    if fail >= 0:
        raise EigenConvergenceError(int(fail), cap)
    return d, zt


def _normalize_columns(w: np.ndarray, vt: np.ndarray):
    """Sort rows of vt by eigenvalue, fix signs, break exact ties lexicographically."""
    order = np.argsort(w, kind="stable")
    w = w[order]
    vt = vt[order]
    # first nonzero component of every eigenvector made positive
    nz = vt != 0.0
    first = nz.argmax(axis=1)
    lead = vt[np.arange(vt.shape[0]), first]
    vt[lead < 0.0] *= -1.0
    # deterministic order inside blocks of exactly equal eigenvalues
    start = 0
    n = w.shape[0]
    while start < n:
        stop = start + 1
        while stop < n and w[stop] == w[start]:
            stop += 1
        if stop - start > 1:
            block = vt[start:stop]
            perm = np.lexsort(block.T[::-1])
            vt[start:stop] = block[perm]
        start = stop
    return w, vt


def eigh(A: SymmetricMatrix, tol: float | None = None) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric matrix.

    Parameters
    ----------
    A : SymmetricMatrix
    tol : float, optional
        Acceptance threshold for the residual ``max_k |A v_k - w_k v_k|``
        relative to the Gershgorin norm bound, and for the absolute
        orthogonality defect of the basis.  Defaults to ``1e-10 * n``.

    Deterministic for fixed input: eigenvalues ascending, each eigenvector's
    first nonzero component positive, exact ties ordered lexicographically.
    """
    if tol is None:
        tol = 1e-10 * A.n
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    w, vt = _solve(A.entries, want_vectors=True)
    w, vt = _normalize_columns(w, vt)
    V = np.ascontiguousarray(vt.T)
    scale = gershgorin_norm(A)
    resid = np.abs(A.entries @ V - V * w).max(axis=0)
    if resid.size and resid.max() > tol * max(scale, np.finfo(float).tiny):
        raise EigenConvergenceError(int(resid.argmax()), 50 * A.n)
    ortho = np.abs(V.T @ V - np.eye(A.n)).max()
    if ortho > tol:
        raise EigenConvergenceError(int(0), 50 * A.n)
    return EigenDecomposition(eigenvalues=w, eigenvectors=V)


def eigvalsh(A: SymmetricMatrix) -> np.ndarray:
    """All eigenvalues, ascending, without accumulating eigenvectors."""
    w, _ = _solve(A.entries, want_vectors=False)
    return np.sort(w)


def lambda_extremes(A: SymmetricMatrix) -> tuple[float, float]:
    """(min, max) of the spectrum; the extremes of the Rayleigh quotient."""
    w = eigvalsh(A)
    return float(w[0]), float(w[-1])


def operator_norm(A: SymmetricMatrix) -> float:
    """Spectral norm max(|lambda_min|, |lambda_max|)."""
    lo, hi = lambda_extremes(A)
    return max(abs(lo), abs(hi))


def spectral_norm(M: np.ndarray) -> float:
    """Spectral norm of an arbitrary square real matrix via its symmetric square."""
    M = np.asarray(M, dtype=np.float64)
    if not M.any():
        return 0.0
    _, hi = lambda_extremes(SymmetricMatrix(M.T @ M))
    return float(np.sqrt(max(hi, 0.0)))


def commutator_norm(A: SymmetricMatrix, B: SymmetricMatrix) -> float:
    """Operator norm of i(AB - BA).

    AB - BA is real antisymmetric for symmetric A, B, so the norm is computed
    from its symmetric square.
    """
    if A.n != B.n:
        raise ValueError(f"dimension mismatch: {A.n} vs {B.n}")
    K = A.entries @ B.entries
    K -= K.T
    return spectral_norm(K)


def hermitian_embed(re: SymmetricMatrix, im: np.ndarray) -> SymmetricMatrix:
    """Realify the Hermitian matrix re + i*im as [[re, -im], [im, re]].

    im must be real antisymmetric of matching dimension.  The embedded
    spectrum is the Hermitian spectrum with every multiplicity doubled.
    """
    im = np.ascontiguousarray(im, dtype=np.float64)
    if im.shape != (re.n, re.n):
        raise ValueError("dimension mismatch between real and imaginary parts")
    if not np.array_equal(im, -im.T):
        raise ValueError("imaginary part is not exactly antisymmetric")
    n = re.n
    out = np.zeros((2 * n, 2 * n))
    out[:n, :n] = re.entries
    out[n:, n:] = re.entries
    out[:n, n:] = -im
    out[n:, :n] = im
    return SymmetricMatrix(out)
