"""Quantization on the sphere and its products.

Coordinate multiplication operators in the holomorphic-section basis (spin
matrices with an independent exact rational integral construction), rescaled
amplitude-a quantization, tensor products, the coupled angular-momenta pair,
toric product families, the classical regions they converge to, and the
quantization-axiom battery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .jointspec import CommutingFamily
from .symspec import SymmetricMatrix, hermitian_embed, lambda_extremes

TENSOR_DIM_CAP = 1_000_000
COUPLED_DIM_CAP = 5_000
TORIC_DIM_CAP = 4_096


@dataclass(frozen=True)
class ToeplitzParams:
    """Bundle power m (so hbar = 1/m) and amplitude a with 2*a*m integral."""

    m: int
    a: Fraction = Fraction(1, 2)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be a positive integer")
        a = Fraction(self.a)
        if a <= 0:
            raise ValueError("amplitude must be positive")
        if (2 * a * self.m).denominator != 1:
            raise ValueError(f"(a={a}, m={self.m}) is not quantizable: 2am must be integral")
        object.__setattr__(self, "a", a)

    @property
    def two_am(self) -> int:
        return int(2 * self.a * self.m)


@dataclass(frozen=True)
class ClassicalRegion:
    """Analytic descriptor of a classical spectrum in R^d.

    contains      membership predicate (closed region, small float slack)
    boundary_samples(n)  about n boundary points as an (k, d) array
    support(alpha)       exact or numerically maximized support value
    """

    d: int
    contains: Callable[[np.ndarray], bool]
    boundary_samples: Callable[[int], np.ndarray]
    support: Callable[[np.ndarray], float]


@dataclass(frozen=True)
class HermitianParts:
    """Real and imaginary parts of a Hermitian matrix, ready for embedding."""

    re: SymmetricMatrix
    im: np.ndarray

    def embedded(self) -> SymmetricMatrix:
        return hermitian_embed(self.re, self.im)


def _coupling(m: int) -> np.ndarray:
    k = np.arange(m)
    return np.sqrt((k + 1.0) * (m - k))


def toeplitz_coordinate(m: int, axis: str):
    """Coordinate multiplication operator on the (m+1)-dimensional section space.

    The z operator is diagonal with entries (m - 2k)/(m + 2), decreasing in
    the basis index; x is the matching real symmetric tridiagonal; y is
    purely imaginary and is returned as HermitianParts for realification.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    n = m + 1
    if axis == "z":
        diag = (m - 2.0 * np.arange(n)) / (m + 2)
        return SymmetricMatrix(np.diag(diag))
    c = _coupling(m) / (m + 2)
    if axis == "x":
        a = np.zeros((n, n))
        idx = np.arange(m)
        a[idx, idx + 1] = c
        a[idx + 1, idx] = c
        return SymmetricMatrix(a)
    if axis == "y":
        b = np.zeros((n, n))
        idx = np.arange(m)
        b[idx, idx + 1] = c
        b[idx + 1, idx] = -c
        return HermitianParts(re=SymmetricMatrix(np.zeros((n, n))), im=b)
    raise ValueError(f"axis must be one of x, y, z, got {axis!r}")


def scaled_quantization(a, m: int, axis: str):
    """Amplitude-a quantization: the coordinate operator at bundle power 2am."""
    params = ToeplitzParams(m=m, a=Fraction(a))
    return toeplitz_coordinate(params.two_am, axis)


def tensor_product(A: SymmetricMatrix, B: SymmetricMatrix) -> SymmetricMatrix:
    """Kronecker product, with a hard cap on the resulting dimension."""
    if A.n * B.n > TENSOR_DIM_CAP:
        raise ValueError(f"tensor dimension {A.n * B.n} exceeds cap {TENSOR_DIM_CAP}")
    return SymmetricMatrix(np.kron(A.entries, B.entries))


def _unit_spin(two_s: int):
    """Diagonal z, symmetric x and antisymmetric y-part with unit spectral radius.

    These carry the exact rescaling (1 + 1/(a m)) of the amplitude-a
    coordinate operators, turning the denominators m+2 into m.
    """
    n = two_s + 1
    z = np.diag((two_s - 2.0 * np.arange(n)) / two_s)
    c = _coupling(two_s) / two_s
    x = np.zeros((n, n))
    b = np.zeros((n, n))
    idx = np.arange(two_s)
    x[idx, idx + 1] = c
    x[idx + 1, idx] = c
    b[idx, idx + 1] = c
    b[idx + 1, idx] = -c
    return x, b, z


def coupled_momenta(a1, a2, m: int, commute_tol: float = 1e-12) -> CommutingFamily:
    """The commuting pair (F_hat, H_hat) of the coupled angular momenta.

    H_hat = X1(x)X2 + Y1(x)Y2 + Z1(x)Z2 and F_hat = a1 Z1(x)Id + Id(x)a2 Z2,
    built from the exactly rescaled unit-spectral-radius factors, so
    lambda_max(F_hat) = a1 + a2 exactly and the pair commutes to float noise.
    The family is real symmetric: the purely imaginary y factors combine into
    the real -B1(x)B2 term.
    """
    p1 = ToeplitzParams(m=m, a=Fraction(a1))
    p2 = ToeplitzParams(m=m, a=Fraction(a2))
    m1, m2 = p1.two_am, p2.two_am
    dim = (m1 + 1) * (m2 + 1)
    if dim > COUPLED_DIM_CAP:
        raise ValueError(f"coupled dimension {dim} exceeds cap {COUPLED_DIM_CAP}")
    x1, b1, z1 = _unit_spin(m1)
    x2, b2, z2 = _unit_spin(m2)
    i1 = np.eye(m1 + 1)
    i2 = np.eye(m2 + 1)
    F = float(p1.a) * np.kron(z1, i2) + float(p2.a) * np.kron(i1, z2)
    H = np.kron(x1, x2) - np.kron(b1, b2) + np.kron(z1, z2)
    return CommutingFamily(
        ops=(SymmetricMatrix(F), SymmetricMatrix(H)), commute_tol=commute_tol
    )


def coupled_region(a1: float, a2: float) -> ClassicalRegion:
    """Classical spectrum of (F, H) for amplitudes (a1, a2): the convex region
    F^2 <= a1^2 + a2^2 + 2 a1 a2 H with -1 <= H <= 1."""
    a1 = float(a1)
    a2 = float(a2)
    if a1 <= 0 or a2 <= 0:
        raise ValueError("amplitudes must be positive")
    c0 = a1 * a1 + a2 * a2
    c1 = 2.0 * a1 * a2
    fmax = a1 + a2
    fmin = abs(a1 - a2)
    tol = 1e-9 * max(1.0, fmax * fmax)

    def contains(p) -> bool:
        f, h = float(p[0]), float(p[1])
        return (-1.0 - tol <= h <= 1.0 + tol) and f * f <= c0 + c1 * h + tol

    def boundary_samples(n: int) -> np.ndarray:
        quarter = max(n // 4, 2)
        hs = np.linspace(-1.0, 1.0, quarter)
        right = np.column_stack([np.sqrt(c0 + c1 * hs), hs])
        top = np.column_stack([np.linspace(fmax, -fmax, quarter), np.ones(quarter)])
        left = np.column_stack([-np.sqrt(c0 + c1 * hs[::-1]), hs[::-1]])
        bottom = np.column_stack(
            [np.linspace(-fmin, fmin, quarter), -np.ones(quarter)]
        )
        return np.vstack([right, top, left, bottom])

    def support(alpha) -> float:
        af, ah = abs(float(alpha[0])), float(alpha[1])
        best = max(af * fmax + ah, af * fmin - ah)
        if ah < 0.0 and af > 0.0:
            r = -af * c1 / (2.0 * ah)
            h = (r * r - c0) / c1
            if -1.0 < h < 1.0:
                best = max(best, af * r + ah * h)
        return best

    return ClassicalRegion(
        d=2, contains=contains, boundary_samples=boundary_samples, support=support
    )


def classical_region_coupled(a: float) -> ClassicalRegion:
    """Normalized coupled region with a1 = 1 and a2 = a >= 1."""
    if a < 1.0:
        raise ValueError("normalized amplitude must satisfy a >= 1")
    return coupled_region(1.0, a)


def toric_product_family(m: int, weights) -> tuple[CommutingFamily, ClassicalRegion]:
    """Diagonal family of integer-weight combinations of the product z operators.

    The classical region is the image of the cube [-1, 1]^n under the weight
    matrix (a zonotope; for identity weights, the cube itself).
    """
    W = np.asarray(weights, dtype=np.int64)
    if W.ndim != 2:
        raise ValueError("weights must be a k x n integer matrix")
    k, n = W.shape
    if n > 4:
        raise ValueError("at most 4 sphere factors supported")
    dim = (m + 1) ** n
    if dim > TORIC_DIM_CAP:
        raise ValueError(f"toric dimension {dim} exceeds cap {TORIC_DIM_CAP}")
    zd = (m - 2.0 * np.arange(m + 1)) / (m + 2)
    ones = np.ones(m + 1)
    diags = []
    for i in range(n):
        vecs = [zd if j == i else ones for j in range(n)]
        acc = vecs[0]
        for v in vecs[1:]:
            acc = np.kron(acc, v)
        diags.append(acc)
    ops = tuple(
        SymmetricMatrix(np.diag(sum(float(W[j, i]) * diags[i] for i in range(n))))
        for j in range(k)
    )
    fam = CommutingFamily(ops=ops, commute_tol=1e-12)

    Wf = W.astype(np.float64)
    corners = np.array(
        [[(1.0 if (v >> i) & 1 else -1.0) for i in range(n)] for v in range(2**n)]
    )
    images = corners @ Wf.T
    scale = max(float(np.abs(images).max()), 1.0)
    tol = 1e-9 * scale

    def support(alpha) -> float:
        return float(np.abs(Wf.T @ np.asarray(alpha, dtype=np.float64)).sum())

    def contains(p) -> bool:
        p = np.asarray(p, dtype=np.float64)
        if k == n:
            try:
                u = np.linalg.solve(Wf, p)
                return bool(np.abs(u).max() <= 1.0 + 1e-9)
            except np.linalg.LinAlgError:
                pass
        if k == 1:
            return abs(float(p[0])) <= support(np.array([1.0])) + tol
        from .convexgeom import directions

        for alpha in directions(k, 360):
            if float(p @ alpha) > support(alpha) + tol:
                return False
        return True

    def boundary_samples(count: int) -> np.ndarray:
        if k == 2:
            from .convexgeom import cloud_from_points, hull2d

            verts = hull2d(cloud_from_points(images)).vertices
            if verts.shape[0] == 1:
                return verts
            per = max(count // verts.shape[0], 1)
            segs = []
            for i in range(verts.shape[0]):
                a, b = verts[i], verts[(i + 1) % verts.shape[0]]
                t = np.linspace(0.0, 1.0, per, endpoint=False)[:, None]
                segs.append(a + t * (b - a))
            return np.vstack(segs)
        return images

    return fam, ClassicalRegion(
        d=k, contains=contains, boundary_samples=boundary_samples, support=support
    )


# ---------------------------------------------------------------------------
# exact integral construction
#
# Matrix elements of multiplication by a polynomial in (x, y, z), compressed
# to the holomorphic sections, reduce to one-dimensional Beta-type integrals
# with rational values.  Entry (j, k) is num[j][k] / sqrt(P_j P_k) with
# num a Gaussian-rational matrix and P_j = j! (m-j)!.
# ---------------------------------------------------------------------------

Poly = dict  # {(a, b, c): Fraction} for x^a y^b z^c

POLY_ONE: Poly = {(0, 0, 0): Fraction(1)}
POLY_X: Poly = {(1, 0, 0): Fraction(1)}
POLY_Y: Poly = {(0, 1, 0): Fraction(1)}
POLY_Z: Poly = {(0, 0, 1): Fraction(1)}

ORACLE_DEGREE_CAP = 4


def poly_degree(f: Poly) -> int:
    return max((sum(key) for key, c in f.items() if c != 0), default=0)


def poly_add(f: Poly, g: Poly) -> Poly:
    out = dict(f)
    for key, c in g.items():
        out[key] = out.get(key, Fraction(0)) + c
    return {k: v for k, v in out.items() if v != 0}


def poly_mul(f: Poly, g: Poly) -> Poly:
    out: Poly = {}
    for (a1, b1, c1), u in f.items():
        for (a2, b2, c2), v in g.items():
            key = (a1 + a2, b1 + b2, c1 + c2)
            out[key] = out.get(key, Fraction(0)) + u * v
    return {k: v for k, v in out.items() if v != 0}


def poly_eval(f: Poly, x, y, z):
    acc = 0.0
    for (a, b, c), coeff in f.items():
        acc = acc + float(coeff) * x**a * y**b * z**c
    return acc


def poly_sup_abs(f: Poly, samples: int = 8192) -> float:
    """Numeric sup of |f| over the sphere (deterministic Fibonacci sample)."""
    i = np.arange(samples)
    z = 1.0 - (2.0 * i + 1.0) / samples
    phi = i * (np.pi * (3.0 - np.sqrt(5.0)))
    r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    vals = poly_eval(f, r * np.cos(phi), r * np.sin(phi), z)
    return float(np.abs(vals).max())


def _wpoly(f: Poly):
    """Expand f into affine-chart monomials: {(p, q): (re, im)} over a common
    denominator (1 + |W|^2)^D, with D the total degree of f."""
    D = poly_degree(f)
    coeffs: dict[tuple[int, int], list[Fraction]] = {}
    for (a, b, c), coeff in f.items():
        if coeff == 0:
            continue
        pad = D - (a + b + c)
        rot_re, rot_im = ((1, 0), (0, -1), (-1, 0), (0, 1))[b % 4]  # (-i)^b
        cre = coeff * rot_re
        cim = coeff * rot_im
        for i in range(a + 1):
            bi = math.comb(a, i)
            for l in range(b + 1):
                bl = math.comb(b, l) * (-1) ** (b - l)
                for t in range(c + 1):
                    bt = math.comb(c, t) * (-1) ** t
                    for u in range(pad + 1):
                        w = bi * bl * bt * math.comb(pad, u)
                        p = i + l + t + u
                        q = (a - i) + (b - l) + t + u
                        slot = coeffs.setdefault((p, q), [Fraction(0), Fraction(0)])
                        slot[0] += cre * w
                        slot[1] += cim * w
    return D, coeffs


@dataclass(frozen=True)
class OracleMatrix:
    """Exact-arithmetic Toeplitz matrix of a polynomial symbol.

    Float entries are correctly rounded from the exact representation
    num / sqrt(P_j P_k); the Gaussian-rational numerators and the integer
    weights are kept for exact comparisons.
    """

    m: int
    re: np.ndarray
    im: np.ndarray
    num_re: tuple
    num_im: tuple
    weights: tuple

    @property
    def is_real(self) -> bool:
        return all(v == 0 for row in self.num_im for v in row)

    @property
    def diag(self) -> tuple:
        """Exact rational diagonal."""
        return tuple(
            self.num_re[j][j] / self.weights[j] for j in range(self.m + 1)
        )

    def symmetric(self) -> SymmetricMatrix:
        if not self.is_real:
            raise ValueError("matrix has a nonzero imaginary part; embed it instead")
        return SymmetricMatrix(self.re)

    def hermitian_parts(self) -> HermitianParts:
        return HermitianParts(re=SymmetricMatrix(self.re), im=self.im)

    def embedded(self) -> SymmetricMatrix:
        return hermitian_embed(SymmetricMatrix(self.re), self.im)


def _signed_sqrt(num: Fraction, denom: int) -> float:
    if num == 0:
        return 0.0
    q = Fraction(num * num, denom)
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        val = float(Fraction(rn, rd))  # exact rational root, single rounding
    else:
        val = math.sqrt(float(q))
    return val if num > 0 else -val


def toeplitz_oracle(m: int, f: Poly) -> OracleMatrix:
    """Exact Toeplitz matrix of the polynomial symbol f via Beta integrals.

    Entries come out as exact rationals divided by sqrt(j!(m-j)! k!(m-k)!);
    the diagonal is exactly rational.  Degree is capped at 4.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if poly_degree(f) > ORACLE_DEGREE_CAP:
        raise ValueError(f"symbol degree exceeds the supported cap {ORACLE_DEGREE_CAP}")
    D, coeffs = _wpoly(f)
    n = m + 1
    fact = [math.factorial(i) for i in range(m + D + 2)]
    num_re = [[Fraction(0)] * n for _ in range(n)]
    num_im = [[Fraction(0)] * n for _ in range(n)]
    for (p, q), (cre, cim) in coeffs.items():
        delta = p - q
        for k in range(n):
            j = k + delta
            if 0 <= j < n:
                w = Fraction(fact[m + 1] * fact[k + p] * fact[m + D - k - p],
                             fact[m + D + 1])
                if cre:
                    num_re[j][k] += cre * w
                if cim:
                    num_im[j][k] += cim * w
    weights = tuple(fact[j] * fact[m - j] for j in range(n))
    re = np.zeros((n, n))
    im = np.zeros((n, n))
    for j in range(n):
        for k in range(n):
            denom = weights[j] * weights[k]
            if num_re[j][k]:
                re[j, k] = _signed_sqrt(num_re[j][k], denom)
            if num_im[j][k]:
                im[j, k] = _signed_sqrt(num_im[j][k], denom)
    return OracleMatrix(
        m=m,
        re=re,
        im=im,
        num_re=tuple(tuple(row) for row in num_re),
        num_im=tuple(tuple(row) for row in num_im),
        weights=weights,
    )


# ---------------------------------------------------------------------------
# quantization axiom battery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomRow:
    m: int
    hbar: float
    q1_defect: float
    q2_min: float
    q4_product_defect: float
    norm_f: float
    sup_f: float
    norm_gap: float


@dataclass(frozen=True)
class AxiomReport:
    rows: tuple[AxiomRow, ...]
    q4_exponent: float
    norm_gap_exponent: float


def _complex_norm(M: np.ndarray) -> float:
    """Spectral norm of a complex matrix through the realified Gram matrix."""
    if not M.any():
        return 0.0
    G = M.conj().T @ M
    emb = hermitian_embed(SymmetricMatrix((G.real + G.real.T) / 2.0),
                          (G.imag - G.imag.T) / 2.0)
    _, hi = lambda_extremes(emb)
    return float(np.sqrt(max(hi, 0.0)))


def _fit_exponent(ms, errs) -> float:
    ms = np.asarray(ms, dtype=np.float64)
    errs = np.asarray(errs, dtype=np.float64)
    keep = errs > 0.0
    if keep.sum() < 2:
        return float("nan")
    slope = np.polyfit(np.log(ms[keep]), np.log(errs[keep]), 1)[0]
    return float(-slope)


def axiom_battery(m_list, f: Poly = POLY_Z, g: Poly = POLY_X,
                  f_nonneg: Poly | None = None, sup_f: float | None = None) -> AxiomReport:
    """Quantization-axiom battery over a list of bundle powers.

    Per m: the normalization defect |T(1) - Id| (expected exactly 0 here),
    lambda_min of T(f_nonneg) for the nonnegative test symbol (expected
    nonnegative for this quantization), the product defect
    |T(f)T(g) - T(fg)|, and the norm gap sup|f| - |T(f)|.  Log-log fits of
    the product defect and norm gap give the decay exponents.
    """
    if poly_degree(f) > 2 or poly_degree(g) > 2:
        raise ValueError("battery symbols must have degree at most 2")
    if f_nonneg is None:
        f_nonneg = poly_add(POLY_ONE, POLY_Z)
    fg = poly_mul(f, g)
    if sup_f is None:
        sup_f = poly_sup_abs(f)
    rows = []
    for m in m_list:
        Tf = toeplitz_oracle(m, f)
        Tg = toeplitz_oracle(m, g)
        Tfg = toeplitz_oracle(m, fg)
        Tone = toeplitz_oracle(m, POLY_ONE)
        Cf = Tf.re + 1j * Tf.im
        Cg = Tg.re + 1j * Tg.im
        Cfg = Tfg.re + 1j * Tfg.im
        q1 = _complex_norm((Tone.re - np.eye(m + 1)) + 1j * Tone.im)
        Tpos = toeplitz_oracle(m, f_nonneg)
        if Tpos.is_real:
            q2, _ = lambda_extremes(Tpos.symmetric())
        else:
            q2, _ = lambda_extremes(Tpos.embedded())
        q4 = _complex_norm(Cf @ Cg - Cfg)
        norm_f = _complex_norm(Cf)
        rows.append(
            AxiomRow(
                m=int(m),
                hbar=1.0 / m,
                q1_defect=q1,
                q2_min=float(q2),
                q4_product_defect=q4,
                norm_f=norm_f,
                sup_f=float(sup_f),
                norm_gap=float(sup_f) - norm_f,
            )
        )
    ms = [r.m for r in rows]
    return AxiomReport(
        rows=tuple(rows),
        q4_exponent=_fit_exponent(ms, [r.q4_product_defect for r in rows]),
        norm_gap_exponent=_fit_exponent(ms, [r.norm_gap for r in rows]),
    )
