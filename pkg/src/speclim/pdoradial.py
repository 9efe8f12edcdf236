"""Rotationally symmetric planar Schrodinger pair, reduced to radial sectors.

Per integer angular momentum the radial operator is a symmetric tridiagonal
finite-difference matrix on a half-offset grid; joint spectrum points are
(energy, hbar * sector).  The classical region comes from a Legendre
transform of r V(r), evaluated by golden-section maximization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .btsphere import ClassicalRegion
from .convexgeom import SpectrumCloud
from .symspec import SymmetricMatrix, eigvalsh

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_ADMISSIBILITY_GRID = np.linspace(1e-6, 24.0, 97)


@dataclass(frozen=True)
class RadialPotential:
    """Smooth confining potential V on [0, inf).

    Admissibility (V(0) = 0, V > 0 and V' > 0 on the positive axis, convexity
    by sampled second differences) is checked on a fixed grid at construction.
    """

    V: Callable[[float], float]
    V_prime: Callable[[float], float]
    name: str = ""
    admissible: bool = field(init=False)

    def __post_init__(self):
        ok = abs(self.V(0.0)) == 0.0
        r = _ADMISSIBILITY_GRID
        v = np.array([self.V(x) for x in r])
        vp = np.array([self.V_prime(x) for x in r])
        ok = ok and bool((v > 0.0).all() and (vp > 0.0).all())
        second = np.diff(v, 2)
        ok = ok and bool((second >= -1e-9 * max(1.0, np.abs(v).max())).all())
        object.__setattr__(self, "admissible", ok)


def potential(name: str) -> RadialPotential:
    """Built-in admissible potentials: linear, quadratic, linear_plus_quadratic."""
    if name == "linear":
        return RadialPotential(V=lambda r: r, V_prime=lambda r: 1.0, name=name)
    if name == "quadratic":
        return RadialPotential(V=lambda r: r * r, V_prime=lambda r: 2.0 * r, name=name)
    if name == "linear_plus_quadratic":
        return RadialPotential(
            V=lambda r: r + r * r, V_prime=lambda r: 1.0 + 2.0 * r, name=name
        )
    raise ValueError(f"unknown potential {name!r}")


@dataclass(frozen=True)
class RadialGrid:
    """Half-line truncation: radius R, N interior points, spacing R/(N+1)."""

    R: float
    N: int

    def __post_init__(self):
        if self.R <= 0.0:
            raise ValueError("truncation radius must be positive")
        if self.N < 16:
            raise ValueError("at least 16 interior points required")

    @property
    def h(self) -> float:
        return self.R / (self.N + 1)

    @property
    def points(self) -> np.ndarray:
        return (np.arange(self.N) + 0.5) * self.h


def legendre_g(V: RadialPotential, z: float) -> float:
    """max over r >= 0 of (r z - r V(r)), by golden section on the concave
    objective; g(0) = 0 exactly."""
    if not V.admissible:
        raise ValueError("potential does not satisfy the admissibility hypotheses")
    if z < 0.0:
        raise ValueError("argument must be nonnegative")
    if z == 0.0:
        return 0.0
    vf, vp = V.V, V.V_prime

    def slope(r: float) -> float:
        return z - vf(r) - r * vp(r)

    def objective(r: float) -> float:
        return r * (z - vf(r))

    b = 1.0
    for _ in range(200):
        if slope(b) < 0.0:
            break
        b *= 2.0
    else:
        raise ValueError("failed to bracket the Legendre maximum")

    a = 0.0
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = objective(c)
    fd = objective(d)
    for _ in range(120):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = objective(d)
        if b - a <= 1e-13 * max(1.0, b):
            break
    r_star = 0.5 * (a + b)
    return max(objective(r_star), 0.0)


def classical_region_rot(V: RadialPotential, H_max: float) -> ClassicalRegion:
    """Classical spectrum in the (H, F) plane inside the energy window:
    0 <= H <= H_max, |F| <= sqrt(2 g(H))."""
    if H_max <= 0.0:
        raise ValueError("H_max must be positive")
    if not V.admissible:
        raise ValueError("potential does not satisfy the admissibility hypotheses")

    def fmax(h: float) -> float:
        return math.sqrt(2.0 * legendre_g(V, h))

    f_top = fmax(H_max)
    tol = 1e-9 * max(1.0, H_max, f_top)

    def contains(p) -> bool:
        h, f = float(p[0]), float(p[1])
        if not (-tol <= h <= H_max + tol):
            return False
        return abs(f) <= fmax(min(max(h, 0.0), H_max)) + tol

    def boundary_samples(n: int) -> np.ndarray:
        third = max(n // 3, 2)
        hs = np.linspace(0.0, H_max, third)
        top = np.array([[h, fmax(h)] for h in hs])
        edge_f = np.linspace(f_top, -f_top, third)
        edge = np.column_stack([np.full(third, H_max), edge_f])
        bottom = np.array([[h, -fmax(h)] for h in hs[::-1]])
        return np.vstack([top, edge, bottom])

    def support(alpha) -> float:
        ah, af = float(alpha[0]), abs(float(alpha[1]))

        def psi(h: float) -> float:
            return ah * h + af * fmax(h)

        a, b = 0.0, H_max
        c = b - _INVPHI * (b - a)
        d = a + _INVPHI * (b - a)
        fc, fd = psi(c), psi(d)
        for _ in range(90):
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - _INVPHI * (b - a)
                fc = psi(c)
            else:
                a, c, fc = c, d, fd
                d = a + _INVPHI * (b - a)
                fd = psi(d)
        best = psi(0.5 * (a + b))
        return max(best, psi(0.0), psi(H_max))

    return ClassicalRegion(
        d=2, contains=contains, boundary_samples=boundary_samples, support=support
    )


def radial_hamiltonian(V: RadialPotential, hbar: float, ell: int,
                       grid: RadialGrid) -> SymmetricMatrix:
    """Radial sector operator -(hbar^2/2)(d^2/dr^2 - (ell^2 - 1/4)/r^2) + V(r^2)
    as a symmetric tridiagonal matrix on the half-offset grid.

    Centered second differences of the polar form, symmetrized by the sqrt(r)
    substitution at the discrete level: the effective -1/(4r^2) piece lands on
    the off-diagonals as (i+1)/sqrt((i+1/2)(i+3/2)) factors.  A per-point
    diagonal -1/(4 r_i^2) instead would break the discrete Hardy bound at the
    origin and admit a spurious deep ell = 0 state.  Dirichlet walls at 0 and
    R; depends on ell only through ell^2."""
    if hbar <= 0.0:
        raise ValueError("hbar must be positive")
    h = grid.h
    r = grid.points
    kin = hbar * hbar / 2.0
    diag = kin * (2.0 / (h * h) + (ell * ell) / (r * r))
    diag = diag + np.array([V.V(x * x) for x in r])
    i = np.arange(grid.N - 1)
    off = -kin / (h * h) * (i + 1.0) / np.sqrt((i + 0.5) * (i + 1.5))
    a = np.diag(diag)
    a[i, i + 1] = off
    a[i + 1, i] = off
    return SymmetricMatrix(a)


def joint_spectrum_rot(V: RadialPotential, hbar: float, E_max: float,
                       grid: RadialGrid) -> SpectrumCloud:
    """Joint (H, F) points with H <= E_max, one sector per angular momentum.

    Sectors are scanned outward until the sector ground state leaves the
    energy window; sector ell contributes (E, hbar*ell) and (E, -hbar*ell).
    """
    wall = V.V(grid.R * grid.R)
    if E_max >= wall:
        raise ValueError(
            f"energy window {E_max} reaches the truncation wall V(R^2) = {wall}; "
            "results would be truncation-polluted"
        )
    by_sector: dict[int, np.ndarray] = {}
    ell = 0
    while True:
        w = eigvalsh(radial_hamiltonian(V, hbar, ell, grid))
        if w[0] > E_max:
            break
        by_sector[ell] = w[w <= E_max]
        ell += 1
    points = []
    for ell_signed in range(-(len(by_sector) - 1), len(by_sector)):
        energies = by_sector[abs(ell_signed)]
        for E in energies:
            points.append((float(E), hbar * ell_signed))
    if not points:
        return SpectrumCloud(d=2, points=np.zeros((0, 2)), multiplicities=np.zeros(0, dtype=np.int64))
    pts = np.array(sorted(points, key=lambda p: (p[1], p[0])))
    return SpectrumCloud(d=2, points=pts,
                         multiplicities=np.ones(pts.shape[0], dtype=np.int64))


def harmonic_oracle(hbar: float, E_max: float) -> SpectrumCloud:
    """Exact joint spectrum for the linear potential (isotropic oscillator of
    frequency sqrt(2)): points (sqrt(2) hbar (n+1), hbar q), |q| <= n,
    q = n mod 2."""
    if hbar <= 0.0 or E_max <= 0.0:
        raise ValueError("hbar and E_max must be positive")
    omega = math.sqrt(2.0)
    points = []
    n = 0
    while omega * hbar * (n + 1) <= E_max:
        E = omega * hbar * (n + 1)
        for q in range(-n, n + 1, 2):
            points.append((E, hbar * q))
        n += 1
    if not points:
        return SpectrumCloud(d=2, points=np.zeros((0, 2)), multiplicities=np.zeros(0, dtype=np.int64))
    pts = np.array(sorted(points, key=lambda p: (p[1], p[0])))
    return SpectrumCloud(d=2, points=pts,
                         multiplicities=np.ones(pts.shape[0], dtype=np.int64))
