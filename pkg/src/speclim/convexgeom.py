"""Support functions on the unit sphere, planar hulls, halfspace reconstruction,
and Hausdorff distances between finite point sets and convex bodies.

Exact hulls and reconstruction are provided for d = 2; higher dimensions are
represented purely through sampled support functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class SpectrumCloud:
    """Finite multiset of points in R^d with positive integer multiplicities."""

    d: int
    points: np.ndarray
    multiplicities: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if pts.size == 0:
            pts = pts.reshape(0, self.d)
        if pts.shape[1] != self.d:
            raise ValueError(f"points must have {self.d} coordinates")
        mult = np.asarray(self.multiplicities, dtype=np.int64)
        if mult.shape != (pts.shape[0],):
            raise ValueError("one multiplicity per point required")
        if pts.shape[0] and mult.min() < 1:
            raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "multiplicities", mult)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def total_multiplicity(self) -> int:
        return int(self.multiplicities.sum())


def cloud_from_points(points, multiplicities=None) -> SpectrumCloud:
    """Convenience constructor; unit multiplicities unless given."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if multiplicities is None:
        multiplicities = np.ones(pts.shape[0], dtype=np.int64)
    return SpectrumCloud(d=pts.shape[1], points=pts, multiplicities=multiplicities)


@dataclass(frozen=True)
class SupportSamples:
    """Sampled support function: unit directions with values and a Lipschitz bound."""

    d: int
    directions: np.ndarray
    values: np.ndarray
    lipschitz_bound: float

    def __post_init__(self):
        dirs = np.atleast_2d(np.asarray(self.directions, dtype=np.float64))
        vals = np.asarray(self.values, dtype=np.float64)
        if dirs.shape[1] != self.d:
            raise ValueError(f"directions must have {self.d} coordinates")
        if vals.shape != (dirs.shape[0],):
            raise ValueError("one value per direction required")
        norms = np.linalg.norm(dirs, axis=1)
        if dirs.shape[0] and np.abs(norms - 1.0).max() > _UNIT_TOL:
            raise ValueError("directions must be unit vectors")
        if self.lipschitz_bound < 0.0:
            raise ValueError("lipschitz_bound must be nonnegative")
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "values", vals)

    def check_lipschitz(self, slack: float = 0.0) -> float:
        """Worst violation of |phi(a) - phi(b)| <= C |a - b| over all pairs."""
        if not math.isfinite(self.lipschitz_bound):
            return 0.0
        diff = np.abs(self.values[:, None] - self.values[None, :])
        dist = np.linalg.norm(
            self.directions[:, None, :] - self.directions[None, :, :], axis=2
        )
        viol = diff - self.lipschitz_bound * dist - slack
        return float(viol.max()) if viol.size else 0.0


@dataclass(frozen=True)
class ConvexPolygon:
    """Counterclockwise vertex list in strictly convex position.

    Degenerate hulls (single point, segment) are first-class values with one
    or two vertices.
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=np.float64))
        if v.shape[0] < 1 or v.shape[1] != 2:
            raise ValueError("vertices must be a nonempty (k, 2) array")
        k = v.shape[0]
        if k >= 3:
            area2 = 0.0
            for i in range(k):
                a, b, c = v[i - 1], v[i], v[(i + 1) % k]
                cr = _cross(a, b, c)
                if cr <= 0.0:
                    raise ValueError(
                        "vertices must be strictly convex and counterclockwise"
                    )
                area2 += a[0] * b[1] - b[0] * a[1]
            if area2 <= 0.0:
                raise ValueError("orientation must be counterclockwise")
        elif k == 2 and np.array_equal(v[0], v[1]):
            raise ValueError("degenerate segment endpoints must differ")
        object.__setattr__(self, "vertices", v)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _inverse_normal(p: np.ndarray) -> np.ndarray:
    # Acklam's rational approximation of the standard normal quantile;
    # ~1e-9 accuracy is plenty for direction generation.
    a = [-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
         1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00]
    b = [-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
         6.680131188771972e01, -1.328068155288572e01]
    c = [-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
         -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00]
    dd = [7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
          3.754408661907416e00]
    p = np.clip(p, 1e-12, 1.0 - 1e-12)
    out = np.empty_like(p)
    lo = p < 0.02425
    hi = p > 1.0 - 0.02425
    mid = ~(lo | hi)
    if lo.any():
        q = np.sqrt(-2.0 * np.log(p[lo]))
        out[lo] = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0
        )
    if hi.any():
        q = np.sqrt(-2.0 * np.log(1.0 - p[hi]))
        out[hi] = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0
        )
    if mid.any():
        q = p[mid] - 0.5
        r = q * q
        out[mid] = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / (
            ((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0
        )
    return out


def directions(d: int, n_dirs: int) -> np.ndarray:
    """Deterministic unit direction set on S^{d-1}.

    d = 1 gives the two signs, d = 2 gives n_dirs uniformly spaced angles,
    d >= 3 a Kronecker low-discrepancy point set pushed to the sphere.
    """
    if n_dirs < 3:
        raise ValueError("n_dirs must be at least 3")
    if d < 1:
        raise ValueError("dimension must be positive")
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        theta = 2.0 * np.pi * np.arange(n_dirs) / n_dirs
        return np.column_stack([np.cos(theta), np.sin(theta)])
    # generalized golden ratio sequence in the cube, mapped through the
    # normal quantile and renormalized
    phi = 2.0
    for _ in range(64):
        phi = (1.0 + phi) ** (1.0 / (d + 1))
    alpha = phi ** -np.arange(1, d + 1)
    idx = np.arange(1, n_dirs + 1)[:, None]
    u = np.mod(0.5 + idx * alpha[None, :], 1.0)
    g = _inverse_normal(u)
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def support_value(cloud: SpectrumCloud, alpha) -> float:
    """sup over cloud points of <x, alpha>."""
    alpha = np.asarray(alpha, dtype=np.float64)
    if cloud.size == 0:
        raise ValueError("support of an empty cloud is undefined")
    return float((cloud.points @ alpha).max())


def sample_support(cloud: SpectrumCloud, n_dirs: int) -> SupportSamples:
    """Support function of the cloud on the standard direction set.

    The Lipschitz bound is the largest point norm.
    """
    if cloud.size == 0:
        raise ValueError("support of an empty cloud is undefined")
    dirs = directions(cloud.d, n_dirs)
    vals = (cloud.points @ dirs.T).max(axis=0)
    bound = float(np.linalg.norm(cloud.points, axis=1).max())
    return SupportSamples(d=cloud.d, directions=dirs, values=vals,
                          lipschitz_bound=bound)


def sample_support_fn(fn, d: int, n_dirs: int, lipschitz_bound: float) -> SupportSamples:
    """Sample an arbitrary support function on the standard direction set."""
    dirs = directions(d, n_dirs)
    vals = np.array([fn(a) for a in dirs])
    return SupportSamples(d=d, directions=dirs, values=vals,
                          lipschitz_bound=lipschitz_bound)


def hull2d(cloud: SpectrumCloud) -> ConvexPolygon:
    """Planar convex hull by monotone chain; collinear interior points dropped."""
    if cloud.d != 2:
        raise ValueError("hull2d requires d = 2")
    if cloud.size == 0:
        raise ValueError("hull of an empty cloud is undefined")
    pts = np.unique(cloud.points, axis=0)
    if pts.shape[0] == 1:
        return ConvexPolygon(vertices=pts)
    lower: list[np.ndarray] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    upper: list[np.ndarray] = []
    for p in pts[::-1]:
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)
    verts = lower[:-1] + upper[:-1]
    if len(verts) < 2:  # fully collinear input collapses the chains
        verts = [pts[0], pts[-1]]
    return ConvexPolygon(vertices=np.array(verts))


def polygon_cloud(poly: ConvexPolygon) -> SpectrumCloud:
    """Vertices of a polygon as a unit-multiplicity cloud."""
    return cloud_from_points(poly.vertices)


def _max_angular_gap(dirs: np.ndarray) -> float:
    ang = np.sort(np.arctan2(dirs[:, 1], dirs[:, 0]))
    gaps = np.diff(ang)
    wrap = ang[0] + 2.0 * np.pi - ang[-1]
    return float(max(gaps.max() if gaps.size else 0.0, wrap))


def _clip(poly: list[np.ndarray], alpha: np.ndarray, value: float) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    k = len(poly)
    for i in range(k):
        p, q = poly[i], poly[(i + 1) % k]
        pin = float(alpha @ p) <= value
        qin = float(alpha @ q) <= value
        if pin:
            out.append(p)
        if pin != qin:
            denom = float(alpha @ (q - p))
            t = (value - float(alpha @ p)) / denom
            out.append(p + t * (q - p))
    return out


def reconstruct_from_support(s: SupportSamples) -> ConvexPolygon:
    """Intersection of the sampled halfplanes {<x, a> <= phi(a)} for d = 2.

    Contains the true hull; the Hausdorff error is controlled by the
    Lipschitz constant and the angular mesh.
    """
    if s.d != 2:
        raise ValueError("reconstruction requires d = 2")
    if s.directions.shape[0] < 3:
        raise ValueError("at least 3 directions required")
    gap = _max_angular_gap(s.directions)
    if gap >= np.pi:
        raise ValueError("directions do not span the circle; intersection unbounded")
    phimax = max(float(s.values.max()), 0.0)
    radius = phimax / math.cos(gap / 2.0) + 1.0
    box = 2.0 * radius
    poly = [np.array([-box, -box]), np.array([box, -box]),
            np.array([box, box]), np.array([-box, box])]
    for alpha, value in zip(s.directions, s.values):
        poly = _clip(poly, alpha, float(value))
        if not poly:
            raise ValueError("halfplane intersection is empty")
    return hull2d(cloud_from_points(np.array(poly)))


def hausdorff_convex(a: SupportSamples, b: SupportSamples) -> float:
    """max over sampled directions of |phi_a - phi_b|.

    For convex compact sets this equals the Hausdorff distance up to the
    angular mesh error (C_a + C_b) * mesh.
    """
    if a.d != b.d or not np.array_equal(a.directions, b.directions):
        raise ValueError("support samples use different direction sets")
    return float(np.abs(a.values - b.values).max())


def hausdorff_points(a: SpectrumCloud, b: SpectrumCloud) -> float:
    """Exact two-sided Hausdorff distance between finite point sets."""
    if a.size == 0 or b.size == 0:
        raise ValueError("Hausdorff distance of an empty cloud is undefined")
    if a.d != b.d:
        raise ValueError("dimension mismatch")
    dist = np.linalg.norm(a.points[:, None, :] - b.points[None, :, :], axis=2)
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))
