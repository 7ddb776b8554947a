"""Element shapes and quadrature: disks, cyclic/general polygons.

A polygon is stored as a counter-clockwise, simple vertex list with
derived per-edge outward normals, lengths, centroid, and circumradius
(the largest center-to-vertex distance).  Boundary rules carry node
points, arclength weights, and the outward normal at each node so that
assembly can consume them directly; area rules carry points and weights
summing to the element area.

The disk boundary rule is a periodic trapezoid rule (spectrally
accurate for the analytic periodic integrands that arise here); polygon
edges use mapped Gauss-Legendre.  Polygon interiors use a centroid-fan
triangulation with a collapsed tensor Gauss rule per triangle; disks
use a polar tensor rule (Gauss in radius, uniform in angle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AreaRule",
    "CyclicAngles",
    "Disk",
    "ElementGeometry",
    "Polygon",
    "QuadratureRule",
    "area_quadrature",
    "cyclic_polygon",
    "default_points_per_edge",
    "edge_quadrature",
    "radial_param",
    "regular_polygon",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Boundary rule: points (N,2), arclength weights (N,), outward normals (N,2)."""

    points: np.ndarray
    weights: np.ndarray
    normals: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "points", np.asarray(self.points, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        object.__setattr__(self, "normals", np.asarray(self.normals, dtype=float))


@dataclass(frozen=True)
class AreaRule:
    """Interior rule: points (N,2) and weights (N,) summing to the area."""

    points: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class CyclicAngles:
    """Vertex angles of a cyclic polygon: strictly increasing, in [0, 2pi)."""

    angles: np.ndarray
    radius: float = 1.0

    def __post_init__(self):
        ang = np.asarray(self.angles, dtype=float)
        object.__setattr__(self, "angles", ang)
        if ang.size < 3:
            raise ValueError("a cyclic polygon needs at least 3 vertex angles")
        if np.any(ang < 0.0) or np.any(ang >= 2 * np.pi):
            raise ValueError("vertex angles must lie in [0, 2pi)")
        if np.any(np.diff(ang) <= 0.0):
            raise ValueError("vertex angles must be strictly increasing")
        if self.radius <= 0.0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class Disk:
    """Disk element of radius h."""

    center: np.ndarray = field(default_factory=lambda: np.zeros(2))
    radius: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.radius <= 0.0:
            raise ValueError("radius must be positive")

    @property
    def circumradius(self) -> float:
        return self.radius

    @property
    def perimeter(self) -> float:
        return 2 * np.pi * self.radius

    @property
    def area(self) -> float:
        return np.pi * self.radius**2


class Polygon:
    """Simple counter-clockwise polygon with derived edge data.

    Attributes
    ----------
    vertices : (L, 2) array
    center : (2,) array
        Reference point; defaults to the centroid.
    normals : (L, 2) array of unit outward edge normals.
    edge_lengths : (L,) array.
    circumradius : largest distance from center to a vertex.
    """

    def __init__(self, vertices, center=None):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise ValueError("vertices must be an (L>=3, 2) array")
        self.vertices = v
        L = v.shape[0]
        nxt = np.roll(v, -1, axis=0)
        edges = nxt - v

        # signed area (shoelace); must be positive for CCW orientation
        area2 = float(np.sum(v[:, 0] * nxt[:, 1] - nxt[:, 0] * v[:, 1]))
        if area2 <= 1e-300:
            raise ValueError("polygon must be counter-clockwise with positive area")
        self.area = 0.5 * area2

        self.edge_lengths = np.linalg.norm(edges, axis=1)
        if np.any(self.edge_lengths == 0.0):
            raise ValueError("degenerate zero-length edge")
        # rotate edge tangent by -90 degrees: outward for a CCW polygon
        tangents = edges / self.edge_lengths[:, None]
        self.normals = np.column_stack([tangents[:, 1], -tangents[:, 0]])

        cx = float(np.sum((v[:, 0] + nxt[:, 0]) * (v[:, 0] * nxt[:, 1] - nxt[:, 0] * v[:, 1])))
        cy = float(np.sum((v[:, 1] + nxt[:, 1]) * (v[:, 0] * nxt[:, 1] - nxt[:, 0] * v[:, 1])))
        self.centroid = np.array([cx, cy]) / (6.0 * self.area)

        self.center = self.centroid.copy() if center is None else np.asarray(center, dtype=float)
        self.circumradius = float(np.max(np.linalg.norm(v - self.center, axis=1)))
        self.perimeter = float(np.sum(self.edge_lengths))

        if _self_intersects(v):
            raise ValueError("polygon must be simple (non-self-intersecting)")

    @property
    def n_edges(self) -> int:
        return len(self.vertices)


ElementGeometry = Disk | Polygon


def _segments_cross(a0, a1, b0, b1) -> bool:
    """Proper intersection test for open segments (shared endpoints excluded)."""

    def orient(p, q, r):
        val = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        if abs(val) < 1e-14:
            return 0
        return 1 if val > 0 else -1

    o1, o2 = orient(a0, a1, b0), orient(a0, a1, b1)
    o3, o4 = orient(b0, b1, a0), orient(b0, b1, a1)
    return o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4)


def _self_intersects(v: np.ndarray) -> bool:
    L = len(v)
    for i in range(L):
        for j in range(i + 1, L):
            if j == i or (j + 1) % L == i or (i + 1) % L == j:
                continue
            if _segments_cross(v[i], v[(i + 1) % L], v[j], v[(j + 1) % L]):
                return True
    return False


def cyclic_polygon(angles: CyclicAngles, center=(0.0, 0.0)) -> Polygon:
    """Polygon with vertices h(cos theta_j, sin theta_j) on a circle of radius h."""
    h = angles.radius
    th = angles.angles
    verts = np.column_stack([h * np.cos(th), h * np.sin(th)]) + np.asarray(center, float)
    return Polygon(verts, center=np.asarray(center, dtype=float))


def regular_polygon(n_sides: int, radius: float = 1.0, phase: float = 0.0) -> Polygon:
    """Regular n-gon inscribed in a circle of the given radius."""
    if n_sides < 3:
        raise ValueError("need at least 3 sides")
    th = (phase + 2 * np.pi * np.arange(n_sides) / n_sides) % (2 * np.pi)
    order = np.argsort(th)
    return cyclic_polygon(CyclicAngles(th[order], radius))


def radial_param(angles: CyclicAngles, edge: int, t):
    """Radial parametrization of edge j of a cyclic polygon.

    For theta_j <= t <= theta_{j+1} the boundary point is
    r(t)(cos t, sin t) with
        r(t) = h cos((theta_{j+1}-theta_j)/2) sec((theta_{j+1}+theta_j)/2 - t)
    and the arclength density is
        g_j(t) = h |cos((theta_{j+1}-theta_j)/2)| sec^2((theta_{j+1}+theta_j)/2 - t).

    Returns (r, g); accepts scalar or array t.
    """
    th = angles.angles
    L = th.size
    if not 0 <= edge < L:
        raise ValueError(f"edge index out of range: {edge}")
    h = angles.radius
    t0 = th[edge]
    t1 = th[(edge + 1) % L] if edge + 1 < L else th[0] + 2 * np.pi
    t = np.asarray(t, dtype=float)
    if np.any(t < t0 - 1e-12) or np.any(t > t1 + 1e-12):
        raise ValueError("parameter t outside the edge's angular range")
    half_span = 0.5 * (t1 - t0)
    mid = 0.5 * (t1 + t0)
    sec = 1.0 / np.cos(mid - t)
    r = h * math.cos(half_span) * sec
    g = h * abs(math.cos(half_span)) * sec**2
    if t.ndim == 0:
        return float(r), float(g)
    return r, g


def default_points_per_edge(kappa: float, h: float) -> int:
    """Edge-rule resolution that comfortably resolves e^{i kappa d.x}."""
    return max(32, math.ceil(6 + 3 * kappa * h))


def edge_quadrature(geom: ElementGeometry, points_per_edge: int) -> QuadratureRule:
    """Boundary quadrature with outward normals.

    Polygon: Gauss-Legendre with `points_per_edge` nodes mapped to each
    straight edge (arclength weights).  Disk: `points_per_edge` total
    nodes of the periodic trapezoid rule, weight h * 2pi / N each.
    """
    if points_per_edge < 2:
        raise ValueError("points_per_edge must be >= 2")
    if isinstance(geom, Disk):
        n = points_per_edge
        t = 2 * np.pi * np.arange(n) / n
        normals = np.column_stack([np.cos(t), np.sin(t)])
        points = geom.center + geom.radius * normals
        weights = np.full(n, geom.radius * 2 * np.pi / n)
        return QuadratureRule(points, weights, normals)

    nodes, gauss_w = np.polynomial.legendre.leggauss(points_per_edge)
    s = 0.5 * (nodes + 1.0)                       # map [-1,1] -> [0,1]
    pts, wts, nrm = [], [], []
    v = geom.vertices
    nxt = np.roll(v, -1, axis=0)
    for j in range(geom.n_edges):
        pts.append(v[j] + np.outer(s, nxt[j] - v[j]))
        wts.append(0.5 * geom.edge_lengths[j] * gauss_w)
        nrm.append(np.tile(geom.normals[j], (points_per_edge, 1)))
    return QuadratureRule(np.vstack(pts), np.concatenate(wts), np.vstack(nrm))


def area_quadrature(geom: ElementGeometry, order: int) -> AreaRule:
    """Interior quadrature with weights summing to the element area.

    Polygon: centroid-fan triangulation, `order` x `order` collapsed
    tensor Gauss points per triangle.  Disk: Gauss in radius (weighted
    by r) times a uniform angular grid.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if isinstance(geom, Disk):
        nr, w_r = np.polynomial.legendre.leggauss(order)
        r = 0.5 * (nr + 1.0) * geom.radius
        w_r = 0.5 * geom.radius * w_r * r          # jacobian r dr
        n_ang = max(4 * order, 8)
        t = 2 * np.pi * np.arange(n_ang) / n_ang
        w_t = 2 * np.pi / n_ang
        pts = geom.center + np.stack(
            [np.outer(r, np.cos(t)).ravel(), np.outer(r, np.sin(t)).ravel()], axis=1
        )
        wts = np.outer(w_r, np.full(n_ang, w_t)).ravel()
        return AreaRule(pts, wts)

    nodes, gw = np.polynomial.legendre.leggauss(order)
    u = 0.5 * (nodes + 1.0)
    wu = 0.5 * gw
    uu, vv = np.meshgrid(u, u, indexing="ij")
    ww = np.outer(wu, wu)

    c = geom.centroid
    pts, wts = [], []
    verts = geom.vertices
    nxt = np.roll(verts, -1, axis=0)
    for j in range(geom.n_edges):
        a, b = verts[j], nxt[j]
        # collapsed map: (u,v) -> (1-u) c + u [(1-v) a + v b]; |J| = 2 area u
        tri_area2 = abs((a[0] - c[0]) * (b[1] - c[1]) - (a[1] - c[1]) * (b[0] - c[0]))
        x = (1 - uu)[..., None] * c + uu[..., None] * (
            (1 - vv)[..., None] * a + vv[..., None] * b
        )
        pts.append(x.reshape(-1, 2))
        wts.append((ww * uu * tri_area2).ravel())
    return AreaRule(np.vstack(pts), np.concatenate(wts))
