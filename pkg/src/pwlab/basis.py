"""Plane-wave basis: directions, direction algebra, point evaluation.

The basis functions are phi_m(x) = exp(i kappa d_m . (x - center)) for
unit directions d_m = (cos theta_m, sin theta_m).  For the equally
spaced family theta_m = 2 pi m / p, the dot product of a boundary point
against a direction difference factors through

    direction_chord(n, p) = 2 sin(pi n / p)        (chord between
        directions n steps apart on the unit circle)
    bisector_sine(n, t, p) = sin(t - pi n / p)

so that x(t).(d_m - d_l) = |x| * chord(m-l) * bisector_sine(m+l, t).
Both satisfy f(n +- p) = -f(n), which is what makes the disk matrices
circulant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PlaneWaveBasis",
    "bisector_sine",
    "direction_chord",
    "directions",
    "eval_dphi_dn",
    "eval_phi",
    "fan_basis",
    "uniform_basis",
]


def directions(p: int) -> np.ndarray:
    """Equally spaced direction angles theta_m = 2 pi m / p, m = 0..p-1."""
    if p < 1:
        raise ValueError("p must be >= 1")
    return 2 * np.pi * np.arange(p) / p


@dataclass(frozen=True)
class PlaneWaveBasis:
    """p plane waves with wave number kappa centered at a point."""

    kappa: float
    angles: np.ndarray
    center: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        ang = np.asarray(self.angles, dtype=float)
        ctr = np.asarray(self.center, dtype=float)
        object.__setattr__(self, "angles", ang)
        object.__setattr__(self, "center", ctr)
        if self.kappa <= 0.0:
            raise ValueError("kappa must be positive")
        if ang.size < 1:
            raise ValueError("need at least one direction")
        if np.any(np.diff(ang) <= 0.0):
            raise ValueError("direction angles must be strictly increasing")

    @property
    def p(self) -> int:
        return self.angles.size

    @property
    def dirs(self) -> np.ndarray:
        """(p, 2) array of unit direction vectors."""
        return np.column_stack([np.cos(self.angles), np.sin(self.angles)])

    @property
    def is_uniform(self) -> bool:
        return bool(np.allclose(self.angles, directions(self.p), atol=1e-12))


def uniform_basis(p: int, kappa: float, center=(0.0, 0.0)) -> PlaneWaveBasis:
    """Basis with the p equally spaced directions."""
    return PlaneWaveBasis(kappa, directions(p), np.asarray(center, dtype=float))


def fan_basis(p: int, kappa: float, sector, center=(0.0, 0.0)) -> PlaneWaveBasis:
    """Directions uniformly spaced inside the angular sector [start, end].

    Endpoints are included (for p == 1 the single direction is the
    sector midpoint).  The sector bounds are explicit configuration.
    """
    start, end = float(sector[0]), float(sector[1])
    if not end > start:
        raise ValueError("sector end must exceed sector start")
    if p == 1:
        ang = np.array([0.5 * (start + end)])
    else:
        ang = start + (end - start) * np.arange(p) / (p - 1)
    return PlaneWaveBasis(kappa, ang, np.asarray(center, dtype=float))


def direction_chord(n: int, p: int) -> float:
    """Chord length 2 sin(pi n / p) between directions n steps apart.

    Only meaningful for the equally spaced direction family.
    """
    return 2.0 * math.sin(math.pi * n / p)


def bisector_sine(n: int, t: float, p: int) -> float:
    """sin(t - pi n / p): the angular factor against the pair bisector."""
    return math.sin(t - math.pi * n / p)


def eval_phi(basis: PlaneWaveBasis, m: int, x) -> complex | np.ndarray:
    """phi_m(x) = exp(i kappa d_m . (x - center)); x is (2,) or (N, 2)."""
    if not 0 <= m < basis.p:
        raise ValueError(f"wave index out of range: {m}")
    x = np.asarray(x, dtype=float)
    d = basis.dirs[m]
    phase = basis.kappa * ((x - basis.center) @ d)
    val = np.exp(1j * phase)
    return complex(val) if np.ndim(phase) == 0 else val


def eval_dphi_dn(basis: PlaneWaveBasis, m: int, x, normal) -> complex | np.ndarray:
    """Normal derivative: (grad phi_m . n)(x) = i kappa (d_m . n) phi_m(x)."""
    normal = np.asarray(normal, dtype=float)
    nn = np.linalg.norm(normal, axis=-1)
    if np.any(np.abs(nn - 1.0) > 1e-10):
        raise ValueError("normal must have unit length")
    d = basis.dirs[m]
    return 1j * basis.kappa * (normal @ d) * eval_phi(basis, m, x)


def eval_matrix(basis: PlaneWaveBasis, points: np.ndarray) -> np.ndarray:
    """All basis values at all points: (p, N) with [m, i] = phi_m(x_i)."""
    points = np.asarray(points, dtype=float)
    phases = basis.kappa * (basis.dirs @ (points - basis.center).T)
    return np.exp(1j * phases)
