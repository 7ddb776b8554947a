"""Scattering test problems, boundary data, and relative L2 errors.

Exact Helmholtz solutions: a plane wave A e^{i kappa d.x}, a regular
Bessel field A J_0(kappa |x - p0|) standing in for point-source
scattering (p0 lies outside the element, so the singular fundamental
solution is not needed), and linear combinations.  Each produces the
impedance boundary data g = grad u . n + i kappa u, the right-hand side
enters through matrices.impedance_rhs, and accuracy is tracked by

    E(p) = ||u - u_p||_L2(K) / ||u||_L2(K)

with the interior quadrature of geometry.area_quadrature.  The
experiment runner sweeps p, solving each system both directly and with
(optionally preconditioned) restarted GMRES, and records per-p failures
without aborting the sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import PlaneWaveBasis, eval_matrix, fan_basis, uniform_basis
from .geometry import AreaRule, ElementGeometry, Polygon, area_quadrature
from .matrices import assemble_boundary_matrix, impedance_rhs, system_matrix
from .precond import PreconditionerSpec, build_preconditioner, make_context, preconditioned_condition
from .solver import SolveConfig, solve_preconditioned
from .special import bessel_j_table

__all__ = [
    "BesselPoint",
    "Combination",
    "ErrorReport",
    "ExactSolution",
    "PlaneWave",
    "boundary_data",
    "l2_relative_error",
    "run_experiment",
    "skinny_triangle",
]


@dataclass(frozen=True)
class PlaneWave:
    """u(x) = amplitude * e^{i kappa d.x} with direction angle in radians."""

    kappa: float
    angle: float
    amplitude: complex = 1.0

    @property
    def direction(self) -> np.ndarray:
        return np.array([math.cos(self.angle), math.sin(self.angle)])

    def value(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return self.amplitude * np.exp(1j * self.kappa * (points @ self.direction))

    def gradient(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return 1j * self.kappa * self.value(points)[:, None] * self.direction


@dataclass(frozen=True)
class BesselPoint:
    """u(x) = amplitude * J_0(kappa |x - source|).

    grad u = -amplitude * kappa * J_1(kappa r) (x - source)/r, with the
    r -> 0 limit 0 (a source on the boundary is thereby tolerated,
    though the field is then no longer a scattering solution).
    """

    kappa: float
    source: tuple[float, float]
    amplitude: complex = 1.0

    def value(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        r = np.linalg.norm(points - np.asarray(self.source), axis=1)
        return self.amplitude * bessel_j_table(0, self.kappa * r)[0]

    def gradient(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        diff = points - np.asarray(self.source)
        r = np.linalg.norm(diff, axis=1)
        safe = np.where(r == 0.0, 1.0, r)
        j1 = bessel_j_table(1, self.kappa * r)[1]
        radial = np.where(r == 0.0, 0.0, -self.amplitude * self.kappa * j1 / safe)
        return radial[:, None] * diff


@dataclass(frozen=True)
class Combination:
    """Linear combination of exact solutions sharing one wave number."""

    parts: tuple

    def __post_init__(self):
        kappas = {part.kappa for part in self.parts}
        if len(kappas) != 1:
            raise ValueError("all parts must share the same wave number")

    @property
    def kappa(self) -> float:
        return self.parts[0].kappa

    def value(self, points) -> np.ndarray:
        return sum(part.value(points) for part in self.parts)

    def gradient(self, points) -> np.ndarray:
        return sum(part.gradient(points) for part in self.parts)


ExactSolution = PlaneWave | BesselPoint | Combination


def boundary_data(u: ExactSolution, geom: ElementGeometry | None = None):
    """Impedance trace g(x, n) = grad u(x).n + i kappa u(x) as a callable."""

    def g(points, normals):
        grad = u.gradient(points)
        return np.sum(grad * np.asarray(normals), axis=1) + 1j * u.kappa * u.value(points)

    return g


def _default_area_order(kappa: float, h: float) -> int:
    return max(16, math.ceil(8 + 2 * kappa * h))


def l2_relative_error(
    u: ExactSolution,
    coeffs: np.ndarray,
    basis: PlaneWaveBasis,
    geom: ElementGeometry,
    rule: AreaRule | None = None,
) -> float:
    """E(p): relative L2 distance between u and the basis combination."""
    if rule is None:
        rule = area_quadrature(geom, _default_area_order(basis.kappa, geom.circumradius))
    values = eval_matrix(basis, rule.points)
    u_p = values.T @ np.asarray(coeffs, dtype=complex)
    u_exact = u.value(rule.points)
    denom = np.sum(np.abs(u_exact) ** 2 * rule.weights)
    if denom <= 0.0:
        raise ValueError("exact solution has zero L2 norm on the element")
    num = np.sum(np.abs(u_exact - u_p) ** 2 * rule.weights)
    return float(math.sqrt(num / denom))


def skinny_triangle(center: str = "centroid") -> Polygon:
    """Thin isosceles triangle: short side 2 sin(pi/25), apex at distance
    1 + cos(pi/25) from it (vertices lie on a unit circle).

    `center` picks the basis/reference point: "centroid", "apex", or
    "foot" (a short-side vertex).  The triangle is translated so the
    chosen point sits at the origin.
    """
    alpha = math.pi / 25
    s = math.sin(alpha)
    apex_x = 1 + math.cos(alpha)
    verts = np.array([[0.0, -s], [apex_x, 0.0], [0.0, s]])
    if center == "centroid":
        ref = verts.mean(axis=0)
    elif center == "apex":
        ref = verts[1]
    elif center == "foot":
        ref = verts[0]
    else:
        raise ValueError(f"unknown center {center!r}")
    return Polygon(verts - ref, center=np.zeros(2))


@dataclass
class ErrorReport:
    """One row of an experiment sweep."""

    p: int
    error_direct: float
    error_gmres: float
    cond: float
    iterations: int
    converged: bool
    preconditioner: str
    side: str
    failure: str | None = None


def run_experiment(
    u: ExactSolution,
    geom: ElementGeometry,
    p_values,
    precond: str = "none",
    side: str = "left",
    solve_config: SolveConfig | None = None,
    delta: float = 1e-10,
    basis_kind: str = "uniform",
    sector: tuple[float, float] | None = None,
    center=None,
    methods: tuple = ("direct", "gmres"),
) -> list[ErrorReport]:
    """Sweep p: assemble, solve (direct and/or GMRES), evaluate E(p).

    `precond` is "none" or one of P1..P7; `side` applies to both solver
    routes.  Failures in a single p are recorded on the report row and
    the sweep continues.
    """
    if solve_config is None:
        solve_config = SolveConfig(method="gmres", side=side)
    kappa = u.kappa
    base_center = geom.center if center is None else np.asarray(center, dtype=float)
    area_rule = area_quadrature(geom, _default_area_order(kappa, geom.circumradius))

    reports: list[ErrorReport] = []
    for p in p_values:
        try:
            if basis_kind == "uniform":
                basis = uniform_basis(p, kappa, center=base_center)
            elif basis_kind == "fan":
                if sector is None:
                    raise ValueError("fan basis needs an explicit sector")
                basis = fan_basis(p, kappa, sector, center=base_center)
            else:
                raise ValueError(f"unknown basis kind {basis_kind!r}")

            if precond == "none":
                M = assemble_boundary_matrix(basis, geom, "M").data
                S = assemble_boundary_matrix(basis, geom, "S").data
                D = assemble_boundary_matrix(basis, geom, "D").data
                sys = system_matrix(M, S, D, kappa).data
                P = None
            else:
                ctx = make_context(basis, geom)
                sys = ctx.element_system
                P = build_preconditioner(PreconditionerSpec(precond, kappa, delta), ctx)

            f = impedance_rhs(basis, geom, boundary_data(u, geom))

            use_side = side if precond != "none" else "none"
            e_direct = e_gmres = math.nan
            iterations, converged = 0, True
            if "direct" in methods:
                rep = solve_preconditioned(sys, f, P, SolveConfig(method="direct", side=use_side))
                e_direct = l2_relative_error(u, rep.x, basis, geom, area_rule)
            if "gmres" in methods:
                gmres_cfg = SolveConfig(
                    method="gmres",
                    side=use_side,
                    restart=solve_config.restart,
                    tol=solve_config.tol,
                    maxit=solve_config.maxit,
                )
                rep = solve_preconditioned(sys, f, P, gmres_cfg)
                e_gmres = l2_relative_error(u, rep.x, basis, geom, area_rule)
                iterations, converged = rep.iterations, rep.converged

            cond = (
                float(np.linalg.cond(sys, 2))
                if P is None
                else preconditioned_condition(P, sys, use_side)
            )
            reports.append(
                ErrorReport(
                    p=p,
                    error_direct=e_direct,
                    error_gmres=e_gmres,
                    cond=cond,
                    iterations=iterations,
                    converged=converged,
                    preconditioner=precond,
                    side=use_side,
                )
            )
        except Exception as exc:  # noqa: BLE001 - sweep must survive any cell
            reports.append(
                ErrorReport(
                    p=p,
                    error_direct=math.nan,
                    error_gmres=math.nan,
                    cond=math.nan,
                    iterations=0,
                    converged=False,
                    preconditioner=precond,
                    side=side,
                    failure=f"{type(exc).__name__}: {exc}",
                )
            )
    return reports
