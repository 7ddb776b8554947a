"""The seven square-root-type preconditioners, applied in the DFT basis.

All seven act as x -> U diag(d) U* x with U the unitary DFT and d an
inverse-square-root of circulant eigendata:

  P1  d_q = (kappa^2 mu_q)^(-1/2),          mu = disk mass eigenvalues
  P2  d_q = lambda_q(SyS^disk)^(-1/2)
  P3  d_q = (kappa^2 lambda_q(C_R of M^K))^(-1/2)
  P4  d_q = lambda_q(C_R of SyS^K)^(-1/2)
  P5  d_q = (kappa^2 lambda_q(C_best of M^K))^(-1/2)
  P6  d_q = (kappa^2 mu_q)^(-1/2) if |mu_q| >  delta else 1
  P7  d_q = (kappa^2 mu_q)^(-1/2) if |mu_q| >= delta else 0

Complex eigenvalues (P3, P4) take the principal square root.  P1-P5
refuse eigendata with magnitude below 1e-300 (use P6/P7 then); P6 is
invertible by construction; P7 is deliberately singular with rank
#{q : |mu_q| >= delta}.  Every preconditioner is applied by
multiplication only, so the singular P7 needs no special casing.

Disk eigendata (mu and lambda(SyS^disk)) comes from the exact aliased
spectra, which stay positive and relatively accurate at extreme decay;
element eigendata is the DFT of assembled first rows / diagonal
averages and inherits ordinary assembly noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import PlaneWaveBasis
from .circulant import (
    SingularOperatorError,
    circ_best,
    circ_first_row,
    circulant_from_row,
    unitary_dft,
)
from .geometry import ElementGeometry
from .matrices import assemble_boundary_matrix, system_matrix
from .special import bessel_j

__all__ = [
    "DiagonalizedOperator",
    "PreconditionerContext",
    "PreconditionerSpec",
    "build_preconditioner",
    "make_context",
    "preconditioned_condition",
]

_TINY = 1e-300

KINDS = ("P1", "P2", "P3", "P4", "P5", "P6", "P7")


@dataclass(frozen=True)
class PreconditionerSpec:
    """Which preconditioner to build, with its regularization threshold."""

    kind: str
    kappa: float
    delta: float = 1e-10

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind in ("P6", "P7") and not self.delta > 0.0:
            raise ValueError("regularized preconditioners need delta > 0")


@dataclass
class DiagonalizedOperator:
    """Operator U diag(d) U* for the unitary DFT U."""

    diag: np.ndarray

    def __post_init__(self):
        self.diag = np.asarray(self.diag, dtype=complex)

    @property
    def p(self) -> int:
        return self.diag.size

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.diag))

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if v.shape[0] != self.p:
            raise ValueError("dimension mismatch")
        U = unitary_dft(self.p)
        return U @ (self.diag * (U.conj().T @ v))

    def materialize(self) -> np.ndarray:
        U = unitary_dft(self.p)
        return (U * self.diag) @ U.conj().T


@dataclass
class PreconditionerContext:
    """Eigendata and element matrices the builders draw from."""

    kappa: float
    p: int
    disk_mass_eigs: np.ndarray | None = None
    disk_system_eigs: np.ndarray | None = None
    element_mass: np.ndarray | None = None
    element_system: np.ndarray | None = None


def _disk_reference_rows(basis: PlaneWaveBasis, h: float):
    """First rows of the disk mass and system matrices, any direction set.

    For general angles the disk matrices are Toeplitz (entries depend on
    the angle difference); the cross matrix stays real symmetric, so the
    system row is kappa^2 * mass + stiffness.
    """
    kappa = basis.kappa
    th = basis.angles
    dth = th - th[0]
    mass = np.empty(basis.p)
    stiff = np.empty(basis.p)
    for j, ang in enumerate(dth):
        c = abs(2.0 * np.sin(0.5 * ang))
        mass[j] = 2 * np.pi * h * bessel_j(0, kappa * h * c)
        stiff[j] = (
            np.pi * kappa**2 * h
            * (bessel_j(0, kappa * h * c) * np.cos(ang) + bessel_j(2, kappa * h * c))
        )
    return mass, kappa**2 * mass + stiff


def make_context(basis: PlaneWaveBasis, geom: ElementGeometry) -> PreconditionerContext:
    """Assemble everything any of P1..P7 needs for this basis/element.

    The reference disk shares the element's circumradius.  Disk
    eigendata is the plain DFT of the closed-form first rows: that is
    how a preconditioner is built in practice, and its ~1e-16 noise
    floor on the tiny eigenvalues acts as an implicit regularization
    that the square-root constructions rely on.  (The spectral-analysis
    routines in the circulant module resolve those eigenvalues exactly
    instead; the two uses are deliberately distinct.)
    """
    kappa, p = basis.kappa, basis.p
    h = geom.circumradius
    mass_row, sys_row = _disk_reference_rows(basis, h)
    # the rows are real symmetric, so the spectra are real: drop the
    # DFT's rounding-level imaginary parts before any square root
    mu = circulant_from_row(mass_row).eigenvalues.real
    sys_disk = circulant_from_row(sys_row).eigenvalues.real
    M = assemble_boundary_matrix(basis, geom, "M").data
    S = assemble_boundary_matrix(basis, geom, "S").data
    D = assemble_boundary_matrix(basis, geom, "D").data
    sys_elem = system_matrix(M, S, D, kappa).data
    return PreconditionerContext(
        kappa=kappa,
        p=p,
        disk_mass_eigs=mu,
        disk_system_eigs=sys_disk,
        element_mass=M,
        element_system=sys_elem,
    )


def _inv_sqrt(values: np.ndarray, label: str) -> np.ndarray:
    """Principal (z)^(-1/2); refuses numerically zero eigenvalues."""
    values = np.asarray(values, dtype=complex)
    if np.any(np.abs(values) < _TINY):
        raise SingularOperatorError(
            f"{label}: eigenvalue magnitude below 1e-300; "
            "use the regularized preconditioners P6/P7 instead"
        )
    return 1.0 / np.sqrt(values)


def build_preconditioner(
    spec: PreconditionerSpec, context: PreconditionerContext
) -> DiagonalizedOperator:
    """Build P1..P7 from the context's eigendata."""
    kind, kappa = spec.kind, spec.kappa
    k2 = kappa**2

    if kind == "P1":
        _need(context.disk_mass_eigs, kind, "disk mass eigenvalues")
        d = _inv_sqrt(k2 * context.disk_mass_eigs, kind)
    elif kind == "P2":
        _need(context.disk_system_eigs, kind, "disk system eigenvalues")
        d = _inv_sqrt(context.disk_system_eigs, kind)
    elif kind == "P3":
        _need(context.element_mass, kind, "element mass matrix")
        lam = circ_first_row(context.element_mass).eigenvalues
        d = _inv_sqrt(k2 * lam, kind)
    elif kind == "P4":
        _need(context.element_system, kind, "element system matrix")
        lam = circ_first_row(context.element_system).eigenvalues
        d = _inv_sqrt(lam, kind)
    elif kind == "P5":
        _need(context.element_mass, kind, "element mass matrix")
        # C_best of the Hermitian mass matrix is Hermitian: real spectrum
        lam = circ_best(context.element_mass).eigenvalues.real
        d = _inv_sqrt(k2 * lam, kind)
    elif kind == "P6":
        _need(context.disk_mass_eigs, kind, "disk mass eigenvalues")
        mu = np.asarray(context.disk_mass_eigs, dtype=complex)
        keep = np.abs(mu) > spec.delta
        d = np.ones_like(mu)
        d[keep] = 1.0 / np.sqrt(k2 * mu[keep])
    else:  # P7
        _need(context.disk_mass_eigs, kind, "disk mass eigenvalues")
        mu = np.asarray(context.disk_mass_eigs, dtype=complex)
        keep = np.abs(mu) >= spec.delta
        d = np.zeros_like(mu)
        d[keep] = 1.0 / np.sqrt(k2 * mu[keep])
    return DiagonalizedOperator(d)


def _need(value, kind: str, what: str) -> None:
    if value is None:
        raise ValueError(f"{kind} requires {what} in the context")


def preconditioned_condition(P, A, side: str = "left") -> float:
    """2-norm condition number of P A, P A P, or A P (dense SVD)."""
    A = np.asarray(A, dtype=complex)
    Pm = P.materialize() if hasattr(P, "materialize") else np.asarray(P, dtype=complex)
    if side == "left":
        mat = Pm @ A
    elif side == "two-sided":
        mat = Pm @ A @ Pm
    elif side == "right":
        mat = A @ Pm
    else:
        raise ValueError(f"unknown side {side!r}")
    return float(np.linalg.cond(mat, 2))
