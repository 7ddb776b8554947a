"""Boundary Gram matrices of the plane-wave basis and the system matrix.

Entry convention: the row (test) index is conjugated, i.e.

    mass[m, l]      = int_dK conj(phi_m) phi_l ds
    cross[m, l]     = int_dK conj(grad phi_m . n) phi_l ds
    stiffness[m, l] = int_dK conj(grad phi_m . n) (grad phi_l . n) ds

With this convention the system matrix

    SyS = kappa^2 M + i kappa (S - S*) + D

is literally the Gram matrix of the impedance trace
phi -> grad phi . n + i kappa phi, hence Hermitian positive
semidefinite, and the right-hand side

    f_m = int_dK g (conj(grad phi_m . n) - i kappa conj(phi_m)) ds

makes SyS x = f the impedance least-squares system: boundary data g
that is exactly representable is recovered exactly.  On the disk all
three matrices are real symmetric circulant and the conjugation is
invisible; closed forms (per p x p first row, J denoting Bessel J):

    M[m,l] = 2 pi h J_0(kappa h c)
    S[m,l] = -pi kappa h c J_1(kappa h c)
    D[m,l] = pi kappa^2 h [J_0(kappa h c) cos(2 pi (m-l)/p) + J_2(kappa h c)]

with c = direction_chord(m - l, p).  The sign of S and the single power
of h in S and D are pinned by the literal boundary integral: the normal
derivative is i kappa (d.n) phi (no |x| factor), the arclength element
contributes one h, and for q odd
int e^{iA sin(t-b1)} cos(qt-b2) dt = -2 pi i J_q(A) sin(q b1 - b2).
The quadrature assembly path works on disks too (periodic trapezoid)
and doubles as the independent oracle for these closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import PlaneWaveBasis, direction_chord, eval_matrix
from .geometry import (
    Disk,
    ElementGeometry,
    QuadratureRule,
    default_points_per_edge,
    edge_quadrature,
)
from .special import bessel_j

__all__ = [
    "DenseComplexMatrix",
    "SystemMatrix",
    "UnderResolvedRuleError",
    "assemble_boundary_matrix",
    "disk_cross",
    "disk_mass",
    "disk_stiffness",
    "impedance_rhs",
    "read_matrix_csv",
    "system_matrix",
    "write_matrix_csv",
]


class UnderResolvedRuleError(RuntimeError):
    """Quadrature self-refinement check failed (rule too coarse)."""


@dataclass
class DenseComplexMatrix:
    """Dense p x p complex matrix with structural flags.

    Flags assert structure to 1e-10 * Frobenius norm; `validate`
    checks them.  The circulant flag means entry (m, l) depends only on
    (m - l) mod p.
    """

    data: np.ndarray
    hermitian: bool = False
    real: bool = False
    circulant: bool = False

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)
        if self.data.ndim != 2 or self.data.shape[0] != self.data.shape[1]:
            raise ValueError("matrix must be square")

    @property
    def p(self) -> int:
        return self.data.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.data, dtype=dtype)

    def validate(self) -> None:
        tol = 1e-10 * max(np.linalg.norm(self.data), 1e-300)
        if self.hermitian and np.linalg.norm(self.data - self.data.conj().T) > tol:
            raise ValueError("hermitian flag violated")
        if self.real and np.linalg.norm(self.data.imag) > tol:
            raise ValueError("real flag violated")
        if self.circulant:
            shifted = np.roll(np.roll(self.data, 1, axis=0), 1, axis=1)
            if np.linalg.norm(self.data - shifted) > tol:
                raise ValueError("circulant flag violated")


@dataclass
class SystemMatrix:
    """SyS = kappa^2 M + i kappa (S - S*) + D with assembly provenance."""

    data: np.ndarray
    kappa: float
    geometry: ElementGeometry | None = None
    basis: PlaneWaveBasis | None = None

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)

    @property
    def p(self) -> int:
        return self.data.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.data, dtype=dtype)


def _require_uniform_disk(basis: PlaneWaveBasis) -> None:
    if not basis.is_uniform:
        raise ValueError("disk closed forms require equally spaced directions")


def _circulant_from_first_row(row: np.ndarray) -> np.ndarray:
    p = row.size
    idx = (np.arange(p)[None, :] - np.arange(p)[:, None]) % p
    return row[idx]


def _symmetric_circulant(entry, p: int) -> np.ndarray:
    """Circulant from entry(j) with the mirror row[p-j] = row[j] exact."""
    row = np.empty(p)
    for j in range(p // 2 + 1):
        row[j] = entry(j)
        if j:
            row[p - j] = row[j]
    return _circulant_from_first_row(row)


def disk_mass(basis: PlaneWaveBasis, h: float) -> DenseComplexMatrix:
    """Mass matrix on a disk of radius h: 2 pi h J_0(kappa h chord)."""
    _require_uniform_disk(basis)
    p, kh = basis.p, basis.kappa * h
    data = _symmetric_circulant(
        lambda j: 2 * np.pi * h * bessel_j(0, kh * direction_chord(j, p)), p
    )
    return DenseComplexMatrix(data, hermitian=True, real=True, circulant=True)


def disk_cross(basis: PlaneWaveBasis, h: float) -> DenseComplexMatrix:
    """Cross matrix on a disk: -pi kappa h chord J_1(kappa h chord)."""
    _require_uniform_disk(basis)
    p, kappa = basis.p, basis.kappa
    kh = kappa * h

    def entry(j):
        c = direction_chord(j, p)
        return -np.pi * kappa * h * c * bessel_j(1, kh * c)

    return DenseComplexMatrix(
        _symmetric_circulant(entry, p), hermitian=True, real=True, circulant=True
    )


def disk_stiffness(basis: PlaneWaveBasis, h: float) -> DenseComplexMatrix:
    """Stiffness matrix on a disk.

    pi kappa^2 h [J_0(kappa h chord) cos(2 pi j / p) + J_2(kappa h chord)].
    """
    _require_uniform_disk(basis)
    p, kappa = basis.p, basis.kappa
    kh = kappa * h

    def entry(j):
        c = direction_chord(j, p)
        return (
            np.pi
            * kappa**2
            * h
            * (bessel_j(0, kh * c) * np.cos(2 * np.pi * j / p) + bessel_j(2, kh * c))
        )

    return DenseComplexMatrix(
        _symmetric_circulant(entry, p), hermitian=True, real=True, circulant=True
    )


def _default_rule(basis: PlaneWaveBasis, geom: ElementGeometry) -> QuadratureRule:
    h = geom.circumradius
    return edge_quadrature(geom, default_points_per_edge(basis.kappa, h))


def _raw_assemble(basis: PlaneWaveBasis, rule: QuadratureRule, which: str) -> np.ndarray:
    values = eval_matrix(basis, rule.points)                  # (p, N)
    if which == "M":
        return (values.conj() * rule.weights) @ values.T
    flux = 1j * basis.kappa * (basis.dirs @ rule.normals.T) * values
    if which == "S":
        return (flux.conj() * rule.weights) @ values.T
    if which == "D":
        return (flux.conj() * rule.weights) @ flux.T
    raise ValueError(f"which must be 'M', 'S' or 'D', got {which!r}")


def assemble_boundary_matrix(
    basis: PlaneWaveBasis,
    geom: ElementGeometry,
    which: str,
    rule: QuadratureRule | None = None,
    check: bool = True,
) -> DenseComplexMatrix:
    """Assemble M, S or D on any element by boundary quadrature.

    When `check` is set (the default) the assembly is repeated with a
    doubled rule; a relative Frobenius mismatch above 1e-8 raises
    UnderResolvedRuleError.
    """
    if rule is None:
        rule = _default_rule(basis, geom)
    mat = _raw_assemble(basis, rule, which)
    if check:
        if isinstance(geom, Disk):
            fine = edge_quadrature(geom, 2 * rule.weights.size)
        else:
            ppe = rule.weights.size // geom.n_edges
            fine = edge_quadrature(geom, 2 * ppe)
        mat_fine = _raw_assemble(basis, fine, which)
        scale = max(np.linalg.norm(mat_fine), 1e-300)
        if np.linalg.norm(mat - mat_fine) > 1e-8 * scale:
            raise UnderResolvedRuleError(
                f"quadrature self-refinement mismatch for {which}: "
                f"{np.linalg.norm(mat - mat_fine) / scale:.2e} relative"
            )
    hermitian = which in ("M", "D")
    return DenseComplexMatrix(mat, hermitian=hermitian)


def system_matrix(M, S, D, kappa: float) -> SystemMatrix:
    """SyS = kappa^2 M + i kappa (S - S*) + D (Hermitian PSD Gram)."""
    m, s, d = (np.asarray(a, dtype=complex) for a in (M, S, D))
    if not (m.shape == s.shape == d.shape):
        raise ValueError("M, S, D dimensions do not match")
    sys = kappa**2 * m + 1j * kappa * (s - s.conj().T) + d
    return SystemMatrix(sys, kappa)


def disk_system_matrix(basis: PlaneWaveBasis, h: float) -> SystemMatrix:
    """SyS on the disk: S is real symmetric so SyS = kappa^2 M + D."""
    M = disk_mass(basis, h)
    D = disk_stiffness(basis, h)
    S = disk_cross(basis, h)
    sm = system_matrix(M.data, S.data, D.data, basis.kappa)
    sm.basis = basis
    return sm


def impedance_rhs(
    basis: PlaneWaveBasis,
    geom: ElementGeometry,
    g,
    rule: QuadratureRule | None = None,
    check: bool = True,
) -> np.ndarray:
    """Right-hand side f_m = int g (conj(grad phi_m . n) - i kappa conj(phi_m)) ds.

    `g` is called as g(points, normals) -> complex array.  Exactly
    representable data (g the impedance trace of a basis combination)
    satisfies SyS x = f with the combination's coefficients.
    """
    if rule is None:
        rule = _default_rule(basis, geom)

    def one(r: QuadratureRule) -> np.ndarray:
        values = eval_matrix(basis, r.points)
        flux = 1j * basis.kappa * (basis.dirs @ r.normals.T) * values
        trace = flux + 1j * basis.kappa * values
        gv = np.asarray(g(r.points, r.normals), dtype=complex)
        return (trace.conj() * r.weights) @ gv

    f = one(rule)
    if check:
        if isinstance(geom, Disk):
            fine = edge_quadrature(geom, 2 * rule.weights.size)
        else:
            fine = edge_quadrature(geom, 2 * (rule.weights.size // geom.n_edges))
        f_fine = one(fine)
        scale = max(np.linalg.norm(f_fine), 1e-300)
        if np.linalg.norm(f - f_fine) > 1e-8 * scale:
            raise UnderResolvedRuleError("right-hand-side quadrature under-resolved")
    return f


# ---------------------------------------------------------------------------
# CSV dump: interleaved real/imag parts, row-major
# ---------------------------------------------------------------------------

def write_matrix_csv(matrix, stream) -> None:
    """Write a complex matrix as CSV: per row, re(a0), im(a0), re(a1), ...

    The header documents the layout and dimension.
    """
    a = np.asarray(matrix, dtype=complex)
    p = a.shape[0]
    stream.write(f"# complex matrix, dimension {p}, row-major, interleaved real/imag\n")
    stream.write("# columns: re_0,im_0,re_1,im_1,...\n")
    for row in a:
        parts = []
        for z in row:
            parts.append(f"{z.real:.17g}")
            parts.append(f"{z.imag:.17g}")
        stream.write(",".join(parts) + "\n")


def read_matrix_csv(stream) -> np.ndarray:
    """Inverse of write_matrix_csv."""
    rows = []
    for line in stream:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        vals = [float(tok) for tok in line.split(",")]
        rows.append([complex(vals[2 * i], vals[2 * i + 1]) for i in range(len(vals) // 2)])
    return np.asarray(rows, dtype=complex)
