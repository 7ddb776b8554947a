"""Dense direct solve and restarted GMRES with flexible preconditioning.

GMRES follows the classical restarted scheme: Arnoldi with modified
Gram-Schmidt, Givens rotations for the least-squares update, restart
after a fixed cycle length, stop when the (preconditioned) relative
residual reaches the tolerance or the total iteration budget runs out.
A near-zero Arnoldi vector is a happy breakdown: the current iterate is
returned, flagged converged only if it meets the tolerance.

Preconditioned solves compose operators (never triangular solves):
left solves (P A) x = P b, two-sided solves (P A P) y = P b with
x = P y, right solves (A P) y = b with x = P y.  Reports always carry
the true relative residual of the original system next to the
preconditioned one that the iteration monitored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SolveConfig", "SolveReport", "direct_solve", "gmres", "solve_preconditioned"]


@dataclass(frozen=True)
class SolveConfig:
    """Solver settings; maxit of None means one iteration per unknown."""

    method: str = "gmres"
    side: str = "none"
    restart: int = 5
    tol: float = 1e-6
    maxit: int | None = None

    def __post_init__(self):
        if self.method not in ("direct", "gmres"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.side not in ("none", "left", "two-sided", "right"):
            raise ValueError(f"unknown preconditioning side {self.side!r}")
        if self.restart < 1:
            raise ValueError("restart must be >= 1")
        if not 0.0 < self.tol < 1.0:
            raise ValueError("tol must lie in (0, 1)")


@dataclass
class SolveReport:
    """Solution plus residual bookkeeping."""

    x: np.ndarray
    converged: bool
    iterations: int
    residual_history: list = field(default_factory=list)
    preconditioned_relative_residual: float = np.nan
    true_relative_residual: float = np.nan


def _as_operator(A):
    """Accept a dense matrix or a callable v -> A v."""
    if callable(A):
        return A
    mat = np.asarray(A)
    return lambda v: mat @ v


def direct_solve(A, b) -> SolveReport:
    """Partial-pivoted dense solve with recomputed true residual.

    Raises numpy.linalg.LinAlgError on an exactly singular pivot.
    """
    A = np.asarray(A, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if not np.all(np.isfinite(A)) or not np.all(np.isfinite(b)):
        raise ValueError("matrix and right-hand side must be finite")
    x = np.linalg.solve(A, b)
    nb = np.linalg.norm(b)
    res = np.linalg.norm(A @ x - b) / nb if nb > 0 else np.linalg.norm(A @ x)
    return SolveReport(
        x=x,
        converged=True,
        iterations=0,
        residual_history=[res],
        preconditioned_relative_residual=res,
        true_relative_residual=res,
    )


def gmres(A, b, config: SolveConfig = SolveConfig(), x0=None) -> SolveReport:
    """Restarted GMRES for A x = b; A is a matrix or a linear action."""
    op = _as_operator(A)
    b = np.asarray(b, dtype=complex)
    n = b.size
    maxit = config.maxit if config.maxit is not None else n
    restart = min(config.restart, n)

    x = np.zeros(n, dtype=complex) if x0 is None else np.asarray(x0, dtype=complex).copy()
    nb = np.linalg.norm(b)
    if nb == 0.0:
        return SolveReport(x=np.zeros(n, dtype=complex), converged=True, iterations=0,
                           residual_history=[0.0], preconditioned_relative_residual=0.0)

    history: list[float] = []
    total_iters = 0
    converged = False

    while total_iters < maxit and not converged:
        r = b - op(x)
        beta = np.linalg.norm(r)
        if not history:
            history.append(beta / nb)
        if beta / nb <= config.tol:
            converged = True
            break

        m = min(restart, maxit - total_iters)
        V = np.zeros((n, m + 1), dtype=complex)
        H = np.zeros((m + 1, m), dtype=complex)
        cs = np.zeros(m, dtype=complex)
        sn = np.zeros(m, dtype=complex)
        g = np.zeros(m + 1, dtype=complex)
        V[:, 0] = r / beta
        g[0] = beta

        k_used = 0
        breakdown = False
        for k in range(m):
            w = op(V[:, k])
            for j in range(k + 1):                      # modified Gram-Schmidt
                H[j, k] = np.vdot(V[:, j], w)
                w -= H[j, k] * V[:, j]
            H[k + 1, k] = np.linalg.norm(w)

            happy = abs(H[k + 1, k]) < 1e-14 * nb
            if not happy:
                V[:, k + 1] = w / H[k + 1, k]

            for j in range(k):                          # apply past rotations
                t = cs[j] * H[j, k] + sn[j] * H[j + 1, k]
                H[j + 1, k] = -np.conj(sn[j]) * H[j, k] + cs[j] * H[j + 1, k]
                H[j, k] = t
            denom = np.hypot(abs(H[k, k]), abs(H[k + 1, k]))
            if denom == 0.0:
                cs[k], sn[k] = 1.0, 0.0
            else:
                cs[k] = abs(H[k, k]) / denom
                phase = H[k, k] / abs(H[k, k]) if H[k, k] != 0 else 1.0
                sn[k] = phase * np.conj(H[k + 1, k]) / denom
            H[k, k] = cs[k] * H[k, k] + sn[k] * H[k + 1, k]
            H[k + 1, k] = 0.0
            g[k + 1] = -np.conj(sn[k]) * g[k]
            g[k] = cs[k] * g[k]

            total_iters += 1
            k_used = k + 1
            rel = abs(g[k + 1]) / nb
            history.append(rel)
            if rel <= config.tol:
                converged = True
                break
            if happy:
                breakdown = True
                break

        if k_used > 0:
            y = np.linalg.solve(H[:k_used, :k_used], g[:k_used])
            x = x + V[:, :k_used] @ y
        if breakdown:
            break

    final = np.linalg.norm(b - op(x)) / nb
    if final <= config.tol:
        converged = True
    return SolveReport(
        x=x,
        converged=converged,
        iterations=total_iters,
        residual_history=history,
        preconditioned_relative_residual=final,
        true_relative_residual=final,
    )


def _apply_of(P):
    if P is None:
        return lambda v: v
    if hasattr(P, "apply"):
        return P.apply
    return _as_operator(P)


def _materialize(P, n):
    if P is None:
        return np.eye(n, dtype=complex)
    if hasattr(P, "materialize"):
        return P.materialize()
    return np.asarray(P, dtype=complex)


def solve_preconditioned(A, b, P, config: SolveConfig) -> SolveReport:
    """Solve A x = b with P applied per config.side and config.method.

    The reported true_relative_residual always refers to A x = b; the
    preconditioned_relative_residual is the one the iteration (or the
    composed direct solve) actually worked with.
    """
    A = np.asarray(A, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = b.size
    apply_p = _apply_of(P)
    side = config.side

    if config.method == "direct":
        Pm = _materialize(P, n)
        if side == "none":
            rep = direct_solve(A, b)
        elif side == "left":
            rep = direct_solve(Pm @ A, apply_p(b))
        elif side == "two-sided":
            rep = direct_solve(Pm @ A @ Pm, apply_p(b))
            rep.x = apply_p(rep.x)
        else:
            rep = direct_solve(A @ Pm, b)
            rep.x = apply_p(rep.x)
    else:
        if side == "none":
            rep = gmres(A, b, config)
        elif side == "left":
            rep = gmres(lambda v: apply_p(A @ v), apply_p(b), config)
        elif side == "two-sided":
            rep = gmres(lambda v: apply_p(A @ apply_p(v)), apply_p(b), config)
            rep.x = apply_p(rep.x)
        else:
            rep = gmres(lambda v: A @ apply_p(v), b, config)
            rep.x = apply_p(rep.x)

    nb = np.linalg.norm(b)
    rep.true_relative_residual = (
        float(np.linalg.norm(A @ rep.x - b) / nb) if nb > 0 else 0.0
    )
    return rep
