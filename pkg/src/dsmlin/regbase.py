"""Tikhonov baseline solved matrix-free with conjugate gradients."""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

CG_TOL = 1e-12


@dataclass
class TikhonovReport:
    estimate: np.ndarray
    a_used: float
    cg_iterations: int
    cg_residual: float
    converged: bool = True
    method: str = "tikhonov"


def tikhonov_solve(A, f_delta, a, cg_tol=CG_TOL, cg_max=None):
    """Minimize ``||A u - f||^2 + a ||u||^2`` for symmetric ``A``.

    Runs CG on ``(A^2 + a I) u = A f`` applying ``A`` twice per iteration;
    ``A^2`` is never formed.  ``cg_residual`` is the true relative residual
    ``||(A^2 + a) u - A f|| / ||A f||`` of the returned iterate.  If it is
    still above ``cg_tol`` after ``cg_max`` iterations (default ``10 n``) the
    partial iterate comes back with ``converged=False``.
    """
    if not a > 0:
        raise ValueError("a must be positive")
    f_delta = np.asarray(f_delta, dtype=np.float64)
    if f_delta.shape != (A.n,):
        raise DimensionError(f"f_delta has shape {f_delta.shape}, expected ({A.n},)")
    if cg_max is None:
        cg_max = 10 * A.n

    def normal_op(x):
        return A.matvec(A.matvec(x)) + a * x

    b = A.matvec(f_delta)
    bnorm = float(np.linalg.norm(b))
    u = np.zeros(A.n)
    if bnorm == 0.0:
        return TikhonovReport(u, a, 0, 0.0)

    r = b.copy()
    p = r.copy()
    rr = r @ r
    it = 0
    rel = 1.0
    while it < cg_max:
        q = normal_op(p)
        alpha = rr / (p @ q)
        u += alpha * p
        r -= alpha * q
        it += 1
        rr_new = r @ r
        if np.sqrt(rr_new) <= cg_tol * bnorm:
            # confirm against the true residual; restart from it if recursion drifted
            r = b - normal_op(u)
            rr_new = r @ r
            rel = np.sqrt(rr_new) / bnorm
            if rel <= cg_tol:
                break
            p = r.copy()
            rr = rr_new
            continue
        p = r + (rr_new / rr) * p
        rr = rr_new
    rel = float(np.linalg.norm(b - normal_op(u)) / bnorm)
    return TikhonovReport(u, a, it, rel, converged=rel <= cg_tol)
