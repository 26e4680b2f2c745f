"""Dense symmetric operators, eigendecomposition and conditioning."""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, EigenConvergenceError, SymmetryError

SYMMETRY_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
JACOBI_TOL = 1e-14
NULL_TOL = 1e-12


class ZeroOperatorWarning(UserWarning):
    pass


class SymmetricOperator:
    """Immutable real symmetric matrix exposing matrix-vector products.

    Input within ``SYMMETRY_TOL * max|M_ij|`` of symmetric is symmetrized as
    ``(M + M.T) / 2``; anything further off raises :class:`SymmetryError`.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries):
        m = np.array(entries, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise SymmetryError("matrix has non-finite entries")
        scale = np.max(np.abs(m))
        asym = np.max(np.abs(m - m.T))
        if asym > SYMMETRY_TOL * scale:
            raise SymmetryError(
                f"matrix is not symmetric: max |M - M^T| = {asym:.3e} "
                f"exceeds {SYMMETRY_TOL:g} * max|M| = {SYMMETRY_TOL * scale:.3e}"
            )
        if asym > 0:
            m = 0.5 * (m + m.T)
        m.setflags(write=False)
        self._entries = m

    @property
    def n(self):
        return self._entries.shape[0]

    @property
    def entries(self):
        """Read-only ``(n, n)`` view of the matrix."""
        return self._entries

    def matvec(self, x):
        return matvec(self, x)

    def __matmul__(self, x):
        return matvec(self, x)

    def scaled(self, c):
        return SymmetricOperator(c * self._entries)

    def __eq__(self, other):
        if not isinstance(other, SymmetricOperator):
            return NotImplemented
        return np.array_equal(self._entries, other._entries)

    def __hash__(self):
        return hash(self._entries.tobytes())

    def __repr__(self):
        return f"SymmetricOperator(n={self.n})"


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual_norm: float
    sweeps: int = 0

    def coefficients(self, x):
        """Coordinates of ``x`` in the eigenbasis, ``V.T @ x``."""
        return self.eigenvectors.T @ x

    def synthesize(self, c):
        return self.eigenvectors @ c

    def null_mask(self, null_tol=NULL_TOL):
        lam = np.abs(self.eigenvalues)
        return lam <= null_tol * lam.max()


def matvec(A, x):
    """Apply ``A`` to a real or complex vector (real and imaginary parts separately)."""
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] != A.n:
        raise DimensionError(f"vector of shape {x.shape} does not match operator of size {A.n}")
    if np.iscomplexobj(x):
        return A.entries @ x.real + 1j * (A.entries @ x.imag)
    return A.entries @ x


def _round_robin(n):
    """Disjoint index pairs for each round of a cyclic tournament ordering.

    Every unordered pair appears exactly once over the ``m - 1`` rounds,
    where ``m`` is ``n`` rounded up to even (the padding index is dropped).
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for k in range(m // 2):
            i, j = players[k], players[m - 1 - k]
            if i < n and j < n:
                p.append(min(i, j))
                q.append(max(i, j))
        rounds.append((np.array(p, dtype=np.intp), np.array(q, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def sym_eigen(A, max_sweeps=JACOBI_MAX_SWEEPS, tol=JACOBI_TOL):
    """Full eigendecomposition by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in a round-robin order
    whose rounds consist of disjoint pairs; the rotations of a round commute
    and are applied together.  Iteration stops when the off-diagonal
    Frobenius norm falls to ``tol * ||A||_F``.

    Returns eigenvalues in ascending order with matching orthonormal
    eigenvector columns.
    """
    a = np.array(A.entries, dtype=np.float64)
    n = a.shape[0]
    v = np.eye(n)
    fro = np.linalg.norm(a)
    threshold = tol * fro
    rounds = _round_robin(n)
    sweeps = 0

    def off(m):
        return float(np.linalg.norm(m - np.diag(np.diag(m))))

    while off(a) > threshold:
        if sweeps >= max_sweeps:
            raise EigenConvergenceError(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off(a):.3e}, threshold {threshold:.3e})"
            )
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            with np.errstate(over="ignore"):
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (np.abs(theta) + np.hypot(1.0, theta))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # columns then rows: a <- J^T a J with J = [[c, s], [-s, c]] on (p, q)
            ap, aq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * ap - s * aq
            a[:, q] = s * ap + c * aq
            ap, aq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * ap - s[:, None] * aq
            a[q, :] = s[:, None] * ap + c[:, None] * aq
            a[p, q] = 0.0
            a[q, p] = 0.0
            vp, vq = v[:, p].copy(), v[:, q].copy()
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq
        sweeps += 1

    lam = np.diag(a).copy()
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    v = v[:, order]
    residual = float(np.max(np.linalg.norm(A.entries @ v - v * lam, axis=0)))
    lam.setflags(write=False)
    v.setflags(write=False)
    return EigenDecomposition(lam, v, residual, sweeps)


def condition_number(A, null_tol=NULL_TOL, eig=None):
    """Spectral condition number ``max|lambda| / min|lambda|``.

    Returns ``math.inf`` when some eigenvalue satisfies
    ``|lambda| <= null_tol * max|lambda|`` (nontrivial null space).  For the
    zero operator a :class:`ZeroOperatorWarning` is issued as well.
    """
    if null_tol < 0:
        raise ValueError("null_tol must be non-negative")
    eig = eig if eig is not None else sym_eigen(A)
    lam = np.abs(eig.eigenvalues)
    top = lam.max()
    if top == 0.0:
        warnings.warn("zero operator: condition number is infinite", ZeroOperatorWarning, stacklevel=2)
        return math.inf
    low = lam.min()
    if low <= null_tol * top:
        return math.inf
    return float(top / low)


def _start_vector(n):
    x = 1.0 + np.sqrt(np.arange(1, n + 1) / (n + 1.0))
    return x / np.linalg.norm(x)


def spectral_radius_estimate(A, iters=100):
    """Safety-padded spectral radius estimate from power iteration.

    Runs ``iters`` power steps from a fixed start vector, multiplies the
    final ``||A x||`` by 1.1, and floors the result at the largest absolute
    row sum over ``n``.
    """
    if iters < 1:
        raise ValueError("iters must be at least 1")
    m = A.entries
    floor = float(np.max(np.sum(np.abs(m), axis=1))) / A.n
    x = _start_vector(A.n)
    est = 0.0
    for _ in range(iters):
        y = m @ x
        est = float(np.linalg.norm(y))
        if est == 0.0:
            break
        x = y / est
    return max(1.1 * est, floor)
