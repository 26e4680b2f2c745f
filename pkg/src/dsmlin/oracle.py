"""Eigenbasis ground truth for the DSM solver.

Every function here works in the eigenbasis of ``A`` and is meant for
verification: the matrix-free solve path in :mod:`dsmlin.dsm` never calls
into this module.  Functions accept an optional precomputed
:class:`~dsmlin.linops.EigenDecomposition` to avoid repeated Jacobi runs.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, RangeError
from .linops import NULL_TOL, sym_eigen

RANGE_TOL = 1e-8


@dataclass(frozen=True)
class MinimalNormSolution:
    y: np.ndarray
    range_residual: float
    rank: int
    in_range: bool


def _check(A, x, name):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (A.n,):
        raise DimensionError(f"{name} has shape {x.shape}, expected ({A.n},)")
    return x


def _eig(A, eig):
    return eig if eig is not None else sym_eigen(A)


def minimal_norm_solution(A, f, null_tol=NULL_TOL, eig=None, strict=False):
    """Minimal-norm solution ``y`` of ``A y = f`` via the eigenbasis.

    Eigencomponents with ``|lambda| <= null_tol * max|lambda|`` are treated
    as null and dropped, so ``y`` is orthogonal to the numerical null space.
    When ``f`` has a null-space component larger than
    ``RANGE_TOL * max(1, ||f||)`` the result is flagged ``in_range=False``
    (or :class:`RangeError` is raised with ``strict=True``); ``y`` is then the
    minimal-norm solution for the projection of ``f`` onto the range.
    """
    f = _check(A, f, "f")
    eig = _eig(A, eig)
    lam = eig.eigenvalues
    null = eig.null_mask(null_tol)
    coef = eig.coefficients(f)
    inv = np.zeros_like(coef)
    inv[~null] = coef[~null] / lam[~null]
    y = eig.synthesize(inv)
    range_residual = float(np.linalg.norm(coef[null]))
    in_range = range_residual <= RANGE_TOL * max(1.0, float(np.linalg.norm(f)))
    if strict and not in_range:
        raise RangeError(
            f"f is not in the range of A: null-space component has norm {range_residual:.3e}",
            range_residual,
        )
    return MinimalNormSolution(y, range_residual, int(np.count_nonzero(~null)), in_range)


def closed_form_state(A, f, a, t, eig=None):
    """Exact DSM trajectory ``u_a(t)`` for ``u' = i(A + ia)u + f``, ``u(0) = 0``.

    Per eigencomponent ``u_j = i / (lambda_j + i a) * (1 - exp((i lambda_j - a) t)) * f_j``.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    if t < 0:
        raise ValueError("t must be non-negative")
    f = _check(A, f, "f")
    eig = _eig(A, eig)
    lam = eig.eigenvalues
    # -expm1 keeps the small-t limit accurate
    growth = -np.expm1((1j * lam - a) * t)
    coef = 1j / (lam + 1j * a) * growth * eig.coefficients(f)
    return eig.synthesize(coef)


def shifted_solution(A, f, a, eig=None):
    """``(A + ia)^{-1} f``, the ``t -> infinity`` limit of ``-i u_a(t)``."""
    f = _check(A, f, "f")
    eig = _eig(A, eig)
    return eig.synthesize(eig.coefficients(f) / (eig.eigenvalues + 1j * a))


def spectral_error(A, y, a, eig=None):
    """Bias ``||(A + ia)^{-1} A y - y||`` as the finite spectral sum

    ``sqrt(sum_j a^2 / (a^2 + lambda_j^2) * <v_j, y>^2)``.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    y = _check(A, y, "y")
    eig = _eig(A, eig)
    lam = eig.eigenvalues
    weight = a * a / (a * a + lam * lam)
    return math.sqrt(float(np.sum(weight * eig.coefficients(y) ** 2)))


def transient_bound(A, f, a, t, eig=None):
    """``exp(-a t) * ||(A + ia)^{-1} f||``, the undecayed part of the trajectory."""
    return math.exp(-a * t) * float(np.linalg.norm(shifted_solution(A, f, a, eig)))


def tikhonov_bias(A, y, a, eig=None):
    """``||(A^2 + a)^{-1} A^2 y - y||``: the Tikhonov counterpart of :func:`spectral_error`."""
    if a <= 0:
        raise ValueError("a must be positive")
    y = _check(A, y, "y")
    eig = _eig(A, eig)
    lam2 = eig.eigenvalues ** 2
    return float(np.linalg.norm(a / (lam2 + a) * eig.coefficients(y)))


def tikhonov_noise_bound(delta, a):
    """Worst-case noise amplification ``max_s s / (s^2 + a) * delta = delta / (2 sqrt(a))``."""
    return delta / (2.0 * math.sqrt(a))
