"""Ill-conditioned test problems with known minimal-norm solutions."""

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .linops import NULL_TOL, SymmetricOperator, condition_number, sym_eigen
from .rng import SplitMix64

HILBERT_MAX = 512


@dataclass(frozen=True)
class Problem:
    A: SymmetricOperator
    y_true: np.ndarray
    f: np.ndarray
    label: str
    condition: float


@dataclass(frozen=True)
class NoisyRhs:
    f_delta: np.ndarray
    delta: float
    seed: int
    noise: np.ndarray


def gen_hilbert(n):
    """Hilbert matrix ``H[i, j] = 1 / (i + j + 1)`` (zero-based)."""
    if not 1 <= n <= HILBERT_MAX:
        raise InputError(f"hilbert size must be in [1, {HILBERT_MAX}], got {n}")
    i = np.arange(n)
    return SymmetricOperator(1.0 / (i[:, None] + i[None, :] + 1.0))


def random_orthogonal(n, rng):
    """Haar-distributed orthogonal matrix from the QR of a Gaussian matrix."""
    q, r = np.linalg.qr(rng.normal(n * n).reshape(n, n))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def _unit_off_null(g, null_basis):
    if null_basis.shape[1]:
        g = g - null_basis @ (null_basis.T @ g)
    norm = np.linalg.norm(g)
    if norm <= 1e-12:
        return None
    return g / norm


def gen_spectrum(eigenvalues, seed, label=None):
    """Problem with ``A = Q diag(eigenvalues) Q^T`` for a seeded random orthogonal ``Q``.

    ``y_true`` is a seeded unit vector with its null-space component removed,
    and ``f = A y_true``.
    """
    lam = np.asarray(eigenvalues, dtype=np.float64).ravel()
    if lam.size == 0:
        raise InputError("eigenvalue list is empty")
    n = lam.size
    root = SplitMix64(seed)
    q = random_orthogonal(n, root.split())
    A = SymmetricOperator((q * lam) @ q.T)
    top = np.max(np.abs(lam))
    null = np.abs(lam) <= NULL_TOL * top
    y = _unit_off_null(root.split().normal(n), q[:, null])
    if y is None:
        raise InputError("degenerate spectrum: no range direction left for y_true")
    label = label or "spectrum(" + ",".join(f"{v:g}" for v in lam) + ")"
    return Problem(A, y, A.matvec(y), label, condition_number(A))


def gen_random(n, seed, scale=1.0):
    """Problem whose eigenvalues are drawn uniformly from ``[-scale, scale]``."""
    rng = SplitMix64(seed)
    lam = scale * (2.0 * rng.uniform(n) - 1.0)
    return gen_spectrum(lam, int(rng.next_u64(1)[0]), label=f"random(n={n},seed={seed})")


def problem_from_operator(A, seed, label="operator"):
    """Wrap an operator with a seeded minimal-norm solution ``y_true``."""
    eig = sym_eigen(A)
    y = _unit_off_null(SplitMix64(seed).split().normal(A.n), eig.eigenvectors[:, eig.null_mask()])
    if y is None:
        raise InputError("zero operator has no range direction for y_true")
    return Problem(A, y, A.matvec(y), label, condition_number(A, eig=eig))


def add_noise(f, delta, seed):
    """Return ``f + e`` with ``e`` a seeded Gaussian direction scaled to ``||e|| = delta``.

    ``e`` is kept on the result as ``noise``; ``f_delta - f`` recovers it only
    up to the rounding of ``f + e``.
    """
    if delta < 0:
        raise InputError("delta must be non-negative")
    f = np.asarray(f, dtype=np.float64)
    if delta == 0:
        return NoisyRhs(f.copy(), 0.0, seed, np.zeros_like(f))
    e = SplitMix64(seed).normal(f.size)
    e *= delta / np.linalg.norm(e)
    return NoisyRhs(f + e, float(delta), seed, e)


def parse_generator(text):
    """Split a generator spec (``hilbert:N``, ``spectrum:l1,l2,...``, ``random:N``)."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind not in ("hilbert", "spectrum", "random") or not rest:
        raise InputError(f"generator must be hilbert:N, spectrum:l1,l2,... or random:N, got {text!r}")
    try:
        if kind == "spectrum":
            return kind, [float(v) for v in rest.split(",")]
        return kind, int(rest)
    except ValueError:
        raise InputError(f"bad generator arguments in {text!r}") from None


def build_problem(text, seed):
    kind, arg = parse_generator(text)
    if kind == "hilbert":
        return problem_from_operator(gen_hilbert(arg), seed, label=f"hilbert({arg})")
    if kind == "spectrum":
        return gen_spectrum(arg, seed)
    if arg < 1:
        raise InputError("random generator needs N >= 1")
    return gen_random(arg, seed)
