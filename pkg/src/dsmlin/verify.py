"""Invariant checks run by ``dsmlin verify``.

Each check takes ``(seed, cap)``, where ``cap`` limits matrix sizes, and
returns ``(passed, detail)``.  Checks are deliberately small so the whole
suite runs in seconds.
"""

import math

import numpy as np

from . import oracle
from .dsm import (
    DEFAULT_SCHEDULE,
    IntegratorConfig,
    dsm_solve,
    dsm_solve_vform,
    integrate,
    rk4_propagate,
)
from .linops import SymmetricOperator, condition_number, matvec, spectral_radius_estimate, sym_eigen
from .problems import add_noise, gen_random, gen_spectrum
from .regbase import tikhonov_solve
from .rng import SplitMix64

# 10x the largest err / (h^4 T ||f||) seen on random spectra in [-1, 1]
ORACLE_C = 0.06


def _sizes(cap, default):
    return sorted({min(cap, s) for s in default})


def _random_sym(n, rng):
    m = rng.normal(n * n).reshape(n, n)
    return SymmetricOperator(0.5 * (m + m.T))


def check_eigen_reconstruction(seed, cap):
    rng = SplitMix64(seed)
    worst = 0.0
    for n in _sizes(cap, (1, 2, 5, 12)):
        A = _random_sym(n, rng)
        e = sym_eigen(A)
        rec = (e.eigenvectors * e.eigenvalues) @ e.eigenvectors.T
        worst = max(worst, float(np.max(np.abs(rec - A.entries))))
    return worst <= 1e-9, f"max reconstruction error {worst:.2e}"


def check_eigen_invariants(seed, cap):
    rng = SplitMix64(seed + 1)
    ok, detail = True, []
    for n in _sizes(cap, (3, 12)):
        A = _random_sym(n, rng)
        e = sym_eigen(A)
        orth = float(np.max(np.abs(e.eigenvectors.T @ e.eigenvectors - np.eye(n))))
        lim = 1e-10 * max(1.0, float(np.max(np.abs(e.eigenvalues))))
        ok &= orth <= 1e-10 and e.residual_norm <= lim and bool(np.all(np.diff(e.eigenvalues) >= 0))
        detail.append(f"n={n} orth {orth:.1e} res {e.residual_norm:.1e}")
    return ok, "; ".join(detail)


def check_matvec_linearity(seed, cap):
    rng = SplitMix64(seed + 2)
    n = min(cap, 8)
    A = _random_sym(n, rng)
    x = rng.normal(n) + 1j * rng.normal(n)
    y = rng.normal(n) + 1j * rng.normal(n)
    al, be = 0.7 - 0.2j, -1.3 + 0.5j
    lhs = matvec(A, al * x + be * y)
    rhs = al * matvec(A, x) + be * matvec(A, y)
    rel = float(np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs))
    return rel <= 1e-12, f"relative deviation {rel:.1e}"


def check_condition_scaling(seed, cap):
    P = gen_random(min(cap, 6), seed)
    k = condition_number(P.A)
    worst = 0.0
    for c in (-3.0, 1e-3, 250.0):
        kc = condition_number(P.A.scaled(c))
        worst = max(worst, abs(kc - k) / k)
    return worst <= 1e-12, f"kappa={k:.4g}, max relative change {worst:.1e}"


def check_spectral_radius(seed, cap):
    rng = SplitMix64(seed + 3)
    ok, worst = True, 0.0
    for n in _sizes(cap, (2, 8)):
        A = _random_sym(n, rng)
        rho = float(np.max(np.abs(sym_eigen(A).eigenvalues)))
        est = spectral_radius_estimate(A, 200)
        ok &= rho * (1 - 1e-3) <= est <= 1.1 * rho * (1 + 1e-12)
        worst = max(worst, est / rho)
    return ok, f"max estimate/rho {worst:.4f}"


def check_spectral_error_identity(seed, cap):
    P = gen_random(min(cap, 10), seed)
    A, y = P.A, P.y_true
    eig = sym_eigen(A)
    worst = 0.0
    for a in (1e-1, 1e-2, 1e-3):
        direct = np.linalg.solve(A.entries + 1j * a * np.eye(A.n), A.entries @ y) - y
        d = float(np.linalg.norm(direct))
        worst = max(worst, abs(oracle.spectral_error(A, y, a, eig) - d) / d)
    return worst <= 1e-10, f"max relative mismatch {worst:.1e}"


def check_spectral_error_monotone(seed, cap):
    P = gen_random(min(cap, 8), seed)
    eig = sym_eigen(P.A)
    vals = [oracle.spectral_error(P.A, P.y_true, a, eig) for a in np.logspace(-4, 1, 10)]
    return all(b >= a for a, b in zip(vals, vals[1:])), f"range [{vals[0]:.2e}, {vals[-1]:.2e}]"


def check_bias_vanishes(seed, cap):
    rng = SplitMix64(seed + 4)
    n = min(cap, 6)
    lam = np.sign(rng.uniform(n) - 0.5) * (1e-3 + rng.uniform(n))
    P = gen_spectrum(lam, seed)
    err = oracle.spectral_error(P.A, P.y_true, 1e-8)
    return err <= 1e-6 * np.linalg.norm(P.y_true), f"bias at a=1e-8: {err:.1e}"


def check_closed_form_decay(seed, cap):
    P = gen_random(min(cap, 8), seed)
    eig = sym_eigen(P.A)
    ok, worst = True, 0.0
    for a in (0.1, 1.0):
        limit = 1j * oracle.shifted_solution(P.A, P.f, a, eig)
        # a*t <= 5 keeps the gap well above the roundoff of the subtraction
        for t in (1.0, 5.0):
            gap = np.linalg.norm(oracle.closed_form_state(P.A, P.f, a, t, eig) - limit)
            bound = math.exp(-a * t) * np.linalg.norm(limit) * (1 + 1e-12)
            ok &= gap <= bound
            worst = max(worst, gap / bound)
    return ok, f"max gap/bound {worst:.3f}"


def check_propagator_decay(seed, cap):
    cfg = IntegratorConfig()
    ok, worst = True, 0.0
    for k in range(2):
        P = gen_random(min(cap, 8), seed + k)
        u0 = SplitMix64(seed + 10 + k).normal(P.A.n) + 0j
        zero = np.zeros(P.A.n)
        for a in (0.1, 1.0):
            for t in (1.0, 20.0):
                traj = integrate(P.A, zero, a, t, cfg, u0=u0)
                ratio = np.linalg.norm(traj.state) / np.linalg.norm(u0)
                bound = math.exp(-a * t) * (1 + 10 * traj.h**4 * t)
                ok &= ratio <= bound
                worst = max(worst, ratio / bound)
    return ok, f"max ratio/bound {worst:.6f}"


def check_oracle_equivalence(seed, cap):
    P = gen_random(min(cap, 6), seed)
    eig = sym_eigen(P.A)
    a, T, h = 0.05, 20.0, 0.02
    fnorm = float(np.linalg.norm(P.f))
    exact = oracle.closed_form_state(P.A, P.f, a, T, eig)
    e1 = float(np.linalg.norm(rk4_propagate(P.A, P.f, a, T, IntegratorConfig(h=h))[0] - exact))
    e2 = float(np.linalg.norm(rk4_propagate(P.A, P.f, a, T, IntegratorConfig(h=h / 2))[0] - exact))
    ratio = e1 / e2 if e2 > 0 else math.inf
    ok = e1 <= ORACLE_C * h**4 * T * fnorm and e2 <= ORACLE_C * (h / 2) ** 4 * T * fnorm and 12 <= ratio <= 20
    return ok, f"errors {e1:.2e}, {e2:.2e}, ratio {ratio:.2f}"


def check_noise_bound(seed, cap):
    P = gen_random(min(cap, 6), seed)
    cfg = IntegratorConfig(h_max=0.05)
    ok, worst = True, 0.0
    for k, (delta, a) in enumerate(((1e-2, 0.1), (1e-1, 0.1))):
        T = 30.0
        fd = add_noise(P.f, delta, seed + k).f_delta
        du = rk4_propagate(P.A, fd, a, T, cfg)[0] - rk4_propagate(P.A, P.f, a, T, cfg)[0]
        bound = delta / a * (1 - math.exp(-a * T)) + 1e-8
        ok &= np.linalg.norm(du) <= bound
        worst = max(worst, np.linalg.norm(du) / bound)
    return ok, f"max |du|/bound {worst:.3f}"


def check_triangle_decomposition(seed, cap):
    P = gen_spectrum([1.0, -0.3, 1e-2][: max(1, min(cap, 3))], seed)
    eig = sym_eigen(P.A)
    cfg = IntegratorConfig(h_max=0.25)
    ok, worst = True, 0.0
    for k, delta in enumerate((1e-2, 1e-4)):
        fd = add_noise(P.f, delta, seed + k).f_delta
        a, T = DEFAULT_SCHEDULE.params(delta)
        rep = dsm_solve(P.A, fd, a, T, cfg, delta=delta)
        err = np.linalg.norm(rep.estimate - P.y_true)
        bound = (
            oracle.spectral_error(P.A, P.y_true, a, eig)
            + rep.noise_bound
            + oracle.transient_bound(P.A, P.f, a, T, eig)
            + 1e-7
        )
        ok &= err <= bound
        worst = max(worst, err / bound)
    return ok, f"max error/bound {worst:.3f}"


def check_vform_identity(seed, cap):
    P = gen_random(min(cap, 5), seed)
    cfg = IntegratorConfig(sample_stride=50)
    u = integrate(P.A, P.f, 0.1, 5.0, cfg).samples
    v = integrate(P.A, -1j * P.f, 0.1, 5.0, cfg).samples
    worst = max(
        (np.linalg.norm(vs + 1j * us) / np.linalg.norm(us) for (_, us), (_, vs) in zip(u, v) if np.linalg.norm(us) > 0),
        default=0.0,
    )
    return len(u) == len(v) and worst <= 1e-12, f"{len(u)} samples, max deviation {worst:.1e}"


def check_schedule_surrogates(seed, cap):
    bad = [d for d in np.logspace(-1, -12, 12) if not all(DEFAULT_SCHEDULE.surrogate_checks(float(d)).values())]
    return not bad, "all deltas 1e-1..1e-12 pass" if not bad else f"failing deltas {bad}"


def check_tikhonov_residual(seed, cap):
    P = gen_random(min(cap, 10), seed)
    fd = add_noise(P.f, 1e-3, seed).f_delta
    ok, worst = True, 0.0
    for a in (1e-1, 1e-3):
        rep = tikhonov_solve(P.A, fd, a)
        b = P.A.matvec(fd)
        res = np.linalg.norm(P.A.matvec(P.A.matvec(rep.estimate)) + a * rep.estimate - b) / np.linalg.norm(b)
        ok &= rep.converged and res <= 1e-12
        worst = max(worst, res)
    return ok, f"max relative residual {worst:.1e}"


def check_tikhonov_optimality(seed, cap):
    P = gen_random(min(cap, 8), seed)
    fd = add_noise(P.f, 1e-2, seed).f_delta
    a = 1e-2
    u = tikhonov_solve(P.A, fd, a).estimate

    def F(x):
        r = P.A.matvec(x) - fd
        return r @ r + a * (x @ x)

    rng = SplitMix64(seed + 5)
    base = F(u)
    worst = min(F(u + 10.0 ** -(k % 6) * rng.normal(P.A.n)) - base for k in range(20))
    return worst >= -1e-12 * max(1.0, base), f"min F(u+w)-F(u) {worst:.2e}"


def check_tikhonov_dsm_agreement(seed, cap):
    P = gen_spectrum([1.0, -0.6, 0.4, 0.25][: max(1, min(cap, 4))], seed)
    cfg = IntegratorConfig(h_max=0.2)
    diffs = []
    for a in (1e-1, 1e-2, 1e-3):
        T = math.log(1e10) / a
        d = dsm_solve(P.A, P.f, a, T, cfg).estimate
        t = tikhonov_solve(P.A, P.f, a).estimate
        diffs.append(float(np.linalg.norm(d - t)))
    ok = all(b <= 1.5 * a for a, b in zip(diffs, diffs[1:]))
    return ok, "differences " + ", ".join(f"{d:.2e}" for d in diffs)


def check_problem_invariants(seed, cap):
    ok = True
    for lam in ([1.0, 1e-3, 0.0], [2.0, -1.0, 1e-6, 0.0, 0.0][: max(1, min(cap, 5))]):
        P = gen_spectrum(lam, seed)
        e = sym_eigen(P.A)
        null = e.eigenvectors[:, e.null_mask()]
        ok &= np.linalg.norm(P.A.matvec(P.y_true) - P.f) <= 1e-12 * max(1.0, np.linalg.norm(P.f))
        ok &= bool(np.all(np.abs(null.T @ P.y_true) <= 1e-10))
    return ok, "residual and null-orthogonality hold"


def check_spectrum_roundtrip(seed, cap):
    rng = SplitMix64(seed + 6)
    n = min(cap, 10)
    lam = 2.0 * rng.uniform(n) - 1.0
    P = gen_spectrum(lam, seed)
    err = float(np.max(np.abs(sym_eigen(P.A).eigenvalues - np.sort(lam))))
    return err <= 1e-9, f"max eigenvalue error {err:.1e}"


def check_determinism(seed, cap):
    n = min(cap, 6)
    p1, p2 = gen_random(n, seed), gen_random(n, seed)
    same = np.array_equal(p1.A.entries, p2.A.entries) and np.array_equal(p1.y_true, p2.y_true)
    n1, n2 = add_noise(p1.f, 1e-3, seed), add_noise(p2.f, 1e-3, seed)
    same &= np.array_equal(n1.f_delta, n2.f_delta)
    return bool(same), "identical problems and noise"


def check_noise_norm(seed, cap):
    P = gen_random(min(cap, 7), seed)
    worst, ok = 0.0, True
    # f + e rounds onto the grid of f, so the subtraction form is ulp-limited
    grid = 4 * P.A.n * np.finfo(float).eps * float(np.max(np.abs(P.f)))
    for delta in (1e-1, 1e-3, 1e-8):
        nz = add_noise(P.f, delta, seed)
        rel = abs(np.linalg.norm(nz.noise) - delta) / delta
        ok &= rel <= 1e-14 and abs(np.linalg.norm(nz.f_delta - P.f) - delta) <= grid
        worst = max(worst, rel)
    return ok, f"max relative noise-norm error {worst:.1e}"


def check_vform_solve(seed, cap):
    P = gen_random(min(cap, 4), seed)
    r1 = dsm_solve(P.A, P.f, 0.1, 10.0)
    r2 = dsm_solve_vform(P.A, P.f, 0.1, 10.0)
    dev = float(np.max(np.abs(r1.estimate - r2.estimate)))
    return dev == 0.0, f"estimate deviation {dev:.1e}"


CHECKS = [
    ("linops: eigen reconstruction", check_eigen_reconstruction),
    ("linops: eigen orthonormality/residual", check_eigen_invariants),
    ("linops: matvec linearity", check_matvec_linearity),
    ("linops: condition number scale invariance", check_condition_scaling),
    ("linops: spectral radius estimate", check_spectral_radius),
    ("oracle: spectral error identity", check_spectral_error_identity),
    ("oracle: spectral error monotone in a", check_spectral_error_monotone),
    ("oracle: bias vanishes as a -> 0", check_bias_vanishes),
    ("oracle: closed form large-t decay", check_closed_form_decay),
    ("dsm: propagator decay", check_propagator_decay),
    ("dsm: oracle equivalence and 4th order", check_oracle_equivalence),
    ("dsm: noise propagation bound", check_noise_bound),
    ("dsm: triangle decomposition", check_triangle_decomposition),
    ("dsm: v-form trajectory identity", check_vform_identity),
    ("dsm: v-form solve agreement", check_vform_solve),
    ("dsm: default schedule surrogates", check_schedule_surrogates),
    ("regbase: normal-equation residual", check_tikhonov_residual),
    ("regbase: optimality", check_tikhonov_optimality),
    ("regbase: agreement with dsm", check_tikhonov_dsm_agreement),
    ("problems: generated invariants", check_problem_invariants),
    ("problems: spectrum round trip", check_spectrum_roundtrip),
    ("problems: determinism", check_determinism),
    ("problems: exact noise norm", check_noise_norm),
]


def run_checks(seed=0, cap=12):
    results = []
    for name, fn in CHECKS:
        try:
            passed, detail = fn(seed, cap)
        except Exception as exc:  # a crashing check is a failing check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(passed), detail))
    return results
