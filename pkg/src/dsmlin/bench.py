"""Noise-level sweeps comparing DSM, Tikhonov and the eigenbasis solution.

Each row records the error against the known solution next to the three
terms that bound it (bias at shift ``a``, propagated noise, undecayed
transient).  A row whose error exceeds the sum plus ``INTEGRATOR_TOL`` is
flagged ``FAIL``; a row whose solver raised is flagged ``FAILED``.
"""

import csv
import io
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import oracle
from .dsm import DEFAULT_SCHEDULE, IntegratorConfig, dsm_solve, dsm_solve_vform
from .errors import DsmlinError
from .linops import sym_eigen
from .problems import add_noise
from .regbase import tikhonov_solve
from .rng import mix64

COLUMNS = (
    "delta",
    "a",
    "t",
    "method",
    "error_vs_ytrue",
    "noise_bound",
    "spectral_err",
    "transient_bound",
    "wall_time_s",
    "steps_or_iters",
    "flag",
)
METHODS = ("dsm", "dsm-v", "tikhonov", "oracle")
INTEGRATOR_TOL = 1e-7


def noise_seed(seed, index):
    """Seed for the noise draw of the ``index``-th noise level."""
    return int(mix64((int(seed) + index + 1) & ((1 << 64) - 1)))


def _row(delta, method, a="", t="", error="", noise="", spectral="", transient="", wall=0.0, steps="", flag="OK"):
    return {
        "delta": delta,
        "a": a,
        "t": t,
        "method": method,
        "error_vs_ytrue": error,
        "noise_bound": noise,
        "spectral_err": spectral,
        "transient_bound": transient,
        "wall_time_s": wall,
        "steps_or_iters": steps,
        "flag": flag,
    }


def run_row(problem, delta, method, f_delta, schedule=DEFAULT_SCHEDULE, cfg=None, eig=None):
    A, y, f = problem.A, problem.y_true, problem.f
    eig = eig if eig is not None else sym_eigen(A)
    start = time.perf_counter()
    try:
        if method in ("dsm", "dsm-v"):
            a, t = schedule.params(delta)
            solve = dsm_solve if method == "dsm" else dsm_solve_vform
            rep = solve(A, f_delta, a, t, cfg, delta=delta)
            est, steps = rep.estimate, rep.steps_taken
            noise = rep.noise_bound
            spectral = oracle.spectral_error(A, y, a, eig)
            transient = oracle.transient_bound(A, f, a, t, eig)
            ok = True
        elif method == "tikhonov":
            a, _ = schedule.params(delta)
            t = ""
            rep = tikhonov_solve(A, f_delta, a)
            est, steps = rep.estimate, rep.cg_iterations
            noise = oracle.tikhonov_noise_bound(delta, a)
            spectral = oracle.tikhonov_bias(A, y, a, eig)
            transient = 0.0
            ok = rep.converged
        elif method == "oracle":
            a = t = ""
            sol = oracle.minimal_norm_solution(A, f_delta, eig=eig)
            est, steps = sol.y, 0
            lam = np.abs(eig.eigenvalues)[~eig.null_mask()]
            noise = delta / float(lam.min())
            spectral = 0.0
            transient = 0.0
            ok = True
        else:
            raise ValueError(f"unknown method {method!r}")
    except (DsmlinError, ValueError, ArithmeticError) as exc:
        return _row(delta, method, wall=time.perf_counter() - start, flag=f"FAILED: {exc}".replace("\n", " "))
    wall = time.perf_counter() - start
    error = float(np.linalg.norm(est - y))
    within = error <= spectral + noise + transient + INTEGRATOR_TOL
    flag = "OK" if ok and within else "FAIL"
    return _row(delta, method, a, t, error, noise, spectral, transient, wall, steps, flag)


def _task(args):
    return run_row(*args)


def run_sweep(problem, deltas, methods, schedule=DEFAULT_SCHEDULE, cfg=None, seed=0, jobs=1):
    """Rows for every ``(delta, method)`` pair, ordered by delta then method."""
    cfg = cfg or IntegratorConfig()
    eig = sym_eigen(problem.A)
    tasks = []
    for k, delta in enumerate(deltas):
        f_delta = add_noise(problem.f, delta, noise_seed(seed, k)).f_delta
        for method in methods:
            tasks.append((problem, delta, method, f_delta, schedule, cfg, eig))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_task, tasks))
    return [_task(t) for t in tasks]


def _fmt(value):
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    return str(value)


def format_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([
            f"{row['wall_time_s']:.6f}" if col == "wall_time_s" else _fmt(row[col]) for col in COLUMNS
        ])
    return buf.getvalue()


def write_atomic(text, path):
    """Write ``text`` to ``path`` through a temporary file and ``os.replace``."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def failed(rows):
    return [r for r in rows if r["flag"] != "OK"]
