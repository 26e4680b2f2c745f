"""Dynamical-systems solver for ill-conditioned symmetric systems.

The regularized solution is read off the state of the Cauchy problem

    u'(t) = i (A + i a) u(t) + f,    u(0) = 0,

whose trajectory tends to ``i (A + i a)^{-1} f``; ``-i u(T)`` approximates
the minimal-norm solution once ``a`` is small and ``a T`` is large.  The
problem is integrated with classical RK4 using nothing but products ``A x``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _expr
from .errors import DimensionError, ScheduleError, StabilityError, StepLimitError
from .linops import spectral_radius_estimate

# classical RK4 tableau: stage nodes c2..c4 and quadrature weights b1..b4
RK4_NODES = (0.5, 0.5, 1.0)
RK4_WEIGHTS = (1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0)

STABILITY_LIMIT = 2.8
STEP_SAFETY = 2.5
A_FLOOR = 1e-7
DELTA_FLOOR = 1e-14

# (real, imag) -> (-imag, real): multiplication by i in the paired layout
_TIMES_I = np.array([-1.0, 1.0])


@dataclass(frozen=True)
class IntegratorConfig:
    """Step and bookkeeping settings for :func:`rk4_propagate`.

    With ``h=None`` the step is ``min(h_max, 2.5 / sqrt(rho^2 + a^2))``, where
    ``rho`` comes from :func:`~dsmlin.linops.spectral_radius_estimate`.
    ``sample_stride=k`` records the state every ``k`` steps (0 records nothing).
    """

    h: float | None = None
    h_max: float = 0.01
    sample_stride: int = 0
    max_steps: int = 50_000_000
    power_iters: int = 100

    def __post_init__(self):
        if self.h is not None and not self.h > 0:
            raise ValueError("h must be positive")
        if not self.h_max > 0:
            raise ValueError("h_max must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if self.sample_stride < 0:
            raise ValueError("sample_stride must be non-negative")


@dataclass
class Trajectory:
    state: np.ndarray
    steps: int
    h: float
    rho: float
    samples: list = field(default_factory=list)


@dataclass
class SolveReport:
    estimate: np.ndarray
    imag_residue: float
    a_used: float
    t_used: float
    delta_declared: float
    steps_taken: int
    noise_bound: float
    h_used: float
    method: str = "dsm"
    samples: list | None = None

    def summary(self):
        return {
            "method": self.method,
            "a_used": self.a_used,
            "t_used": self.t_used,
            "delta_declared": self.delta_declared,
            "noise_bound": self.noise_bound,
            "imag_residue": self.imag_residue,
            "steps_taken": self.steps_taken,
            "h_used": self.h_used,
        }


def noise_propagation_bound(delta, a):
    """Bound ``delta / a`` on how far data noise of size ``delta`` moves the state."""
    if not a > 0:
        raise ValueError("a must be positive")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    return delta / a


def choose_step(A, a, cfg):
    rho = spectral_radius_estimate(A, cfg.power_iters)
    if cfg.h is not None:
        h = cfg.h
    else:
        h = min(cfg.h_max, STEP_SAFETY / math.hypot(rho, a))
    if h * math.hypot(rho, a) > STABILITY_LIMIT:
        raise StabilityError(
            f"step h={h:g} violates the RK4 stability bound: "
            f"h*sqrt(rho^2 + a^2) = {h * math.hypot(rho, a):.3f} > {STABILITY_LIMIT}"
        )
    return h, rho


def _paired(x, n, name):
    x = np.asarray(x)
    if x.shape != (n,):
        raise DimensionError(f"{name} has shape {x.shape}, expected ({n},)")
    return np.column_stack([x.real, x.imag]).astype(np.float64)


def _unpaired(U):
    return U[:, 0] + 1j * U[:, 1]


def integrate(A, forcing, a, T, cfg=None, u0=None):
    """RK4 for ``u' = i(A + ia)u + forcing`` on ``[0, T]``; forcing may be complex.

    The last step is shortened so the run ends exactly at ``T``.  Samples, if
    requested, are ``(t, state)`` pairs including ``t = 0`` and ``t = T``.
    """
    cfg = cfg or IntegratorConfig()
    if not a > 0:
        raise ValueError("a must be positive")
    if not T > 0:
        raise ValueError("T must be positive")
    n = A.n
    G = _paired(forcing, n, "forcing")
    U = np.zeros((n, 2)) if u0 is None else _paired(u0, n, "u0")
    h, rho = choose_step(A, a, cfg)

    full = int(T // h)
    tail = T - full * h
    if tail <= 1e-9 * h:
        tail = 0.0
    total = full + (1 if tail else 0)
    if total > cfg.max_steps:
        raise StepLimitError(f"T={T:g} with h={h:g} needs {total} steps, above max_steps={cfg.max_steps}")

    M = A.entries
    c2, c3, c4 = RK4_NODES
    b1, b2, b3, b4 = RK4_WEIGHTS

    def rhs(V):
        W = M @ V
        return W[:, ::-1] * _TIMES_I - a * V + G

    def step(V, dt):
        k1 = rhs(V)
        k2 = rhs(V + (c2 * dt) * k1)
        k3 = rhs(V + (c3 * dt) * k2)
        k4 = rhs(V + (c4 * dt) * k3)
        return V + dt * (b1 * k1 + b2 * k2 + b3 * k3 + b4 * k4)

    stride = cfg.sample_stride
    samples = [(0.0, _unpaired(U))] if stride else []
    for k in range(1, full + 1):
        U = step(U, h)
        if stride and k % stride == 0:
            samples.append((k * h, _unpaired(U)))
    if tail:
        U = step(U, tail)
    if stride and (tail or full % stride):
        samples.append((T, _unpaired(U)))
    return Trajectory(_unpaired(U), total, h, rho, samples)


def rk4_propagate(A, f, a, T, cfg=None, u0=None):
    """Integrate the DSM Cauchy problem with real data ``f``.

    Returns ``(u(T), samples)``.
    """
    f = np.asarray(f, dtype=np.float64)
    traj = integrate(A, f, a, T, cfg, u0)
    return traj.state, traj.samples


def _report(w, traj, a, T, delta, method):
    samples = None
    if traj.samples:
        samples = [(t, float(np.linalg.norm(s))) for t, s in traj.samples]
    return SolveReport(
        estimate=w.real.copy(),
        imag_residue=float(np.linalg.norm(w.imag)),
        a_used=a,
        t_used=T,
        delta_declared=delta,
        steps_taken=traj.steps,
        noise_bound=noise_propagation_bound(delta, a),
        h_used=traj.h,
        method=method,
        samples=samples,
    )


def dsm_solve(A, f_delta, a, T, cfg=None, delta=0.0):
    """Solve ``A u = f_delta`` by integrating to ``T`` and returning ``Re(-i u(T))``.

    The imaginary part left after extraction is reported as ``imag_residue``.
    """
    f_delta = np.asarray(f_delta, dtype=np.float64)
    traj = integrate(A, f_delta, a, T, cfg)
    return _report(-1j * traj.state, traj, a, T, delta, "dsm")


def dsm_solve_vform(A, f_delta, a, T, cfg=None, delta=0.0):
    """Variant integrating ``v' = i(A + ia)v - i f_delta``, so that ``v = -i u``."""
    f_delta = np.asarray(f_delta, dtype=np.float64)
    traj = integrate(A, -1j * f_delta, a, T, cfg)
    return _report(traj.state, traj, a, T, delta, "dsm-v")


_A_RULES = ("power", "const", "expr")
_T_RULES = ("log", "const", "expr")


@dataclass(frozen=True)
class Schedule:
    """Rule ``delta -> (a(delta), t(delta))`` for noisy data.

    ``a`` rules: ``power`` with ``(c, p)`` gives ``c * delta**p``; ``const``
    with ``(c,)``; ``expr`` with ``(text,)`` in the variable ``delta``.
    ``t`` rules: ``log`` with ``(c,)`` gives ``c * ln(1/delta) / a``;
    ``const``; ``expr`` in ``delta`` and ``a``.

    ``delta = 0`` means exact data: ``a`` falls back to ``A_FLOOR`` (unless
    the rule is a constant) and ``t`` is evaluated at ``DELTA_FLOOR``.
    """

    a_rule: str = "power"
    a_params: tuple = (1.0, 0.5)
    t_rule: str = "log"
    t_params: tuple = (1.0,)

    def __post_init__(self):
        if self.a_rule not in _A_RULES:
            raise ValueError(f"unknown a rule {self.a_rule!r}")
        if self.t_rule not in _T_RULES:
            raise ValueError(f"unknown t rule {self.t_rule!r}")
        # validate expressions eagerly
        if self.a_rule == "expr":
            _expr.compile_expr(self.a_params[0], ["delta"])
        if self.t_rule == "expr":
            _expr.compile_expr(self.t_params[0], ["delta", "a"])

    @classmethod
    def default(cls):
        return cls()

    @classmethod
    def fixed(cls, a, t):
        return cls("const", (float(a),), "const", (float(t),))

    @classmethod
    def parse(cls, text):
        """Parse ``default`` or ``custom:a=<expr>,t=<expr>``."""
        text = text.strip()
        if text == "default":
            return cls.default()
        if not text.startswith("custom:"):
            raise ValueError(f"schedule must be 'default' or 'custom:a=...,t=...', got {text!r}")
        parts = {}
        for item in _split_top_level(text[len("custom:"):]):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in ("a", "t") or key in parts:
                raise ValueError(f"bad schedule item {item!r}")
            parts[key] = value.strip()
        if set(parts) != {"a", "t"}:
            raise ValueError("custom schedule needs both a=... and t=...")
        return cls("expr", (parts["a"],), "expr", (parts["t"],))

    @property
    def description(self):
        a = {
            "power": lambda c, p: f"a = {c:g}*delta^{p:g}",
            "const": lambda c: f"a = {c:g}",
            "expr": lambda s: f"a = {s}",
        }[self.a_rule](*self.a_params)
        t = {
            "log": lambda c: f"t = {c:g}*ln(1/delta)/a",
            "const": lambda c: f"t = {c:g}",
            "expr": lambda s: f"t = {s}",
        }[self.t_rule](*self.t_params)
        return f"{a}; {t}"

    def _a(self, delta):
        if self.a_rule == "power":
            c, p = self.a_params
            return c * delta**p
        if self.a_rule == "const":
            return self.a_params[0]
        tree = _expr.compile_expr(self.a_params[0], ["delta"])
        return _expr.evaluate(tree, delta=delta)

    def _t(self, delta, a):
        if self.t_rule == "log":
            return self.t_params[0] * math.log(1.0 / delta) / a
        if self.t_rule == "const":
            return self.t_params[0]
        tree = _expr.compile_expr(self.t_params[0], ["delta", "a"])
        return _expr.evaluate(tree, delta=delta, a=a)

    def params(self, delta):
        """Return ``(a, t)`` for noise level ``delta``; raises :class:`ScheduleError`."""
        if delta < 0:
            raise ScheduleError("delta must be non-negative")
        try:
            if delta == 0:
                a = self._a(DELTA_FLOOR) if self.a_rule == "const" else A_FLOOR
                t = self._t(DELTA_FLOOR, a)
            else:
                a = self._a(delta)
                t = self._t(delta, a)
        except (_expr.ExprError, ArithmeticError, ValueError) as exc:
            raise ScheduleError(f"schedule {self.description!r} failed at delta={delta:g}: {exc}") from None
        if not (math.isfinite(a) and a > 0 and math.isfinite(t) and t > 0):
            raise ScheduleError(
                f"schedule {self.description!r} gave a={a!r}, t={t!r} at delta={delta:g}; both must be positive"
            )
        return a, t

    def surrogate_checks(self, delta, rtol=1e-12):
        """Finite-sample stand-ins for the limit conditions on ``(a, t)``."""
        a, t = self.params(delta)
        slack = 1.0 + rtol
        return {
            "a_positive": a > 0,
            "t_positive": t > 0,
            "noise_ratio": delta / a <= math.sqrt(delta) * slack,
            "horizon": a * t * slack >= math.log(1.0 / delta),
        }


def _split_top_level(text):
    items, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            items.append(text[start:i])
            start = i + 1
    items.append(text[start:])
    return items


DEFAULT_SCHEDULE = Schedule()


def dsm_solve_auto(A, f_delta, delta, schedule=DEFAULT_SCHEDULE, cfg=None, vform=False):
    """Pick ``(a, T)`` from ``schedule`` for noise level ``delta`` and solve."""
    a, T = schedule.params(delta)
    solve = dsm_solve_vform if vform else dsm_solve
    return solve(A, f_delta, a, T, cfg, delta=delta)
