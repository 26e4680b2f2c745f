"""Stable solutions of ill-conditioned symmetric linear systems by integrating
a damped Cauchy problem, with an eigenbasis oracle and a Tikhonov baseline."""

from .dsm import (
    DEFAULT_SCHEDULE,
    IntegratorConfig,
    Schedule,
    SolveReport,
    dsm_solve,
    dsm_solve_auto,
    dsm_solve_vform,
    noise_propagation_bound,
    rk4_propagate,
)
from .errors import DsmlinError, InputError, SolverError
from .linops import EigenDecomposition, SymmetricOperator, condition_number, matvec, spectral_radius_estimate, sym_eigen
from .oracle import closed_form_state, minimal_norm_solution, spectral_error
from .problems import Problem, add_noise, gen_hilbert, gen_spectrum
from .regbase import TikhonovReport, tikhonov_solve

__version__ = "0.1.0"
