import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsmlin.errors import RangeError
from dsmlin.linops import SymmetricOperator, sym_eigen
from dsmlin.oracle import (
    closed_form_state,
    minimal_norm_solution,
    shifted_solution,
    spectral_error,
    tikhonov_bias,
    transient_bound,
)
from dsmlin.problems import gen_random, gen_spectrum


def diag(*d):
    return SymmetricOperator(np.diag(d))


class TestMinimalNorm:
    def test_diagonal(self):
        sol = minimal_norm_solution(diag(2.0, 1.0), [2.0, 3.0])
        np.testing.assert_allclose(sol.y, [1.0, 3.0])
        assert sol.range_residual == 0.0 and sol.rank == 2 and sol.in_range

    def test_singular_direction_unused(self):
        sol = minimal_norm_solution(diag(1.0, 0.0), [1.0, 0.0])
        np.testing.assert_array_equal(sol.y, [1.0, 0.0])
        assert sol.rank == 1 and sol.in_range

    def test_range_violation_reported(self):
        sol = minimal_norm_solution(diag(1.0, 0.0), [1.0, 1.0])
        assert not sol.in_range
        assert sol.range_residual == pytest.approx(1.0)

    def test_range_violation_strict(self):
        with pytest.raises(RangeError) as info:
            minimal_norm_solution(diag(1.0, 0.0), [1.0, 1.0], strict=True)
        assert info.value.range_residual == pytest.approx(1.0)

    def test_generated_problem(self):
        P = gen_spectrum([1.0, 1e-3, 0.0, -0.5], 3)
        e = sym_eigen(P.A)
        sol = minimal_norm_solution(P.A, P.f, eig=e)
        assert sol.rank == 3 and sol.in_range
        np.testing.assert_allclose(sol.y, P.y_true, atol=1e-10)
        null = e.eigenvectors[:, e.null_mask()]
        assert np.all(np.abs(null.T @ sol.y) <= 1e-10)
        assert np.linalg.norm(P.A.matvec(sol.y) - P.f) <= 1e-8 * max(1.0, np.linalg.norm(P.f))


class TestClosedForm:
    def test_zero_time(self):
        P = gen_random(4, 1)
        np.testing.assert_array_equal(closed_form_state(P.A, P.f, 0.3, 0.0), 0.0)

    def test_scalar_limit(self):
        one = SymmetricOperator([[1.0]])
        lim = 1j * shifted_solution(one, [1.0], 0.1)
        assert lim[0] == pytest.approx(0.0990099009900990 + 0.9900990099009901j, rel=1e-14)
        # at t=60 the transient e^{-6} is still present; value from mpmath
        u = closed_form_state(one, [1.0], 0.1, 60.0)
        assert u[0] == pytest.approx(0.0984955738458 + 0.992511238364j, abs=1e-11)

    def test_null_direction_is_damped_ode(self):
        u = closed_form_state(SymmetricOperator([[0.0]]), [1.0], 1.0, 1.0)
        # A=0 leaves u' = -a u + f, a real decay toward f/a
        assert u[0] == pytest.approx(0.632120558829, abs=1e-12)

    def test_satisfies_ode_by_finite_difference(self):
        P = gen_random(5, 2)
        a, t, dt = 0.2, 3.0, 1e-5
        up = closed_form_state(P.A, P.f, a, t + dt)
        um = closed_form_state(P.A, P.f, a, t - dt)
        u = closed_form_state(P.A, P.f, a, t)
        deriv = (up - um) / (2 * dt)
        rhs = 1j * (P.A.matvec(u) + 1j * a * u) + P.f
        assert np.linalg.norm(deriv - rhs) <= 1e-7

    @pytest.mark.parametrize("a", [0.1, 1.0])
    @pytest.mark.parametrize("t", [1.0, 5.0])
    def test_large_t_gap(self, a, t):
        P = gen_random(8, 4)
        limit = 1j * shifted_solution(P.A, P.f, a)
        gap = np.linalg.norm(closed_form_state(P.A, P.f, a, t) - limit)
        assert gap <= math.exp(-a * t) * np.linalg.norm(limit) * (1 + 1e-12)

    def test_rejects_bad_parameters(self):
        A = SymmetricOperator([[1.0]])
        with pytest.raises(ValueError):
            closed_form_state(A, [1.0], 0.0, 1.0)
        with pytest.raises(ValueError):
            closed_form_state(A, [1.0], 1.0, -1.0)


class TestSpectralError:
    def test_zero_vector(self):
        assert spectral_error(gen_random(3, 0).A, np.zeros(3), 0.1) == 0.0

    def test_scalar(self):
        assert spectral_error(SymmetricOperator([[1.0]]), [1.0], 0.1) == pytest.approx(0.099503719021, rel=1e-11)

    def test_two_term_sum(self):
        assert spectral_error(diag(1.0, 0.0), [1.0, 0.0], 0.5) == pytest.approx(0.4472135955, rel=1e-10)

    @settings(max_examples=25, deadline=None)
    @given(n=st.integers(1, 10), seed=st.integers(0, 2**31), a=st.sampled_from([1e-1, 1e-2, 1e-3]))
    def test_matches_direct_solve(self, n, seed, a):
        P = gen_random(n, seed)
        A, y = P.A, P.y_true
        direct = np.linalg.solve(A.entries + 1j * a * np.eye(n), A.entries @ y) - y
        d = np.linalg.norm(direct)
        assert spectral_error(A, y, a) == pytest.approx(d, rel=1e-10)

    def test_monotone_in_a(self):
        P = gen_random(7, 5)
        e = sym_eigen(P.A)
        vals = [spectral_error(P.A, P.y_true, a, e) for a in np.logspace(-5, 1, 10)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_vanishes_as_a_to_zero(self):
        P = gen_spectrum([1.0, -2e-3, 1e-3, 0.5, -0.7], 8)
        assert spectral_error(P.A, P.y_true, 1e-10) <= 1e-6 * np.linalg.norm(P.y_true)


def test_transient_bound_scalar():
    b = transient_bound(SymmetricOperator([[2.0]]), [2.0], 0.1, 60.0)
    assert b == pytest.approx(math.exp(-6.0) * 2.0 / math.hypot(2.0, 0.1))


def test_tikhonov_bias_scalar():
    assert tikhonov_bias(SymmetricOperator([[1.0]]), [1.0], 0.1) == pytest.approx(0.1 / 1.1)
