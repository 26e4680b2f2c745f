import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsmlin.errors import DimensionError
from dsmlin.linops import SymmetricOperator
from dsmlin.problems import gen_random, gen_spectrum
from dsmlin.regbase import tikhonov_solve


def test_scalar():
    rep = tikhonov_solve(SymmetricOperator([[1.0]]), [1.0], 0.1)
    assert rep.estimate[0] == pytest.approx(1 / 1.1, rel=1e-13)
    assert rep.converged and rep.method == "tikhonov"


def test_singular_diagonal():
    rep = tikhonov_solve(SymmetricOperator(np.diag([1.0, 0.0])), [1.0, 0.0], 0.01)
    np.testing.assert_allclose(rep.estimate, [1 / 1.01, 0.0], rtol=1e-13, atol=1e-15)


def test_zero_rhs():
    rep = tikhonov_solve(gen_random(4, 0).A, np.zeros(4), 0.1)
    assert np.array_equal(rep.estimate, np.zeros(4)) and rep.cg_iterations == 0


def test_rejects_bad_input():
    A = SymmetricOperator(np.eye(2))
    with pytest.raises(ValueError):
        tikhonov_solve(A, [1.0, 0.0], 0.0)
    with pytest.raises(DimensionError):
        tikhonov_solve(A, [1.0], 0.1)


def test_iteration_cap_reports_unconverged():
    P = gen_spectrum(np.linspace(1e-3, 1.0, 20), 1)
    rep = tikhonov_solve(P.A, P.f, 1e-6, cg_max=2)
    assert not rep.converged and rep.cg_iterations == 2


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 2**31), a=st.sampled_from([1.0, 1e-2, 1e-4]))
def test_residual_and_direct_solve(n, seed, a):
    P = gen_random(n, seed)
    rep = tikhonov_solve(P.A, P.f, a)
    M = P.A.entries
    b = M @ P.f
    assert rep.converged and rep.cg_residual <= 1e-12
    assert np.linalg.norm(M @ (M @ rep.estimate) + a * rep.estimate - b) <= 1e-12 * np.linalg.norm(b)
    direct = np.linalg.solve(M @ M + a * np.eye(n), b)
    assert np.linalg.norm(rep.estimate - direct) <= 1e-8 * max(1.0, np.linalg.norm(direct))


def test_functional_optimality():
    P = gen_random(6, 9)
    a = 0.05
    u = tikhonov_solve(P.A, P.f, a).estimate

    def F(x):
        return np.linalg.norm(P.A.matvec(x) - P.f) ** 2 + a * np.linalg.norm(x) ** 2

    base = F(u)
    r = np.random.default_rng(3)
    for k in range(20):
        d = r.standard_normal(6)
        assert F(u + 10.0 ** -(k % 6) * d) >= base - 1e-14
