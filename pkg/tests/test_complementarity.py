import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_feasible_sdp, random_psd
from unirigid.sdp import (
    SdpProblem,
    beta_coefficient,
    check_complementarity,
    combine_duals,
    recombined_dual,
    solve,
)


def test_examples():
    r = check_complementarity(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    assert r.complementary and r.strictly_complementary and r.rank_sum == 2
    r = check_complementarity(np.diag([1.0, 0.0]), np.zeros((2, 2)))
    assert r.complementary and not r.strictly_complementary
    r = check_complementarity(np.eye(3), np.eye(3))
    assert not r.complementary and r.inner_product == 3


def test_errors():
    with pytest.raises(ValueError):
        check_complementarity(np.eye(2), np.eye(3))
    with pytest.raises(ValueError):
        check_complementarity(np.diag([1.0, -1.0]), np.eye(2))


def test_dimension_diagnostics():
    r = check_complementarity(np.diag([1.0, 0.0, 0.0]), np.diag([0.0, 1.0, 1.0]), dim_L=3)
    assert r.bound_lo == 3
    assert r.generic_data_bound and r.generic_solution_bound
    d = r.to_dict()
    assert d["bound_lo"] == 3 and len(d["eigenvalues_x"]) == 3


def test_combine_examples():
    rng = np.random.default_rng(0)
    om2 = random_psd(rng, 3)
    om, l1, l2 = combine_duals(np.eye(3), 0.0, om2)
    assert (l1, l2) == (1.0, 1.0)
    np.testing.assert_allclose(om, np.eye(3) + om2)
    X = np.diag([1.0, 0.0])
    om, l1, l2 = combine_duals(np.diag([0.0, 1.0]), 0.0, np.zeros((2, 2)), X=X)
    np.testing.assert_allclose(om, np.diag([0.0, l1]))
    assert check_complementarity(X, om).strictly_complementary


def test_combine_rejects_noncomplementary():
    with pytest.raises(ValueError):
        combine_duals(np.eye(2), 0.0, np.eye(2), X=np.eye(2))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.floats(-20, 20), st.integers(2, 7))
def test_combine_properties(seed, mu1, n):
    rng = np.random.default_rng(seed)
    r1, r2 = int(rng.integers(0, n + 1)), int(rng.integers(0, n + 1))
    om1, om2 = random_psd(rng, n, r1), random_psd(rng, n, r2)
    om, l1, l2 = combine_duals(om1, mu1, om2)
    assert l1 > 0 and l2 > 0
    assert l1 * mu1 + l2 == pytest.approx(1.0)
    w = np.linalg.eigvalsh(om)
    assert w[0] >= -1e-10 * max(1.0, w[-1])
    rank = int(np.sum(w > 1e-9 * max(1.0, w[-1])))
    assert rank >= max(r1, r2)


def test_beta_coefficient():
    A = [np.diag([1.0, 0.0])]
    beta = np.diag([0.0, 1.0])
    assert beta_coefficient(2 * A[0] - 3 * beta, A, beta) == pytest.approx(-3.0)
    with pytest.raises(ValueError):
        beta_coefficient(A[0], A, A[0])


def test_recombined_dual_is_complementary():
    rng = np.random.default_rng(11)
    C, A, b = random_feasible_sdp(rng, 5, 4)
    prob = SdpProblem(C, A, b)
    sol = solve(prob, gap_tol=1e-10)
    assert sol.optimal
    om, om1, mu1 = recombined_dual(prob, sol)
    tol = 1e-6
    r = check_complementarity(sol.X, om, prob.dim_L(), tol)
    assert r.complementary
    assert r.rank_omega >= check_complementarity(sol.X, om1, None, tol).rank_omega
    assert r.rank_sum <= prob.n
