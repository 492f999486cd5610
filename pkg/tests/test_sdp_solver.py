import json

import numpy as np
import pytest

from oracles import cvxpy_sdp_value, random_feasible_sdp
from unirigid import core, stress
from unirigid.gram import lifted_gram
from unirigid.samples import line_cycle
from unirigid.sdp import (
    SdpProblem,
    build_embedding_sdp,
    common_kernel,
    embedding_dim_L,
    problem_from_dict,
    problem_to_dict,
    solution_to_dict,
    solve,
)
from unirigid.sdp.problem import DependentConstraintsWarning
from unirigid.sdp.embedding import edge_constraint


def trace_problem():
    return SdpProblem(np.eye(2), [np.diag([1.0, 0.0])], [1.0])


def test_trace_example():
    sol = solve(trace_problem())
    assert sol.status == "optimal"
    np.testing.assert_allclose(sol.X, np.diag([1.0, 0.0]), atol=1e-8)
    np.testing.assert_allclose(sol.y, [1.0], atol=1e-8)
    np.testing.assert_allclose(sol.Z, np.diag([0.0, 1.0]), atol=1e-8)
    assert sol.primal_objective == pytest.approx(1.0, abs=1e-8)


def test_unbounded_example():
    assert solve(SdpProblem(-np.eye(1))).status == "unbounded_suspect"


def test_infeasible_example():
    sol = solve(SdpProblem(np.zeros((1, 1)), [np.eye(1)], [-1.0]))
    assert sol.status == "infeasible_suspect"


def test_line_cycle_embedding():
    f = line_cycle()
    prob = build_embedding_sdp(f)
    sol = solve(prob, gap_tol=1e-10)
    assert sol.status == "optimal"
    w = np.linalg.eigvalsh(sol.X)
    assert int(np.sum(w > 1e-6 * w[-1])) == 2
    # the known configuration gives a feasible point of the same problem
    assert np.abs(prob.apply(lifted_gram(f)) - prob.b).max() < 1e-12


def test_embedding_constraint_examples():
    a = edge_constraint(2, 0, 1)
    np.testing.assert_array_equal(a, [[1, -1], [-1, 1]])
    f = core.Framework.from_arrays([[0.0, 0.0], [3.0, 4.0]], [(0, 1)])
    prob = build_embedding_sdp(f)
    assert prob.m == 1 and prob.b.tolist() == [25.0]
    x = np.array([[2.0, 0.5], [0.5, 7.0]])
    assert prob.apply(x)[0] == pytest.approx(2.0 + 7.0 - 2 * 0.5)
    tri = core.Framework.from_arrays([[0, 0], [1, 0], [0.5, np.sqrt(3) / 2]], [(0, 1), (0, 2), (1, 2)])
    np.testing.assert_allclose(build_embedding_sdp(tri).b, 1.0)
    assert not build_embedding_sdp(tri).C.any()


def test_embedding_translate_is_feasible(rng):
    f = core.Framework(core.trilateration_graph(8, 2, 5), core.sample_pseudo_generic_configuration(8, 2, 5))
    prob = build_embedding_sdp(f)
    q = f.p + rng.standard_normal(2) * 3
    assert np.abs(prob.apply(q @ q.T) - prob.b).max() < 1e-12
    assert embedding_dim_L(f) == prob.dim_L() == 8 * 9 // 2 - f.e


def test_embedding_dual_is_equilibrium_stress():
    for seed in range(5):
        f = core.Framework(core.trilateration_graph(7, 2, seed), core.sample_pseudo_generic_configuration(7, 2, seed))
        sol = solve(build_embedding_sdp(f), gap_tol=1e-10)
        assert sol.optimal
        check = stress.verify_equilibrium_stress(f, sol.Z, rel_tol=1e-6)
        assert check.passed, check


@pytest.mark.parametrize("seed", range(12))
def test_against_cvxpy(seed):
    rng = np.random.default_rng(1000 + seed)
    n, m = int(rng.integers(2, 8)), int(rng.integers(1, 10))
    m = min(m, n * (n + 1) // 2)
    C, A, b = random_feasible_sdp(rng, n, m)
    sol = solve(SdpProblem(C, A, b))
    assert sol.optimal
    ref = cvxpy_sdp_value(C, A, b)
    assert sol.primal_objective == pytest.approx(ref, rel=1e-6, abs=1e-6)


@pytest.mark.parametrize("pc", [True, False])
def test_weak_duality_per_iterate(pc):
    rng = np.random.default_rng(7)
    C, A, b = random_feasible_sdp(rng, 6, 8)
    sol = solve(SdpProblem(C, A, b), predictor_corrector=pc)
    assert sol.optimal
    for h in sol.history:
        # pobj - dobj = <X, Z> + residual terms; X, Z stay PSD so <X, Z> >= 0
        assert h["gap"] >= 0
        diff = h["primal_objective"] - h["dual_objective"]
        assert diff == pytest.approx(h["gap"] + h["residual_term"], abs=1e-8 * (1 + abs(diff)))
        if max(h["primal_residual"], h["dual_residual"]) <= 1e-10:
            assert diff >= -1e-8 * (1 + abs(h["primal_objective"]))


def test_determinism():
    rng = np.random.default_rng(3)
    C, A, b = random_feasible_sdp(rng, 5, 6)
    a, c = solve(SdpProblem(C, A, b)), solve(SdpProblem(C, A, b))
    assert a.iterations == c.iterations
    assert np.array_equal(a.X, c.X) and np.array_equal(a.y, c.y)


def test_dependent_constraints_warn():
    with pytest.warns(DependentConstraintsWarning):
        SdpProblem(np.eye(2), [np.eye(2), 2 * np.eye(2)], [1.0, 2.0])


def test_common_kernel_of_embedding():
    f = line_cycle()
    U = common_kernel(build_embedding_sdp(f))
    assert U.shape == (4, 1)
    np.testing.assert_allclose(np.abs(U[:, 0]), 0.5)


def test_json_round_trip(tmp_path):
    prob = trace_problem()
    data = problem_to_dict(prob)
    assert set(data) == {"n", "C", "constraints"}
    back = problem_from_dict(json.loads(json.dumps(data)))
    assert np.array_equal(back.C, prob.C) and np.array_equal(back.A, prob.A) and np.array_equal(back.b, prob.b)
    out = solution_to_dict(solve(prob))
    assert {"X", "y", "Z", "gap", "status", "iterations"} <= set(out)
