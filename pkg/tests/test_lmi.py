import numpy as np
import pytest

from oracles import cvxpy_lmi_value
from unirigid import core, stress
from unirigid.core import Configuration, Framework
from unirigid.linalg import orthonormal_complement
from unirigid.sdp import solve_lmi
from unirigid.stress import StressAssignment, stress_matrix_from_assignment


def test_identity_span():
    res = solve_lmi([np.eye(2)], np.eye(2), normalization=[2.0, 0.0])
    assert res.optimal
    assert res.t == pytest.approx(0.5, abs=1e-8)
    np.testing.assert_allclose(res.omega, np.eye(2) / 2, atol=1e-8)
    assert np.linalg.eigvalsh(res.slack)[0] >= -1e-8


def test_indefinite_span():
    res = solve_lmi([np.diag([1.0, -1.0])], np.eye(2), normalization=[1.0, 0.0])
    assert res.t <= 1e-8


def test_projected_k4_stress():
    f = Framework(core.complete_graph(4), Configuration([[0, 0], [1, 0], [0, 1], [0.3, 0.4]]))
    basis = stress.stress_space_basis(f)
    U = orthonormal_complement(stress.trivial_kernel_basis(f))
    B = [U.T @ stress_matrix_from_assignment(StressAssignment(f.graph, phi)).omega @ U for phi in basis.T]
    res = solve_lmi(B, np.eye(1), normalization=[np.trace(B[0]), 0.0])
    assert res.optimal and res.t > 0
    # trace one on a 1-dimensional space forces t = 1
    assert res.t == pytest.approx(1.0, abs=1e-8)


def test_rejects_bad_normalization():
    with pytest.raises(ValueError):
        solve_lmi([np.eye(2)], np.eye(2), normalization=[1.0])
    with pytest.raises(ValueError):
        solve_lmi([np.eye(2)], np.eye(2), normalization=[0.0, 0.0])


@pytest.mark.parametrize("seed", range(6))
def test_against_cvxpy(seed):
    rng = np.random.default_rng(50 + seed)
    n, k = 4, 3
    F = [(lambda s: (s + s.T) / 2)(rng.standard_normal((n, n))) for _ in range(k)]
    F[0] = F[0] + 3 * np.eye(n)
    h = np.append([np.trace(x) for x in F], 0.0)
    res = solve_lmi(F, np.eye(n), normalization=h)
    assert res.optimal
    assert res.t == pytest.approx(cvxpy_lmi_value(F, np.eye(n), h), abs=1e-6)
    assert res.upper_bound >= res.t - 1e-8
    assert np.linalg.eigvalsh(res.slack)[0] >= -1e-8
