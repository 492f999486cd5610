import subprocess
import sys

import numpy as np
import pytest

from oracles import random_psd
from unirigid import core
from unirigid.sdp import BACKEND, SdpProblem, build_embedding_sdp, solve
from unirigid.sdp.kernels import available_backends, schur_complement


def _reference(prob, X, Zinv):
    m = prob.m
    M = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            M[i, j] = np.trace(prob.A[i] @ X @ prob.A[j] @ Zinv)
    return (M + M.T) / 2


def _cases():
    rng = np.random.default_rng(4)
    f = core.Framework(core.trilateration_graph(9, 2, 1), core.sample_pseudo_generic_configuration(9, 2, 1))
    yield build_embedding_sdp(f)
    A = [(lambda s: s + s.T)(rng.standard_normal((6, 6))) for _ in range(5)]
    yield SdpProblem(np.eye(6), A, np.ones(5))


@pytest.mark.parametrize("backend", ["python", "python-sparse", *(["cython"] if "cython" in available_backends() else [])])
def test_backends_match_reference(backend):
    rng = np.random.default_rng(9)
    for prob in _cases():
        X = random_psd(rng, prob.n, shift=0.1)
        Zinv = random_psd(rng, prob.n, shift=0.1)
        M = schur_complement(prob, X, Zinv, backend=backend)
        ref = _reference(prob, X, Zinv)
        np.testing.assert_allclose(M, ref, rtol=1e-11, atol=1e-11 * np.abs(ref).max())


def test_unknown_backend():
    with pytest.raises(ValueError):
        schur_complement(SdpProblem(np.eye(2), [np.eye(2)], [1.0]), np.eye(2), np.eye(2), backend="fortran")


def test_backend_flag():
    assert BACKEND in ("cython", "python")
    assert BACKEND in available_backends()


def test_solutions_agree_across_backends():
    f = core.Framework(core.trilateration_graph(8, 2, 2), core.sample_pseudo_generic_configuration(8, 2, 2))
    prob = build_embedding_sdp(f)
    sols = [solve(prob, backend=b) for b in available_backends()]
    for s in sols:
        assert s.optimal
    for s in sols[1:]:
        np.testing.assert_allclose(s.X, sols[0].X, atol=1e-7)


def test_python_fallback_without_extension():
    code = (
        "import sys; sys.modules['unirigid.sdp._schur'] = None\n"
        "from unirigid.sdp import BACKEND, build_embedding_sdp, solve\n"
        "from unirigid.samples import line_cycle\n"
        "print(BACKEND, solve(build_embedding_sdp(line_cycle())).status)\n"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True).stdout
    assert out.split() == ["python", "optimal"]
