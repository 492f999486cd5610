"""Backend selection for the Schur-complement kernel.

The compiled ``_schur`` extension is used when it was built; otherwise the
numpy implementations in ``_schur_py`` take over. ``BACKEND`` records which
one was picked at import time.
"""
import numpy as np

from . import _schur_py

try:
    from ._schur import schur_sparse as _schur_sparse_c
except ImportError:  # extension not built
    _schur_sparse_c = None

BACKEND = "cython" if _schur_sparse_c is not None else "python"

# average stored entries per constraint above which the dense contraction wins
SPARSE_DENSITY_LIMIT = 0.1


def available_backends():
    return ("cython", "python") if _schur_sparse_c is not None else ("python",)


def _prefer_sparse(prob):
    n, m = prob.n, prob.m
    if m == 0:
        return False
    return prob.sparse.nnz / m <= max(8.0, SPARSE_DENSITY_LIMIT * n * n)


def schur_complement(prob, X, Zinv, backend=None):
    """Assemble ``M[i, j] = tr(A_i X A_j Z^-1)`` for ``prob``'s constraints.

    ``backend`` forces ``"cython"``, ``"python"`` (dense numpy) or
    ``"python-sparse"``; by default sparse constraint sets go to the compiled
    kernel when it exists and everything else to the dense contraction.
    """
    backend = backend or ("cython" if BACKEND == "cython" and _prefer_sparse(prob) else "python")
    if backend == "cython":
        if _schur_sparse_c is None:
            raise RuntimeError("compiled kernel is not available")
        sp = prob.sparse
        return _schur_sparse_c(
            sp.ptr, sp.rows, sp.cols, sp.vals,
            np.ascontiguousarray(X, dtype=float), np.ascontiguousarray(Zinv, dtype=float),
        )
    if backend == "python-sparse":
        sp = prob.sparse
        return _schur_py.schur_sparse(sp.ptr, sp.rows, sp.cols, sp.vals, X, Zinv)
    if backend == "python":
        return _schur_py.schur_dense(prob.A, X, Zinv)
    raise ValueError(f"unknown backend {backend!r}")
