"""Dense symmetric linear algebra with one shared rank tolerance.

All rank and kernel decisions in the package go through
:func:`numerical_rank`, :func:`nullspace` and :func:`orthonormal_complement`
so that certificates report a single, reproducible threshold. The default
relative tolerance is ``1e-8``; set ``RIGIDITY_DEFAULT_TOL`` to override it.
"""
from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np
from scipy import linalg as sla

__all__ = [
    "DEFAULT_TOL",
    "default_tol",
    "EigenDecomposition",
    "sym",
    "sym_eig",
    "numerical_rank",
    "nullspace",
    "orthonormal_complement",
    "lambda_min",
]

DEFAULT_TOL = 1e-8


def default_tol():
    """The repo-wide relative tolerance, honouring ``RIGIDITY_DEFAULT_TOL``."""
    raw = os.environ.get("RIGIDITY_DEFAULT_TOL")
    if not raw:
        return DEFAULT_TOL
    value = float(raw)
    if not value > 0:
        raise ValueError("RIGIDITY_DEFAULT_TOL must be positive")
    return value


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def sym(a):
    """Symmetrized float copy of a square matrix."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return 0.5 * (a + a.T)


def sym_eig(s):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix.

    Uses the LAPACK divide-and-conquer driver, which is deterministic for a
    fixed input.
    """
    s = sym(s)
    if not np.all(np.isfinite(s)):
        raise ValueError("matrix has non-finite entries")
    if s.shape[0] == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0)))
    w, v = sla.eigh(s, driver="evd")
    return EigenDecomposition(w, v)


def _threshold(values, rel_tol):
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    top = float(np.max(np.abs(values))) if len(values) else 0.0
    return rel_tol * max(1.0, top)


def numerical_rank(s, rel_tol=None):
    """Number of eigenvalues with ``|lam| > rel_tol * max(1, |lam|_max)``."""
    rel_tol = default_tol() if rel_tol is None else rel_tol
    w = sym_eig(s).eigenvalues
    return int(np.sum(np.abs(w) > _threshold(w, rel_tol)))


def lambda_min(s):
    s = sym(s)
    if s.shape[0] == 0:
        return 0.0
    return float(sla.eigh(s, eigvals_only=True, subset_by_index=[0, 0])[0])


def nullspace(a, rel_tol=None):
    """Orthonormal kernel basis of a rectangular matrix, as columns.

    A singular value counts as zero when it is at most
    ``rel_tol * max(1, sigma_max)``.
    """
    rel_tol = default_tol() if rel_tol is None else rel_tol
    a = np.atleast_2d(np.asarray(a, dtype=float))
    m, n = a.shape
    if n == 0:
        return np.zeros((0, 0))
    if m == 0:
        return np.eye(n)
    # tall inputs already give a square V from the economic SVD
    _, s, vt = np.linalg.svd(a, full_matrices=m < n)
    rank = int(np.sum(s > _threshold(s, rel_tol)))
    return vt[rank:].T.copy()


def orthonormal_complement(vectors, size=None, rel_tol=None):
    """Orthonormal basis (columns) of the complement of ``span(vectors)``.

    ``vectors`` holds the spanning vectors as columns of a ``(v, k)`` array.
    Pass ``size`` when ``k == 0`` so the ambient dimension is known.
    """
    rel_tol = default_tol() if rel_tol is None else rel_tol
    vecs = np.asarray(vectors, dtype=float)
    if vecs.ndim == 1:
        vecs = vecs.reshape(-1, 1)
    if vecs.size == 0:
        if size is None:
            size = vecs.shape[0]
        return np.eye(size)
    # kernel of V^T is the orthogonal complement of the column span
    return nullspace(vecs.T, rel_tol)
