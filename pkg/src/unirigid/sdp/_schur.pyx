# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled Schur-complement assembly for sparse constraint matrices."""
import numpy as np


def schur_sparse(const Py_ssize_t[::1] ptr,
                 const Py_ssize_t[::1] rows,
                 const Py_ssize_t[::1] cols,
                 const double[::1] vals,
                 const double[:, ::1] X,
                 const double[:, ::1] Zinv):
    """M[i, j] = tr(A_i X A_j Z^-1), visiting only stored entries of A_i, A_j."""
    cdef Py_ssize_t m = ptr.shape[0] - 1
    out = np.zeros((m, m), dtype=np.float64)
    cdef double[:, ::1] M = out
    cdef Py_ssize_t i, j, p, q, a, b
    cdef double s, vp
    with nogil:
        for i in range(m):
            for j in range(i, m):
                s = 0.0
                for p in range(ptr[i], ptr[i + 1]):
                    a = rows[p]
                    b = cols[p]
                    vp = vals[p]
                    for q in range(ptr[j], ptr[j + 1]):
                        s = s + vp * vals[q] * X[b, rows[q]] * Zinv[cols[q], a]
                M[i, j] = s
                M[j, i] = s
    return out
