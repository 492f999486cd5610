"""Pure numpy Schur-complement assembly (fallback when the extension is absent)."""
import numpy as np


def schur_dense(A, X, Zinv):
    """M[i, j] = tr(A_i X A_j Z^-1) for a stacked ``(m, n, n)`` array ``A``."""
    m = A.shape[0]
    if m == 0:
        return np.zeros((0, 0))
    G = X @ A @ Zinv
    M = A.reshape(m, -1) @ G.transpose(0, 2, 1).reshape(m, -1).T
    return 0.5 * (M + M.T)


def schur_sparse(ptr, rows, cols, vals, X, Zinv):
    """Same contraction as the compiled kernel, vectorised over stored entries.

    Memory grows with ``nnz**2``; callers should only route genuinely sparse
    constraint sets here.
    """
    m = ptr.shape[0] - 1
    if m == 0:
        return np.zeros((0, 0))
    owner = np.repeat(np.arange(m), np.diff(ptr))
    K = (vals[:, None] * vals[None, :]) * X[cols[:, None], rows[None, :]] * Zinv[cols[None, :], rows[:, None]]
    S = np.zeros((m, owner.size))
    S[owner, np.arange(owner.size)] = 1.0
    M = S @ K @ S.T
    return 0.5 * (M + M.T)
