"""The graph-embedding feasibility SDP of a framework."""
from __future__ import annotations

import numpy as np

from ..core import length_squared
from .problem import SdpProblem

__all__ = ["build_embedding_sdp", "edge_constraint", "embedding_dim_L"]


def edge_constraint(v, i, j):
    """``A`` with ``<A, X> = X_ii + X_jj - 2 X_ij``."""
    a = np.zeros((v, v))
    a[i, i] = a[j, j] = 1.0
    a[i, j] = a[j, i] = -1.0
    return a


def build_embedding_sdp(f):
    """Feasibility SDP whose solutions are Gram matrices realizing ``f``'s edge lengths.

    One constraint per edge (canonical order) with right-hand side the squared
    length in ``f``; the objective is zero. The variable is the ``v x v``
    Gram matrix with no vertex pinned, so translates of a realization in a
    higher dimension are feasible too.
    """
    v = f.v
    A = [edge_constraint(v, i, j) for i, j in f.graph.edges]
    return SdpProblem(np.zeros((v, v)), A, length_squared(f), check=False)


def embedding_dim_L(f):
    """Dimension of the constraint kernel ``{X : X_ii + X_jj - 2X_ij = 0 on edges}``.

    The edge constraint matrices are linearly independent, so this is
    ``v(v+1)/2 - e``.
    """
    return f.v * (f.v + 1) // 2 - f.e
