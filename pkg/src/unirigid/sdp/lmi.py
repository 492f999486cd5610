"""Maximize ``t`` subject to ``F0 + sum_i c_i F_i - t G`` PSD.

The LMI is the dual side of a standard-form SDP. An optional linear
normalization ``h . (c, t) = 1`` is eliminated by parametrizing
``(c, t) = u0 + N w`` with ``N`` a basis of ``h``'s orthogonal complement.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..linalg import nullspace, sym
from .problem import SdpProblem
from .solver import solve

__all__ = ["LmiResult", "solve_lmi"]


@dataclass(eq=False)
class LmiResult:
    c: np.ndarray
    t: float
    omega: np.ndarray
    """``F0 + sum_i c_i F_i``."""
    slack: np.ndarray
    """``omega - t G``; PSD at a solution."""
    dual: np.ndarray
    """Primal matrix of the underlying SDP; certifies optimality of ``t``."""
    upper_bound: float
    status: str
    solution: object

    @property
    def optimal(self):
        return self.status == "optimal"


def solve_lmi(F, G, F0=None, normalization=None, **solver_opts):
    """Solve ``max t  s.t.  F0 + sum_i c_i F[i] - t G >= 0``.

    Parameters
    ----------
    F
        Sequence of ``k`` symmetric ``n x n`` matrices.
    G
        Symmetric PSD matrix multiplying ``t``.
    F0
        Constant term, zero by default.
    normalization
        Optional length ``k + 1`` vector ``h``; adds ``h . (c, t) = 1``.
    solver_opts
        Passed through to :func:`unirigid.sdp.solve`.
    """
    F = np.array([sym(f) for f in F], dtype=float)
    G = sym(G)
    n = G.shape[0]
    F = F.reshape(-1, n, n)
    k = F.shape[0]
    F0 = np.zeros((n, n)) if F0 is None else sym(F0)
    H = np.concatenate([F, -G[None]], axis=0)

    if normalization is None:
        u0 = np.zeros(k + 1)
        N = np.eye(k + 1)
    else:
        h = np.asarray(normalization, dtype=float).reshape(-1)
        if h.shape[0] != k + 1:
            raise ValueError(f"normalization needs {k + 1} entries")
        hh = float(h @ h)
        if hh <= 1e-24:
            raise ValueError("normalization vector is zero")
        u0 = h / hh
        N = nullspace(h[None, :], 1e-14)

    C = F0 + np.tensordot(u0, H, axes=(0, 0))
    A = -np.tensordot(N.T, H, axes=(1, 0)) if N.shape[1] else np.zeros((0, n, n))
    b = N[k].copy() if N.shape[1] else np.zeros(0)
    sol = solve(SdpProblem(C, A, b, check=False), **solver_opts)

    u = u0 + N @ sol.y
    c, t = u[:k], float(u[k])
    omega = F0 + np.tensordot(c, F, axes=(0, 0)) if k else F0.copy()
    return LmiResult(
        c=c,
        t=t,
        omega=sym(omega),
        slack=sym(omega - t * G),
        dual=sol.X,
        upper_bound=float(sol.primal_objective + u0[k]),
        status=sol.status,
        solution=sol,
    )
