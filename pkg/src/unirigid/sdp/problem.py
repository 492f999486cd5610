"""Standard-form SDP data and solutions.

Primal:  minimize <C, X>  subject to  <A_i, X> = b_i,  X PSD.
Dual:    maximize b^T y   subject to  Z = C - sum_i y_i A_i,  Z PSD.

The affine space ``L + b`` of the primal is ``{X : <A_i, X> = b_i}``, so the
constraint matrices span ``L``'s orthogonal complement and the objective
matrix plays the role of the cost functional.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..linalg import sym

__all__ = [
    "SdpProblem",
    "SdpSolution",
    "SparseConstraints",
    "problem_to_dict",
    "problem_from_dict",
    "solution_to_dict",
    "load_problem",
]

STATUSES = ("optimal", "infeasible_suspect", "unbounded_suspect", "max_iter")


class DependentConstraintsWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SparseConstraints:
    """Constraint matrices in a CSR-like triplet layout.

    Entries of ``A_i`` live in ``rows[ptr[i]:ptr[i+1]]``,
    ``cols[ptr[i]:ptr[i+1]]`` and ``vals[ptr[i]:ptr[i+1]]``. Both triangles
    of each symmetric matrix are stored.
    """

    ptr: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    @classmethod
    def from_dense(cls, a):
        ptr = [0]
        rows, cols, vals = [], [], []
        for mat in a:
            r, c = np.nonzero(mat)
            rows.append(r)
            cols.append(c)
            vals.append(mat[r, c])
            ptr.append(ptr[-1] + r.size)
        cat = lambda parts, dt: np.ascontiguousarray(np.concatenate(parts) if parts else np.zeros(0), dtype=dt)
        return cls(
            np.asarray(ptr, dtype=np.intp),
            cat(rows, np.intp),
            cat(cols, np.intp),
            cat(vals, float),
        )

    @property
    def nnz(self):
        return int(self.vals.size)


@dataclass(frozen=True, eq=False)
class SdpProblem:
    n: int
    A: np.ndarray
    b: np.ndarray
    C: np.ndarray

    def __init__(self, C, A=(), b=(), check=True):
        C = sym(C)
        n = C.shape[0]
        A = np.array([sym(a) for a in A], dtype=float).reshape(-1, n, n)
        b = np.asarray(b, dtype=float).reshape(-1)
        if A.shape[0] != b.shape[0]:
            raise ValueError(f"{A.shape[0]} constraint matrices but {b.shape[0]} right-hand sides")
        for arr in (A, b, C):
            if not np.all(np.isfinite(arr)):
                raise ValueError("problem data must be finite")
            arr.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "_sparse", SparseConstraints.from_dense(A))
        if check and A.shape[0] > 1:
            rank = np.linalg.matrix_rank(A.reshape(A.shape[0], -1))
            if rank < A.shape[0]:
                warnings.warn(
                    f"constraint matrices are linearly dependent (rank {rank} < {A.shape[0]})",
                    DependentConstraintsWarning,
                    stacklevel=2,
                )

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def sparse(self):
        return self._sparse

    @property
    def constraints(self):
        return list(zip(self.A, self.b))

    def apply(self, X):
        """``(<A_1, X>, ..., <A_m, X>)``."""
        return np.tensordot(self.A, X, axes=([1, 2], [0, 1])) if self.m else np.zeros(0)

    def adjoint(self, y):
        """``sum_i y_i A_i``."""
        if not self.m:
            return np.zeros((self.n, self.n))
        return np.tensordot(y, self.A, axes=(0, 0))

    def dim_L(self):
        """Dimension of ``{X symmetric : <A_i, X> = 0 for all i}``."""
        n = self.n
        rank = np.linalg.matrix_rank(self.A.reshape(self.m, -1)) if self.m else 0
        return n * (n + 1) // 2 - int(rank)


@dataclass(eq=False)
class SdpSolution:
    X: np.ndarray
    y: np.ndarray
    Z: np.ndarray
    status: str
    iterations: int
    primal_objective: float
    dual_objective: float
    primal_residual: float
    dual_residual: float
    backend: str = "python"
    message: str = ""
    history: list = field(default_factory=list, repr=False)

    @property
    def gap(self):
        return float(np.sum(self.X * self.Z))

    @property
    def optimal(self):
        return self.status == "optimal"


def _matrix(obj, name):
    arr = np.array(obj, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    return arr


def problem_to_dict(prob):
    return {
        "n": prob.n,
        "C": prob.C.tolist(),
        "constraints": [{"A": a.tolist(), "b": float(bi)} for a, bi in zip(prob.A, prob.b)],
    }


def problem_from_dict(data):
    try:
        n = int(data["n"])
        C = _matrix(data.get("C", np.zeros((n, n))), "C")
        cons = data.get("constraints", [])
        A = [_matrix(c["A"], "A") for c in cons]
        b = [float(c["b"]) for c in cons]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed SDP document: {exc}") from None
    if C.shape != (n, n) or any(a.shape != (n, n) for a in A):
        raise ValueError(f"all matrices must be {n}x{n}")
    return SdpProblem(C, A, b)


def load_problem(path):
    with open(path) as fh:
        return problem_from_dict(json.load(fh))


def solution_to_dict(sol):
    return {
        "status": sol.status,
        "iterations": sol.iterations,
        "gap": sol.gap,
        "primal_objective": sol.primal_objective,
        "dual_objective": sol.dual_objective,
        "primal_residual": sol.primal_residual,
        "dual_residual": sol.dual_residual,
        "X": sol.X.tolist(),
        "y": sol.y.tolist(),
        "Z": sol.Z.tolist(),
        "backend": sol.backend,
        "message": sol.message,
    }
