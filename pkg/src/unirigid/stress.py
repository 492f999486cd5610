"""Rigidity matrices, equilibrium stresses and the stress-matrix map.

Sign convention
---------------
A stress assignment ``phi`` (one coefficient per edge) maps to the matrix
with ``Omega[u, w] = -phi_uw`` on edges and ``Omega[u, u] = sum_w phi_uw``.
With this orientation ``sum_k p_k^T Omega p_k = <phi, squared lengths>``
exactly, and a nonnegative ``phi`` on a connected graph gives a PSD
(Laplacian-like) matrix. The literal construction that puts ``+phi`` off the
diagonal yields ``-2`` times the same quadratic form; the two differ only by
a nonzero scale, so rank, kernel and the PSD cone (up to orientation) are
unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Graph
from .linalg import default_tol, nullspace, numerical_rank, sym

__all__ = [
    "StressAssignment",
    "StressMatrix",
    "StressCheck",
    "stress_matrix_from_assignment",
    "assignment_from_matrix",
    "rigidity_matrix",
    "stress_space_basis",
    "verify_equilibrium_stress",
    "trivial_kernel_basis",
]


@dataclass(frozen=True, eq=False)
class StressAssignment:
    graph: Graph
    phi: np.ndarray

    def __post_init__(self):
        phi = np.array(self.phi, dtype=float).reshape(-1)
        if phi.shape[0] != self.graph.edge_count:
            raise ValueError(f"expected {self.graph.edge_count} edge coefficients, got {phi.shape[0]}")
        if not np.all(np.isfinite(phi)):
            raise ValueError("stress coefficients must be finite")
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True, eq=False)
class StressMatrix:
    graph: Graph
    omega: np.ndarray

    def __post_init__(self):
        om = sym(self.omega)
        v = self.graph.vertex_count
        if om.shape != (v, v):
            raise ValueError(f"stress matrix must be {v}x{v}")
        om.setflags(write=False)
        object.__setattr__(self, "omega", om)

    @property
    def rank(self):
        return numerical_rank(self.omega)


def stress_matrix_from_assignment(a):
    g = a.graph
    v = g.vertex_count
    om = np.zeros((v, v))
    if g.edge_count:
        ij = g.edge_array()
        om[ij[:, 0], ij[:, 1]] = -a.phi
        om[ij[:, 1], ij[:, 0]] = -a.phi
        np.add.at(om, (ij[:, 0], ij[:, 0]), a.phi)
        np.add.at(om, (ij[:, 1], ij[:, 1]), a.phi)
    return StressMatrix(g, om)


def assignment_from_matrix(s):
    """Read the edge coefficients back off a stress matrix."""
    ij = s.graph.edge_array()
    return StressAssignment(s.graph, -s.omega[ij[:, 0], ij[:, 1]])


def rigidity_matrix(f):
    """The ``e x (d*v)`` rigidity matrix; vertex ``u`` owns columns ``u*d .. u*d+d-1``."""
    d, v = f.d, f.v
    r = np.zeros((f.e, d * v))
    if f.e == 0:
        return r
    ij = f.graph.edge_array()
    diff = f.p[ij[:, 0]] - f.p[ij[:, 1]]
    rows = np.arange(f.e)
    for k in range(d):
        r[rows, ij[:, 0] * d + k] = diff[:, k]
        r[rows, ij[:, 1] * d + k] = -diff[:, k]
    return r


def stress_space_basis(f, rel_tol=None):
    """Orthonormal basis of equilibrium stresses, one column per basis stress.

    Returns an ``(e, s)`` array whose columns are ``phi`` vectors in the
    canonical edge order. Each solves ``R(p)^T phi = 0``, which is the
    equilibrium condition at every vertex.
    """
    rel_tol = default_tol() if rel_tol is None else rel_tol
    if f.e == 0:
        return np.zeros((0, 0))
    return nullspace(rigidity_matrix(f).T, rel_tol)


@dataclass
class StressCheck:
    passed: bool
    symmetry: float
    sparsity: float
    row_sum: float
    equilibrium: float
    tolerance: float
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


def verify_equilibrium_stress(f, omega, rel_tol=None):
    """Check the four equilibrium-stress conditions for ``omega`` on ``f``.

    ``omega`` may be a :class:`StressMatrix` or a plain ``(v, v)`` array.
    Residuals are reported raw; the pass flag compares symmetry, sparsity and
    row sums against ``rel_tol * (1 + |Omega|)`` and the equilibrium residual
    ``max_k |Omega p^k|`` against ``rel_tol * (1 + |Omega| |p|)``.
    """
    rel_tol = default_tol() if rel_tol is None else rel_tol
    om = np.asarray(omega.omega if isinstance(omega, StressMatrix) else omega, dtype=float)
    v = f.v
    if om.shape != (v, v):
        raise ValueError(f"stress matrix shape {om.shape} does not match {v} vertices")
    norm_om = np.linalg.norm(om, 2) if v else 0.0
    norm_p = np.linalg.norm(f.p, 2)

    symmetry = float(np.max(np.abs(om - om.T))) if v else 0.0
    mask = ~np.eye(v, dtype=bool)
    if f.e:
        ij = f.graph.edge_array()
        mask[ij[:, 0], ij[:, 1]] = False
        mask[ij[:, 1], ij[:, 0]] = False
    sparsity = float(np.max(np.abs(om[mask]))) if mask.any() else 0.0
    row_sum = float(np.max(np.abs(om.sum(axis=1))))
    equilibrium = float(np.max(np.linalg.norm(om @ f.p, axis=0)))

    base = rel_tol * (1.0 + norm_om)
    failures = []
    if symmetry > base:
        failures.append("symmetry")
    if sparsity > base:
        failures.append("sparsity")
    if row_sum > base:
        failures.append("row_sum")
    if equilibrium > rel_tol * (1.0 + norm_om * norm_p):
        failures.append("equilibrium")
    return StressCheck(not failures, symmetry, sparsity, row_sum, equilibrium, rel_tol, failures)


def trivial_kernel_basis(f, rel_tol=None):
    """Orthonormal basis (columns) of ``span{1, p^1, ..., p^d}``."""
    rel_tol = default_tol() if rel_tol is None else rel_tol
    ones = np.ones((f.v, 1)) / np.sqrt(f.v)
    centered = f.p - f.p.mean(axis=0)
    if not np.any(centered):
        return ones
    u, s, _ = np.linalg.svd(centered, full_matrices=False)
    keep = s > rel_tol * s[0]
    # centered columns are orthogonal to 1, so the two pieces are already orthogonal
    return np.hstack([ones, u[:, keep]])
