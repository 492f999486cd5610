"""Universal, global and local rigidity tests.

Universal rigidity is certified by a PSD equilibrium stress of rank
``v - d - 1`` whose framework has no conic at infinity. The search for such
a stress maximizes the smallest eigenvalue of the stress restricted to the
complement ``W`` of ``span{1, p^1, ..., p^d}`` over the stress space, with
the trace on ``W`` fixed to one. Interior-point solutions are of maximal rank,
so if no PSD stress of full rank on ``W`` turns up, none exists; for generic
configurations this refutes universal rigidity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .gram import lifted_gram
from .linalg import default_tol, lambda_min, nullspace, numerical_rank, orthonormal_complement, sym
from .sdp import check_complementarity, solve_lmi
from .sdp.embedding import embedding_dim_L
from .stress import (
    StressAssignment,
    StressMatrix,
    assignment_from_matrix,
    rigidity_matrix,
    stress_matrix_from_assignment,
    stress_space_basis,
    trivial_kernel_basis,
    verify_equilibrium_stress,
)

__all__ = [
    "Verdict",
    "Level",
    "ConicCertificate",
    "UrCertificate",
    "HierarchyReport",
    "conic_at_infinity",
    "certify_universal_rigidity",
    "check_certificate",
    "is_locally_rigid_generic",
    "is_globally_rigid_generic",
    "classify_hierarchy",
    "certificate_to_dict",
    "certificate_from_dict",
    "complementary_pair",
]

T_POSITIVE = 1e-7
T_NONPOSITIVE = 1e-9

GENERICITY_CAVEAT = (
    "negative verdict assumes a generic configuration; special (non-generic) "
    "frameworks can be universally rigid without a PSD stress of rank v-d-1"
)
PSEUDO_GENERIC_CAVEAT = "genericity is approximated by the input coordinates and is not verified"


class Verdict(str, Enum):
    UNIVERSALLY_RIGID = "UniversallyRigid"
    NOT_UNIVERSALLY_RIGID_GENERIC = "NotUniversallyRigidGeneric"
    OUT_OF_SCOPE = "OutOfScope"
    INDETERMINATE = "Indeterminate"


class Level(str, Enum):
    FLEXIBLE = "Flexible"
    LOCALLY_RIGID = "LocallyRigid"
    GLOBALLY_RIGID = "GloballyRigid"
    UNIVERSALLY_RIGID = "UniversallyRigid"


@dataclass
class ConicCertificate:
    """Result of the conic-at-infinity test.

    ``Q`` is a unit-norm symmetric ``d x d`` matrix with
    ``(p_u - p_w)^T Q (p_u - p_w) = 0`` on every edge, or ``None`` when the
    edge directions lie on no such conic.
    """

    Q: np.ndarray | None
    residual: float = 0.0
    tolerance: float = 0.0

    @property
    def present(self):
        return self.Q is not None


def _monomial_matrix(f):
    """Rows ``(a_k a_l)`` for ``k <= l``, off-diagonal monomials doubled."""
    d = f.d
    ij = f.graph.edge_array()
    diff = f.p[ij[:, 0]] - f.p[ij[:, 1]] if f.e else np.zeros((0, d))
    ku, lu = np.triu_indices(d)
    weight = np.where(ku == lu, 1.0, 2.0)
    return diff[:, ku] * diff[:, lu] * weight, ku, lu


def conic_at_infinity(f, rel_tol=None):
    rel_tol = default_tol() if rel_tol is None else rel_tol
    d = f.d
    mono, ku, lu = _monomial_matrix(f)
    k = d * (d + 1) // 2
    if f.e == 0:
        ker = np.eye(k)
    else:
        # normalise rows so the test does not depend on edge lengths
        norms = np.linalg.norm(mono, axis=1)
        mono = mono / np.where(norms > 0, norms, 1.0)[:, None]
        ker = nullspace(mono, rel_tol)
    if ker.shape[1] == 0:
        return ConicCertificate(None, 0.0, rel_tol)
    q = ker[:, 0]
    Q = np.zeros((d, d))
    Q[ku, lu] = q
    Q[lu, ku] = q
    Q /= np.linalg.norm(Q)
    ij = f.graph.edge_array()
    diff = f.p[ij[:, 0]] - f.p[ij[:, 1]] if f.e else np.zeros((0, d))
    resid = float(np.max(np.abs(np.einsum("ei,ij,ej->e", diff, Q, diff)), initial=0.0))
    return ConicCertificate(Q, resid, rel_tol)


@dataclass
class UrCertificate:
    verdict: Verdict
    target_rank: int
    achieved_rank: int = 0
    t_star: float = float("nan")
    omega: StressMatrix | None = None
    conic: ConicCertificate | None = None
    lambda_min: float = float("nan")
    normalization: str = "trace"
    tolerances: dict = field(default_factory=dict)
    caveats: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    solver_status: str = ""
    solver_iterations: int = 0

    @property
    def phi(self):
        return None if self.omega is None else assignment_from_matrix(self.omega).phi

    @property
    def conic_present(self):
        return bool(self.conic is not None and self.conic.present)


def _tolerances(rel_tol, gap_tol):
    return {
        "rank": rel_tol,
        "gap": gap_tol,
        "t_positive": T_POSITIVE,
        "t_nonpositive": T_NONPOSITIVE,
    }


def _stress_lmi(stresses, U, gap_tol, max_iter):
    """Maximize lambda_min of ``U^T Omega U`` over the stress span, trace one."""
    Bt = np.array([U.T @ b @ U for b in stresses])
    traces = np.trace(Bt, axis1=1, axis2=2)
    dim_w = U.shape[1]
    opts = dict(gap_tol=gap_tol, max_iter=max_iter)
    if np.linalg.norm(traces) > 1e-12 * max(1.0, np.abs(Bt).max()):
        res = solve_lmi(Bt, np.eye(dim_w), normalization=np.append(traces, 0.0), **opts)
        return res, "trace"
    # every basis stress is traceless on W, so no nonzero PSD combination
    # exists; bound |c| <= 1 through the block [[1, c^T], [c, I]] instead
    k = len(stresses)
    size = dim_w + k + 1
    F = np.zeros((k, size, size))
    F[:, :dim_w, :dim_w] = Bt
    for i in range(k):
        F[i, dim_w, dim_w + 1 + i] = F[i, dim_w + 1 + i, dim_w] = 1.0
    F0 = np.zeros((size, size))
    F0[dim_w:, dim_w:] = np.eye(k + 1)
    G = np.zeros((size, size))
    G[:dim_w, :dim_w] = np.eye(dim_w)
    res = solve_lmi(F, G, F0=F0, **opts)
    return res, "norm"


def certify_universal_rigidity(f, rel_tol=None, gap_tol=1e-10, max_iter=100):
    """Search for a PSD equilibrium stress of rank ``v - d - 1`` and verify it.

    Returns an :class:`UrCertificate`. ``UniversallyRigid`` verdicts carry
    the stress matrix; they hold for any configuration (generic or not).
    ``NotUniversallyRigidGeneric`` is only a valid refutation for generic
    configurations.
    """
    rel_tol = default_tol() if rel_tol is None else rel_tol
    v, d = f.v, f.d
    target = v - d - 1
    cert = UrCertificate(Verdict.INDETERMINATE, target_rank=target, tolerances=_tolerances(rel_tol, gap_tol))
    if v < d + 2:
        cert.verdict = Verdict.OUT_OF_SCOPE
        cert.diagnostics.append(f"needs at least d + 2 = {d + 2} vertices, got {v}")
        return cert

    basis = stress_space_basis(f, rel_tol)
    if basis.shape[1] == 0:
        cert.verdict = Verdict.NOT_UNIVERSALLY_RIGID_GENERIC
        cert.t_star = -np.inf
        cert.caveats = [GENERICITY_CAVEAT, PSEUDO_GENERIC_CAVEAT]
        cert.diagnostics.append("stress space is trivial")
        return cert

    stresses = [stress_matrix_from_assignment(StressAssignment(f.graph, phi)).omega for phi in basis.T]
    U = orthonormal_complement(trivial_kernel_basis(f, rel_tol))
    res, norm_kind = _stress_lmi(stresses, U, gap_tol, max_iter)
    cert.normalization = norm_kind
    cert.solver_status = res.status
    cert.solver_iterations = res.solution.iterations
    if norm_kind == "norm":
        cert.diagnostics.append("basis stresses are traceless on W; used |c| <= 1 normalization")
    if not res.optimal:
        cert.diagnostics.append(f"LMI solver stopped with status {res.status}: {res.solution.message}")
        return cert

    t = res.t
    cert.t_star = t
    omega = sym(np.tensordot(res.c, np.array(stresses), axes=(0, 0)))
    cert.lambda_min = lambda_min(U.T @ omega @ U)

    if t <= T_NONPOSITIVE:
        cert.verdict = Verdict.NOT_UNIVERSALLY_RIGID_GENERIC
        cert.caveats = [GENERICITY_CAVEAT, PSEUDO_GENERIC_CAVEAT]
        cert.achieved_rank = numerical_rank(omega, rel_tol) if t >= -rel_tol else 0
        cert.omega = StressMatrix(f.graph, omega) if t >= -rel_tol else None
        return cert
    if t <= T_POSITIVE:
        cert.diagnostics.append(f"t* = {t:.3e} lies between {T_NONPOSITIVE:g} and {T_POSITIVE:g}")
        cert.achieved_rank = numerical_rank(omega, rel_tol)
        return cert

    cert.omega = StressMatrix(f.graph, omega)
    cert.achieved_rank = numerical_rank(omega, rel_tol)
    cert.conic = conic_at_infinity(f, rel_tol)
    problems = _verify(f, omega, target, cert.conic, rel_tol)
    if problems:
        cert.diagnostics.extend(problems)
        return cert
    cert.verdict = Verdict.UNIVERSALLY_RIGID
    return cert


def _verify(f, omega, target, conic, rel_tol):
    problems = []
    check = verify_equilibrium_stress(f, omega, rel_tol)
    if not check.passed:
        problems.append(f"equilibrium check failed: {', '.join(check.failures)}")
    w = np.linalg.eigvalsh(sym(omega))
    if w[0] < -rel_tol * max(1.0, abs(w[-1])):
        problems.append(f"stress is not PSD (lambda_min = {w[0]:.3e})")
    rank = numerical_rank(omega, rel_tol)
    if rank != target:
        problems.append(f"stress rank {rank} differs from v - d - 1 = {target}")
    if conic.present:
        problems.append("edge directions lie on a conic at infinity")
    return problems


def check_certificate(f, phi, rel_tol=None):
    """Re-verify a universal-rigidity certificate from its edge stress alone.

    Independent of the search: rebuilds the stress matrix from ``phi`` and
    checks equilibrium, positive semidefiniteness, rank ``v - d - 1`` and
    the absence of a conic at infinity. Returns ``(ok, problems)``.
    """
    rel_tol = default_tol() if rel_tol is None else rel_tol
    if f.v < f.d + 2:
        return False, [f"needs at least {f.d + 2} vertices"]
    omega = stress_matrix_from_assignment(StressAssignment(f.graph, phi)).omega
    problems = _verify(f, omega, f.v - f.d - 1, conic_at_infinity(f, rel_tol), rel_tol)
    return not problems, problems


def is_locally_rigid_generic(f, rel_tol=None):
    """Rank test on the rigidity matrix: ``rank R = d v - d(d+1)/2``."""
    rel_tol = default_tol() if rel_tol is None else rel_tol
    v, d = f.v, f.d
    if v < d + 1:
        raise ValueError(f"needs at least d + 1 = {d + 1} vertices")
    r = rigidity_matrix(f)
    if r.size == 0:
        rank = 0
    else:
        s = np.linalg.svd(r, compute_uv=False)
        rank = int(np.sum(s > rel_tol * max(1.0, s[0])))
    return rank == d * v - d * (d + 1) // 2


def is_globally_rigid_generic(f, seed=0, rel_tol=None):
    """Random stress in the stress space has rank ``v - d - 1``.

    For fewer than ``d + 2`` vertices the graph is globally rigid exactly
    when it is complete (and then locally rigid too).
    """
    rel_tol = default_tol() if rel_tol is None else rel_tol
    v, d = f.v, f.d
    if v < d + 2:
        return f.graph.is_complete() and (v < d + 1 or is_locally_rigid_generic(f, rel_tol))
    basis = stress_space_basis(f, rel_tol)
    if basis.shape[1] == 0:
        return False
    coef = np.random.default_rng(seed).standard_normal(basis.shape[1])
    omega = stress_matrix_from_assignment(StressAssignment(f.graph, basis @ coef)).omega
    return numerical_rank(omega, rel_tol) == v - d - 1


@dataclass
class HierarchyReport:
    level: Level
    locally_rigid: bool
    globally_rigid: bool
    universally_rigid: bool
    consistent: bool
    certificate: UrCertificate | None = None
    diagnostics: list = field(default_factory=list)

    def to_dict(self):
        return {
            "level": self.level.value,
            "locally_rigid": self.locally_rigid,
            "globally_rigid": self.globally_rigid,
            "universally_rigid": self.universally_rigid,
            "consistent": self.consistent,
            "certificate": None if self.certificate is None else certificate_to_dict(self.certificate),
            "diagnostics": list(self.diagnostics),
        }


def classify_hierarchy(f, seed=0, rel_tol=None, gap_tol=1e-10, max_iter=100):
    """Finest rigidity level of ``f`` among flexible < local < global < universal.

    Inconsistent test outcomes (for example a universal-rigidity certificate
    on a framework the local test calls flexible) are reported in
    ``diagnostics`` with ``consistent=False``; the level is then the highest
    level whose lower levels all passed.
    """
    rel_tol = default_tol() if rel_tol is None else rel_tol
    v, d = f.v, f.d
    diagnostics = []
    cert = None
    if v < d + 2:
        # simplices and smaller: every pair must be an edge
        complete = f.graph.is_complete()
        lr = gr = ur = complete
        diagnostics.append("fewer than d + 2 vertices; rigid exactly when the graph is complete")
    else:
        lr = is_locally_rigid_generic(f, rel_tol)
        gr = is_globally_rigid_generic(f, seed, rel_tol)
        cert = certify_universal_rigidity(f, rel_tol, gap_tol, max_iter)
        ur = cert.verdict is Verdict.UNIVERSALLY_RIGID
        if cert.verdict is Verdict.INDETERMINATE:
            diagnostics.append("universal-rigidity search was indeterminate")
    consistent = (not ur or gr) and (not gr or lr)
    if not consistent:
        diagnostics.append(f"inconsistent tests: local={lr} global={gr} universal={ur}")
    level = Level.FLEXIBLE
    if lr:
        level = Level.LOCALLY_RIGID
        if gr:
            level = Level.GLOBALLY_RIGID
            if ur:
                level = Level.UNIVERSALLY_RIGID
    return HierarchyReport(level, lr, gr, ur, consistent, cert, diagnostics)


def _stress_fragment(cert):
    om = cert.omega.omega
    return {
        "phi": cert.phi.tolist(),
        "omega_rank": cert.achieved_rank,
        "residual": float(np.max(np.abs(om.sum(axis=1)))),
        "tolerance": cert.tolerances.get("rank"),
    }


def certificate_to_dict(cert):
    phi = cert.phi
    return {
        "verdict": cert.verdict.value,
        "t_star": None if not np.isfinite(cert.t_star) else float(cert.t_star),
        "target_rank": cert.target_rank,
        "achieved_rank": cert.achieved_rank,
        "phi": None if phi is None else phi.tolist(),
        "conic_Q": cert.conic.Q.tolist() if cert.conic_present else None,
        "lambda_min_on_W": None if not np.isfinite(cert.lambda_min) else float(cert.lambda_min),
        "normalization": cert.normalization,
        "tolerances": dict(cert.tolerances),
        "caveats": list(cert.caveats),
        "diagnostics": list(cert.diagnostics),
        "solver": {"status": cert.solver_status, "iterations": cert.solver_iterations},
        "stress": None if cert.omega is None else _stress_fragment(cert),
    }


def certificate_from_dict(data):
    """Minimal view of a stored certificate: verdict and edge stress."""
    verdict = Verdict(data["verdict"])
    phi = data.get("phi")
    return verdict, None if phi is None else np.asarray(phi, dtype=float)


def complementary_pair(f, cert, rel_tol=None):
    """Check the lifted Gram matrix of ``f`` against a certificate's stress.

    The lift appends a unit coordinate so the points' linear span has
    dimension ``d + 1``; together with a rank ``v - d - 1`` stress this is a
    strictly complementary pair for the embedding SDP.
    """
    if cert.omega is None:
        raise ValueError("certificate carries no stress matrix")
    scale = float(np.trace(cert.omega.omega))
    omega = cert.omega.omega / scale if scale > 0 else cert.omega.omega
    return check_complementarity(lifted_gram(f), omega, embedding_dim_L(f), rel_tol)

