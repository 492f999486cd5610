"""Infeasible-start primal-dual path-following method for small dense SDPs.

Each iteration takes a Newton step toward the central path point with
``XZ = sigma * mu * I``, using the symmetrized ``X dZ Z^-1`` (HKM) direction
and a fraction-to-boundary rule on both step lengths. Iterates stay in the
interior of the cone, so the limit of the primal iterates lies in the
relative interior of the optimal face: among all optimal solutions it has
the largest rank. Certification relies on that.

Infeasibility and unboundedness are heuristics: the run stops once the dual
(resp. primal) objective passes a divergence threshold.
"""
from __future__ import annotations

import numpy as np
from scipy import linalg as sla

from ..linalg import sym
from . import kernels
from .problem import SdpSolution

__all__ = ["solve", "SolverBreakdown"]


class SolverBreakdown(ArithmeticError):
    """An iterate left the interior of the PSD cone through rounding."""


def _chol(S):
    try:
        return sla.cho_factor(S, lower=True)
    except sla.LinAlgError:
        raise SolverBreakdown("iterate lost positive definiteness") from None


def _max_step(factor, dS):
    L = np.tril(factor[0])
    W = sla.solve_triangular(L, dS, lower=True)
    W = sla.solve_triangular(L, W.T, lower=True)
    lam = sla.eigh(sym(W), eigvals_only=True, subset_by_index=[0, 0])[0]
    return np.inf if lam >= 0 else -1.0 / lam


def _solve_schur(M, rhs):
    try:
        return sla.cho_solve(sla.cho_factor(M, lower=True), rhs)
    except sla.LinAlgError:
        return np.linalg.lstsq(M, rhs, rcond=None)[0]


def common_kernel(prob, rel_tol=1e-10):
    """Orthonormal basis of vectors annihilated by ``C`` and every ``A_i``.

    Along such a direction ``u`` no dual slack can be positive definite,
    and adding ``u u^T`` to a primal point changes neither the constraints
    nor the objective.
    """
    from ..linalg import nullspace

    stacked = np.vstack([prob.C, *prob.A]) if prob.m else prob.C
    if not np.any(stacked):
        return np.eye(prob.n)
    return nullspace(stacked, rel_tol)


def solve(
    prob,
    gap_tol=1e-9,
    max_iter=100,
    feas_tol=1e-9,
    predictor_corrector=True,
    sigma=0.1,
    step_fraction=0.95,
    divergence=1e8,
    backend=None,
    reduce=True,
):
    """Solve ``prob`` and return an :class:`SdpSolution`.

    Parameters
    ----------
    gap_tol
        Stop once ``<X, Z> <= gap_tol * (1 + |<C, X>|)`` and both relative
        residuals are below ``feas_tol``.
    predictor_corrector
        Use a Mehrotra predictor step to pick the centering parameter and a
        second-order correction. When off, every step targets
        ``sigma * mu`` with a fixed ``sigma``; that variant is slower and can
        stall on problems without a strictly feasible primal point.
    sigma
        Centering parameter for the plain path-following step.
    divergence
        Objective magnitude, relative to ``1 + |b| + |C|``, beyond which the
        run is flagged infeasible/unbounded.
    backend
        Schur-complement backend, see :func:`kernels.schur_complement`.
    reduce
        Compress away the common kernel of ``C`` and the ``A_i`` before
        iterating, then lift the primal back with unit weight on the removed
        directions. This keeps the dual interior nonempty for problems such
        as the embedding SDP, whose constraints all annihilate the ones
        vector.
    """
    opts = dict(gap_tol=gap_tol, max_iter=max_iter, feas_tol=feas_tol,
                predictor_corrector=predictor_corrector, sigma=sigma,
                step_fraction=step_fraction, divergence=divergence, backend=backend)
    if reduce and prob.n > 0:
        U = common_kernel(prob)
        if 0 < U.shape[1] < prob.n:
            return _solve_reduced(prob, U, opts)
    return _solve(prob, **opts)


def _kept_coordinates(U):
    """Coordinates whose unit vectors, together with ``U``, span ``R^n``.

    The dropped coordinates are the pivots of a column-pivoted QR of
    ``U^T``, so ``U`` restricted to them is well conditioned. Deleting rows
    and columns (rather than rotating into an orthonormal complement) keeps
    sparse constraint matrices sparse; the two reductions are congruent, and
    the central path is invariant under congruence.
    """
    _, _, piv = sla.qr(U.T, pivoting=True, mode="economic")
    drop = np.sort(piv[: U.shape[1]])
    return np.setdiff1d(np.arange(U.shape[0]), drop)


def _solve_reduced(prob, U, opts):
    from .problem import SdpProblem

    keep = _kept_coordinates(U)
    ix = np.ix_(keep, keep)
    inner = SdpProblem(prob.C[ix], [a[ix] for a in prob.A], prob.b, check=False)
    sol = _solve(inner, **opts)
    X = np.zeros_like(prob.C)
    X[ix] = sol.X
    X = sym(X + U @ U.T)
    Z = sym(prob.C - prob.adjoint(sol.y))
    rp = prob.b - prob.apply(X)
    sol.X, sol.Z = X, Z
    sol.primal_objective = float(np.sum(prob.C * X))
    sol.primal_residual = float(np.linalg.norm(rp)) / (1.0 + float(np.linalg.norm(prob.b)))
    sol.dual_residual = 0.0
    sol.message = (sol.message + "; " if sol.message else "") + f"reduced by {U.shape[1]} common-kernel direction(s)"
    return sol


def _solve(prob, gap_tol, max_iter, feas_tol, predictor_corrector, sigma, step_fraction, divergence, backend):
    n, m = prob.n, prob.m
    b, C = prob.b, prob.C
    norm_b = float(np.linalg.norm(b))
    norm_C = float(np.linalg.norm(C))
    scale = 1.0 + norm_b + norm_C
    tau = 1.0 + max(float(np.max(np.abs(b), initial=0.0)), norm_C)

    X = tau * np.eye(n)
    Z = tau * np.eye(n)
    y = np.zeros(m)
    used_backend = backend or (
        "cython" if kernels.BACKEND == "cython" and kernels._prefer_sparse(prob) else "python"
    )

    history = []
    status, message = "max_iter", ""
    it = 0
    for it in range(max_iter + 1):
        rp = b - prob.apply(X)
        Rd = C - prob.adjoint(y) - Z
        pobj = float(np.sum(C * X))
        dobj = float(b @ y)
        gap = float(np.sum(X * Z))
        pres = float(np.linalg.norm(rp)) / (1.0 + norm_b)
        dres = float(np.linalg.norm(Rd)) / (1.0 + norm_C)
        history.append(
            {"iteration": it, "primal_objective": pobj, "dual_objective": dobj, "gap": gap,
             "primal_residual": pres, "dual_residual": dres,
             "residual_term": float(y @ (-rp) + np.sum(Rd * X))}
        )
        if gap <= gap_tol * (1.0 + abs(pobj)) and pres <= feas_tol and dres <= feas_tol:
            status = "optimal"
            break
        if dobj > divergence * scale:
            status, message = "infeasible_suspect", "dual objective diverged"
            break
        if pobj < -divergence * scale:
            status, message = "unbounded_suspect", "primal objective diverged"
            break
        if it == max_iter:
            message = "iteration limit reached"
            break

        try:
            fx = _chol(X)
            fz = _chol(Z)
        except SolverBreakdown as exc:
            message = str(exc)
            break
        Zinv = sla.cho_solve(fz, np.eye(n))
        Zinv = sym(Zinv)
        mu = gap / n
        M = kernels.schur_complement(prob, X, Zinv, backend=used_backend)
        XRdZ = X @ Rd @ Zinv

        def direction(sig, corr=None):
            R = sig * mu * Zinv - X - XRdZ
            if corr is not None:
                R = R - corr @ Zinv
            dy = _solve_schur(M, rp - prob.apply(R)) if m else np.zeros(0)
            dZ = Rd - prob.adjoint(dy)
            dX = sym(R + X @ prob.adjoint(dy) @ Zinv)
            return dX, dy, dZ

        if predictor_corrector:
            dXp, dyp, dZp = direction(0.0)
            ap = min(1.0, _max_step(fx, dXp))
            ad = min(1.0, _max_step(fz, dZp))
            mu_aff = float(np.sum((X + ap * dXp) * (Z + ad * dZp))) / n
            sig = min(1.0, (max(mu_aff, 0.0) / mu) ** 3)
            dX, dy, dZ = direction(sig, dXp @ dZp)
        else:
            dX, dy, dZ = direction(sigma)

        ap = min(1.0, step_fraction * _max_step(fx, dX))
        ad = min(1.0, step_fraction * _max_step(fz, dZ))
        X = sym(X + ap * dX)
        y = y + ad * dy
        Z = sym(Z + ad * dZ)

    rp = b - prob.apply(X)
    Rd = C - prob.adjoint(y) - Z
    return SdpSolution(
        X=X,
        y=y,
        Z=Z,
        status=status,
        iterations=it,
        primal_objective=float(np.sum(C * X)),
        dual_objective=float(b @ y),
        primal_residual=float(np.linalg.norm(rp)) / (1.0 + norm_b),
        dual_residual=float(np.linalg.norm(Rd)) / (1.0 + norm_C),
        backend=used_backend,
        message=message,
        history=history,
    )
