"""Complementary pairs, strict complementarity and dual recombination."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from math import comb

import numpy as np

from ..linalg import default_tol, sym, sym_eig

__all__ = [
    "ComplementarityReport",
    "RankBoundWarning",
    "check_complementarity",
    "combine_duals",
    "beta_coefficient",
    "recombined_dual",
]


class RankBoundWarning(RuntimeWarning):
    """A pair flagged complementary has ``rank X + rank Omega > n``.

    Exact complementary pairs cannot do this, so the warning always points
    at a tolerance problem in the caller.
    """


def _rank_from_eigs(w, rel_tol):
    if w.size == 0:
        return 0
    top = max(1.0, float(np.max(np.abs(w))))
    return int(np.sum(np.abs(w) > rel_tol * top))


@dataclass
class ComplementarityReport:
    n: int
    rank_x: int
    rank_omega: int
    inner_product: float
    complementary: bool
    strictly_complementary: bool
    dim_L: int | None
    bound_lo: int
    eigenvalues_x: np.ndarray = field(repr=False)
    eigenvalues_omega: np.ndarray = field(repr=False)
    tolerance: float = 0.0

    @property
    def rank_sum(self):
        return self.rank_x + self.rank_omega

    @property
    def generic_data_bound(self):
        """``C(n-r+1, 2) <= dim L``, necessary when the program data are generic."""
        return None if self.dim_L is None else self.bound_lo <= self.dim_L

    @property
    def generic_solution_bound(self):
        """``C(n-r+1, 2) >= dim L``, necessary for a unique solution generic in its rank stratum."""
        return None if self.dim_L is None else self.bound_lo >= self.dim_L

    def to_dict(self):
        return {
            "n": self.n,
            "rank_x": self.rank_x,
            "rank_omega": self.rank_omega,
            "inner_product": self.inner_product,
            "complementary": self.complementary,
            "strictly_complementary": self.strictly_complementary,
            "dim_L": self.dim_L,
            "bound_lo": self.bound_lo,
            "generic_data_bound": self.generic_data_bound,
            "generic_solution_bound": self.generic_solution_bound,
            "eigenvalues_x": self.eigenvalues_x.tolist(),
            "eigenvalues_omega": self.eigenvalues_omega.tolist(),
            "tolerance": self.tolerance,
        }


def check_complementarity(X, Omega, dim_L=None, rel_tol=None):
    """Classify a primal/dual pair.

    The pair is complementary when ``|<Omega, X>| <= rel_tol * (1 + |Omega| |X|)``
    and strictly complementary when additionally the numerical ranks add
    up to ``n``. Both matrices must be PSD to within ``rel_tol``.
    """
    rel_tol = default_tol() if rel_tol is None else rel_tol
    X, Omega = sym(X), sym(Omega)
    if X.shape != Omega.shape:
        raise ValueError(f"order mismatch: {X.shape} vs {Omega.shape}")
    n = X.shape[0]
    wx = sym_eig(X).eigenvalues
    wo = sym_eig(Omega).eigenvalues
    for name, w in (("X", wx), ("Omega", wo)):
        if w.size and w[0] < -rel_tol * (1.0 + max(w[-1], 0.0)):
            raise ValueError(f"{name} is not PSD (lambda_min = {w[0]:.3e})")
    inner = float(np.sum(X * Omega))
    norm = float(np.linalg.norm(X, 2) * np.linalg.norm(Omega, 2)) if n else 0.0
    complementary = abs(inner) <= rel_tol * (1.0 + norm)
    rx, ro = _rank_from_eigs(wx, rel_tol), _rank_from_eigs(wo, rel_tol)
    if complementary and rx + ro > n:
        warnings.warn(
            f"complementary pair with rank sum {rx + ro} > n = {n}; tolerance {rel_tol:g} is too loose",
            RankBoundWarning,
            stacklevel=2,
        )
    return ComplementarityReport(
        n=n,
        rank_x=rx,
        rank_omega=ro,
        inner_product=inner,
        complementary=complementary,
        strictly_complementary=complementary and rx + ro == n,
        dim_L=None if dim_L is None else int(dim_L),
        bound_lo=comb(n - rx + 1, 2),
        eigenvalues_x=wx,
        eigenvalues_omega=wo,
        tolerance=rel_tol,
    )


def combine_duals(Omega1, mu1, Omega2, X=None, rel_tol=None):
    """Return ``lam1 * Omega1 + lam2 * Omega2`` with ``lam1 * mu1 + lam2 = 1``.

    ``Omega1`` lies in ``L^perp + span(beta)`` with ``beta``-coefficient
    ``mu1``; ``Omega2`` lies in ``L^perp + beta``. The result is again in
    ``L^perp + beta``, stays PSD and complementary to ``X``, and its rank is
    at least that of ``Omega1``. ``lam1 = min(1, 1 / (2|mu1| + 1))`` keeps
    ``lam2 >= 1/2``.

    Returns ``(Omega, lam1, lam2)``.
    """
    rel_tol = default_tol() if rel_tol is None else rel_tol
    Omega1, Omega2 = sym(Omega1), sym(Omega2)
    if Omega1.shape != Omega2.shape:
        raise ValueError("dual matrices must have the same order")
    for name, om in (("Omega1", Omega1), ("Omega2", Omega2)):
        w = sym_eig(om).eigenvalues
        if w.size and w[0] < -rel_tol * (1.0 + max(w[-1], 0.0)):
            raise ValueError(f"{name} is not PSD")
    if X is not None:
        X = sym(X)
        for name, om in (("Omega1", Omega1), ("Omega2", Omega2)):
            inner = float(np.sum(om * X))
            if abs(inner) > rel_tol * (1.0 + np.linalg.norm(om, 2) * np.linalg.norm(X, 2)):
                raise ValueError(f"{name} is not complementary to X (<{name}, X> = {inner:.3e})")
    lam1 = min(1.0, 1.0 / (2.0 * abs(mu1) + 1.0))
    lam2 = 1.0 - lam1 * mu1
    if not (lam1 > 0 and lam2 > 0):
        raise ArithmeticError(f"no admissible weights for mu1 = {mu1!r}")
    return sym(lam1 * Omega1 + lam2 * Omega2), lam1, lam2


def beta_coefficient(Omega, constraints, beta, rel_tol=None):
    """Coefficient of ``beta`` when ``Omega`` is written in ``span(A_i) + span(beta)``.

    Raises ``ValueError`` if ``beta`` itself lies in ``span(A_i)`` (the
    decomposition is then not unique) or if ``Omega`` is not in the span.
    """
    rel_tol = default_tol() if rel_tol is None else rel_tol
    A = np.asarray(constraints, dtype=float)
    n = np.asarray(beta).shape[0]
    basis = np.column_stack([a.reshape(-1) for a in A] + [np.asarray(beta, dtype=float).reshape(-1)])
    rank_a = np.linalg.matrix_rank(basis[:, :-1], tol=rel_tol * max(1.0, np.abs(basis).max())) if A.size else 0
    rank_all = np.linalg.matrix_rank(basis, tol=rel_tol * max(1.0, np.abs(basis).max()))
    if rank_all == rank_a:
        raise ValueError("beta lies in the constraint span; its coefficient is not determined")
    coef, *_ = np.linalg.lstsq(basis, np.asarray(Omega, dtype=float).reshape(-1), rcond=None)
    resid = np.linalg.norm(basis @ coef - np.asarray(Omega).reshape(-1))
    if resid > rel_tol * (1.0 + np.linalg.norm(Omega)) * n:
        raise ValueError(f"Omega is not in span(A_i) + span(beta) (residual {resid:.3e})")
    return float(coef[-1])


def recombined_dual(prob, sol, **solver_opts):
    """Build a dual optimum of maximal rank for an optimization SDP.

    Freezes the objective at the optimum of ``sol`` (adding the constraint
    ``<C, X> = <C, X*>``) and solves the resulting feasibility problem, whose
    dual slack ``Omega1 = -sum_i y_i A_i - y_C C`` is read off with
    ``beta``-coefficient ``mu1 = -y_C``. It is then combined with the
    original dual slack ``sol.Z`` via :func:`combine_duals`.

    Returns ``(Omega, Omega1, mu1)``.
    """
    from .problem import SdpProblem
    from .solver import solve

    opts = {"gap_tol": 1e-10, **solver_opts}
    A = np.concatenate([prob.A, prob.C[None]], axis=0)
    b = np.append(prob.b, np.sum(prob.C * sol.X))
    feas = solve(SdpProblem(np.zeros_like(prob.C), A, b, check=False), **opts)
    Omega1 = sym(feas.Z)
    mu1 = -float(feas.y[-1])
    Omega, _, _ = combine_duals(Omega1, mu1, sol.Z)
    return Omega, Omega1, mu1

