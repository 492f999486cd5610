"""Frameworks, Gram matrices and complete squared-length vectors.

The canonical gauge pins the last vertex at the origin, giving a
``(v-1) x (v-1)`` Gram matrix whose entries are linear in the squared
pairwise distances. :func:`lifted_gram` is the unpinned ``v x v`` variant
used by the embedding SDP.
"""
from __future__ import annotations

import numpy as np

from .core import Configuration, Framework, complete_graph, length_squared
from .linalg import default_tol, sym, sym_eig

__all__ = [
    "gram_from_framework",
    "gram_from_lengths",
    "configuration_from_gram",
    "lifted_gram",
    "is_psd",
    "complete_lengths",
]


def is_psd(g, rel_tol=None):
    """``lambda_min >= -rel_tol * (1 + lambda_max)``."""
    rel_tol = default_tol() if rel_tol is None else rel_tol
    w = sym_eig(g).eigenvalues
    if w.size == 0:
        return True
    return bool(w[0] >= -rel_tol * (1.0 + max(w[-1], 0.0)))


def gram_from_framework(f):
    """``rho rho^T`` where ``rho`` holds the points translated so the last is at 0.

    Accepts a :class:`~unirigid.core.Framework` or a bare configuration.
    """
    p = f.config.coords if hasattr(f, "config") else np.asarray(getattr(f, "coords", f), dtype=float)
    if p.shape[0] < 2:
        raise ValueError("need at least two vertices")
    rho = p[:-1] - p[-1]
    return rho @ rho.T


def gram_from_lengths(lengths, v=None):
    """Pinned Gram matrix from the squared lengths of the complete graph.

    ``lengths`` is indexed over all pairs ``(i, j)``, ``i < j``, in
    lexicographic order. The map is linear:
    ``G_ij = (D_i,last + D_j,last - D_ij) / 2``. No PSD projection is applied;
    check the result with :func:`is_psd` when realizability is in doubt.
    """
    lengths = np.asarray(lengths, dtype=float).reshape(-1)
    if v is None:
        v = int(round((1 + np.sqrt(1 + 8 * lengths.size)) / 2))
    if lengths.size != v * (v - 1) // 2:
        raise ValueError(f"{lengths.size} lengths do not index the complete graph on {v} vertices")
    dist = np.zeros((v, v))
    iu = np.triu_indices(v, 1)
    dist[iu] = lengths
    dist = dist + dist.T
    last = dist[:-1, -1]
    return 0.5 * (last[:, None] + last[None, :] - dist[:-1, :-1])


def configuration_from_gram(g, rel_tol=None):
    """Factor a PSD Gram matrix back into points, last vertex at the origin.

    The dimension of the result is the numerical rank of ``g``.
    """
    rel_tol = default_tol() if rel_tol is None else rel_tol
    g = sym(g)
    eig = sym_eig(g)
    w, vecs = eig.eigenvalues, eig.eigenvectors
    scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
    if w.size and w[0] < -rel_tol * (1.0 + max(w[-1], 0.0)):
        raise ValueError(f"Gram matrix is indefinite (lambda_min = {w[0]:.3e})")
    keep = w > rel_tol * scale
    # largest eigenvalues first so the leading coordinate carries the most spread
    order = np.flatnonzero(keep)[::-1]
    rho = vecs[:, order] * np.sqrt(w[order])
    if rho.shape[1] == 0:
        rho = np.zeros((g.shape[0], 1))
    coords = np.vstack([rho, np.zeros((1, rho.shape[1]))])
    return Configuration(coords)


def lifted_gram(f, offset=1.0):
    """``v x v`` Gram matrix of ``(p(i), offset)`` in ``E^{d+1}``.

    Appending a constant coordinate translates the configuration off the
    origin, so for a proper ``p`` the result has rank ``d + 1``.
    """
    p = f.p
    q = np.hstack([p - p.mean(axis=0), np.full((p.shape[0], 1), float(offset))])
    return q @ q.T


def complete_lengths(f):
    """Squared lengths of all pairs of ``f``'s points, complete-graph order."""
    full = Framework(complete_graph(f.v), f.config)
    return length_squared(full)

