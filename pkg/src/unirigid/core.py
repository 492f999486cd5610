"""Graphs, configurations, frameworks and the squared edge-length map.

Vertices are 0-indexed. Edges are stored as sorted pairs ``(u, w)`` with
``u < w`` and the edge list itself is kept in lexicographic order; every
edge-indexed vector in the package follows this order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

__all__ = [
    "Graph",
    "Configuration",
    "Framework",
    "length_squared",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "trilateration_graph",
    "sample_pseudo_generic_configuration",
    "framework_to_dict",
    "framework_from_dict",
    "load_framework",
    "save_framework",
]


def _canonical_edges(vertex_count, edges):
    seen = set()
    out = []
    for edge in edges:
        u, w = (int(x) for x in edge)
        if u == w:
            raise ValueError(f"self-loop at vertex {u}")
        if not (0 <= u < vertex_count and 0 <= w < vertex_count):
            raise ValueError(f"edge ({u}, {w}) out of range for {vertex_count} vertices")
        key = (min(u, w), max(u, w))
        if key in seen:
            raise ValueError(f"duplicate edge {key}")
        seen.add(key)
        out.append(key)
    return tuple(sorted(out))


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..vertex_count-1``."""

    vertex_count: int
    edges: tuple

    def __init__(self, vertex_count, edges=()):
        vertex_count = int(vertex_count)
        if vertex_count < 1:
            raise ValueError("a graph needs at least one vertex")
        object.__setattr__(self, "vertex_count", vertex_count)
        object.__setattr__(self, "edges", _canonical_edges(vertex_count, edges))

    @property
    def edge_count(self):
        return len(self.edges)

    def edge_index(self):
        """Map each edge ``(u, w)`` to its position in the canonical order."""
        return {edge: k for k, edge in enumerate(self.edges)}

    def edge_array(self):
        return np.array(self.edges, dtype=np.intp).reshape(-1, 2)

    def is_complete(self):
        n = self.vertex_count
        return self.edge_count == n * (n - 1) // 2


@dataclass(frozen=True, eq=False)
class Configuration:
    """``v`` points in ``E^d``, stored as a read-only ``(v, d)`` array."""

    coords: np.ndarray

    def __init__(self, coords):
        arr = np.array(coords, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("coordinates must form a non-empty (v, d) array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coordinates must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @property
    def dimension(self):
        return self.coords.shape[1]

    @property
    def vertex_count(self):
        return self.coords.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())


@dataclass(frozen=True)
class Framework:
    graph: Graph
    config: Configuration

    def __post_init__(self):
        if self.config.vertex_count != self.graph.vertex_count:
            raise ValueError(
                f"configuration has {self.config.vertex_count} points but the graph "
                f"has {self.graph.vertex_count} vertices"
            )

    @classmethod
    def from_arrays(cls, coords, edges):
        config = Configuration(coords)
        return cls(Graph(config.vertex_count, edges), config)

    @property
    def p(self):
        """The ``(v, d)`` coordinate array."""
        return self.config.coords

    @property
    def v(self):
        return self.graph.vertex_count

    @property
    def d(self):
        return self.config.dimension

    @property
    def e(self):
        return self.graph.edge_count

    def with_coords(self, coords):
        return Framework(self.graph, Configuration(coords))


def length_squared(f):
    """Squared edge lengths of ``f`` in canonical edge order."""
    if f.e == 0:
        return np.zeros(0)
    ij = f.graph.edge_array()
    diff = f.p[ij[:, 0]] - f.p[ij[:, 1]]
    return np.einsum("ij,ij->i", diff, diff)


def complete_graph(n):
    return Graph(n, combinations(range(n), 2))


def cycle_graph(n):
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def trilateration_graph(n, d, seed=0):
    """Random ``d``-trilateration graph on ``n`` vertices.

    Vertices ``0..d+1`` form a clique; every later vertex is joined to
    ``d + 1`` distinct earlier vertices drawn with ``numpy.random.default_rng(seed)``.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    if n < d + 2:
        raise ValueError(f"a {d}-trilateration graph needs at least {d + 2} vertices")
    rng = np.random.default_rng(seed)
    edges = list(combinations(range(d + 2), 2))
    for k in range(d + 2, n):
        for j in sorted(rng.choice(k, size=d + 1, replace=False)):
            edges.append((int(j), k))
    return Graph(n, edges)


def sample_pseudo_generic_configuration(v, d, seed=0):
    """Uniform ``[0, 1)`` coordinates from a seeded generator.

    True genericity cannot be checked in floating point; conclusions drawn
    from these samples hold outside a measure-zero set of bad draws.
    """
    if v < 1 or d < 1:
        raise ValueError("need v >= 1 and d >= 1")
    rng = np.random.default_rng(seed)
    return Configuration(rng.random((v, d)))


def framework_to_dict(f):
    return {
        "dimension": f.d,
        "vertices": f.p.tolist(),
        "edges": [list(edge) for edge in f.graph.edges],
    }


def framework_from_dict(data):
    try:
        dim = int(data["dimension"])
        vertices = data["vertices"]
        edges = data["edges"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed framework document: {exc}") from None
    coords = np.array(vertices, dtype=float)
    if coords.ndim != 2 or coords.shape[1] != dim:
        raise ValueError(f"vertices must be a list of {dim}-vectors")
    for edge in edges:
        if len(edge) != 2:
            raise ValueError(f"edge {edge!r} is not a pair")
    return Framework.from_arrays(coords, edges)


def load_framework(path):
    with open(path) as fh:
        return framework_from_dict(json.load(fh))


def save_framework(f, path):
    Path(path).write_text(json.dumps(framework_to_dict(f), indent=2) + "\n")
