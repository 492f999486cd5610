"""Small hand-made frameworks spanning the rigidity hierarchy."""
import numpy as np

from .core import Configuration, Framework, complete_graph, cycle_graph


def line_cycle(x=(0.0, 1.0, 2.0, 4.0)):
    """4-cycle on the line with edges 01, 12, 23, 03.

    Universally rigid when ``x`` is increasing, since the edge 03 is then as
    long as the other three together.
    """
    return Framework.from_arrays(np.asarray(x, dtype=float), [(0, 1), (1, 2), (2, 3), (0, 3)])


def hierarchy_samples():
    """One framework per level, keyed by the level's name."""
    return {
        "Flexible": Framework(cycle_graph(4), Configuration([[0.0, 0.0], [1.1, 0.1], [1.3, 0.9], [0.2, 1.2]])),
        "LocallyRigid": Framework.from_arrays(
            [[0.0, 0.0], [1.0, 0.1], [0.9, 1.1], [-0.1, 0.95]],
            [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)],
        ),
        # unordered 4-cycle on the line: its stress has full rank but is indefinite
        "GloballyRigid": line_cycle((0.0, 2.0, 1.0, 4.0)),
        "UniversallyRigid": Framework(
            complete_graph(4), Configuration([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.3, 0.4]])
        ),
    }


def pentagon_samples(seed=0, jitter=0.05):
    """Perturbed regular pentagons carrying 0, 2, 3, 4 and 5 diagonals."""
    rng = np.random.default_rng(seed)
    angles = 2 * np.pi * np.arange(5) / 5
    pts = np.column_stack([np.cos(angles), np.sin(angles)]) + jitter * rng.standard_normal((5, 2))
    rim = [(i, (i + 1) % 5) for i in range(5)]
    diagonals = [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]
    return [Framework.from_arrays(pts, rim + diagonals[:k]) for k in (0, 2, 3, 4, 5)]
