"""Compare the compiled and numpy Schur-complement kernels.

Times the kernel alone and a full solve of the embedding SDP of seeded
2-dimensional trilateration frameworks. The solve status is printed next to
each timing; these problems have no primal interior, and the larger ones
may stop short of the default tolerances. Run with

    python benchmarks/bench_schur.py [--sizes 10 20 40] [--repeat 5]
"""
import argparse
import time

import numpy as np

from unirigid import core
from unirigid.sdp import build_embedding_sdp, solve
from unirigid.sdp.kernels import available_backends, schur_complement

BACKENDS = ("python", "python-sparse", "cython")


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 30, 40, 60])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = [b for b in BACKENDS if b != "cython" or "cython" in available_backends()]
    if "cython" not in backends:
        print("compiled kernel not built; timing numpy backends only")
    rng = np.random.default_rng(args.seed)
    header = f"{'n':>4} {'m':>5}  " + "  ".join(f"{b + ' kernel':>20}" for b in backends)
    header += "  " + "  ".join(f"{b + ' solve':>20}" for b in backends) + "  status"
    print(header)
    for n in args.sizes:
        f = core.Framework(core.trilateration_graph(n, 2, args.seed), core.sample_pseudo_generic_configuration(n, 2, args.seed))
        prob = build_embedding_sdp(f)
        g = rng.standard_normal((n, n))
        X = g @ g.T + np.eye(n)
        Zinv = np.linalg.inv(g.T @ g + np.eye(n))
        kernel = [best_of(lambda b=b: schur_complement(prob, X, Zinv, backend=b), args.repeat) for b in backends]
        full = [best_of(lambda b=b: solve(prob, backend=b), max(1, args.repeat // 2)) for b in backends]
        status = solve(prob).status
        row = f"{n:>4} {prob.m:>5}  " + "  ".join(f"{t * 1e3:>17.3f} ms" for t in kernel)
        row += "  " + "  ".join(f"{t * 1e3:>17.1f} ms" for t in full) + f"  {status}"
        print(row)


if __name__ == "__main__":
    main()
