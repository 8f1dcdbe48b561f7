"""Time the compiled and numpy kernels on the same inputs.

    python benchmarks/bench_kernels.py --n 4000 --repeat 3
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hypclust import _backend, available_backends, clustering, graphgen, theory
from hypclust.hypgeom import ModelParams
from hypclust.sampler import sample_vertex_set


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4000)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    a = ap.parse_args(argv)

    vs = sample_vertex_set(ModelParams(zeta=1.0, alpha=a.alpha, beta=2.0, nu=1.0, n=a.n), a.seed)
    g = graphgen.build_binomial(vs, a.seed)
    s_lo, h, nodes = theory._trapezoid_nodes(2.0)
    grid = np.arange(-20.0, 20.25, 0.25)

    cases = {
        "binomial": lambda b: graphgen.build_binomial(vs, a.seed, backend=b),
        "disc_naive": lambda b: graphgen.build_disc_naive(vs, backend=b),
        "disc_pruned": lambda b: graphgen.build_disc_pruned(vs, backend=b),
        "triangles": lambda b: clustering.triangles_per_vertex(g, backend=b),
        "g_table": lambda b: _backend.get(b).g_table(grid, 2.0, s_lo, h, nodes),
    }
    backends = available_backends()
    print(f"N={a.n}  edges={g.edge_count}  backends={backends}")
    print(f"{'kernel':<12}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in cases.items():
        t = {b: _best(lambda: fn(b), a.repeat) for b in backends}
        row = f"{name:<12}" + "".join(f"{t[b]:>11.3f}s" for b in backends)
        if len(backends) > 1:
            row += f"{t['python'] / t['cython']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
