"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Every workload is run on both backends; results must agree exactly and the
table reports the best wall time of N repeats.
"""

import argparse
import time

import numpy as np

from wproj import kernels
from wproj.gf import field_from_q
from wproj.search import SearchSpace
from wproj.wps import _kernel_tables, _rank_vectors

WORKLOADS = [
    ("canonicalize (1,2,3,4,5,6) q=9", "canon", (1, 2, 3, 4, 5, 6), 9, None),
    ("canonicalize (2,3,5,7,11) q=16", "canon", (2, 3, 5, 7, 11), 16, None),
    ("search (1,1,1) d=3 q=3", "search", (1, 1, 1), 3, 3),
    ("search (1,1,2) d=4 q=3", "search", (1, 1, 2), 3, 4),
    ("search (1,1,1) d=4 q=3", "search", (1, 1, 1), 3, 4),
    ("search (1,1,2,2) d=4 q=2", "search", (1, 1, 2, 2), 2, 4),
]


def _prepare(kind, W, q, d):
    F = field_from_q(q)
    if kind == "canon":
        bmat, umat = _kernel_tables(W, q)
        vecs = _rank_vectors(1, q ** len(W), len(W), q)
        return lambda impl: np.asarray(impl.canonicalize_ranks(vecs, bmat, umat, q))
    space = SearchSpace(W, d, F)

    def run(impl):
        best, n, wit = impl.search_range(space.values, F.zech, q, 0, space.total, 16)
        return int(best), int(n), [int(x) for x in wit]

    return run


def _same(a, b):
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        compiled = kernels.get_backend("compiled")
    except ImportError:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    python = kernels.get_backend("python")
    print(f"{'workload':<30} {'compiled s':>11} {'python s':>10} {'speedup':>8}")
    for label, kind, W, q, d in WORKLOADS:
        fn = _prepare(kind, W, q, d)
        times, outs = {}, {}
        for name, impl in (("compiled", compiled), ("python", python)):
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                outs[name] = fn(impl)
                best = min(best, time.perf_counter() - t0)
            times[name] = best
        if not _same(outs["compiled"], outs["python"]):
            raise SystemExit(f"backends disagree on {label}")
        c, p = times["compiled"], times["python"]
        print(f"{label:<30} {c:>11.4f} {p:>10.4f} {p / c:>7.1f}x")


if __name__ == "__main__":
    main()
