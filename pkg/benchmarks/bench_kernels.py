"""Time the jit kernels against their numpy fallbacks.

Runs both backends on the same inputs regardless of the TOPOLAB_NO_NUMBA
selection: the topology scan at n = 4 and the weak-reflection counting
over all (source, target) pairs up to 3 points.  Jit warmup happens
outside the timed region.

Usage: python benchmarks/bench_kernels.py [repeats]
"""
from __future__ import annotations

import sys
import time

import numpy as np

from topolab import _kernels
from topolab.fintop import enumerate_topologies, property_report
from topolab.reflect import _space_bitmap, t0_reflection


def timed(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def sweep_inputs(max_n: int):
    sources = [s for n in range(max_n + 1) for s in enumerate_topologies(n)]
    targets = [s for s in sources if property_report(s).t0]
    pairs = []
    for s in sources:
        q = t0_reflection(s)
        src = (s.n, _space_bitmap(s), q.target.n, _space_bitmap(q.target),
               np.array(q.assign, dtype=np.int64))
        for t in targets:
            pairs.append((src, t.n, np.array(t.opens, dtype=np.int64)))
    return pairs


def run_sweep(kernel, pairs) -> int:
    total = 0
    for (n_s, sbm, n_q, qbm, assign), n_t, opens in pairs:
        total += int(kernel(n_s, sbm, n_q, qbm, assign, n_t, opens)[1])
    return total


def main() -> int:
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    rows = []

    numpy_codes = timed(lambda: _kernels._topology_codes_numpy(4), repeats)
    if _kernels._topology_codes_jit is not None:
        _kernels._topology_codes_jit(4)  # warmup / compile
        jit_codes = timed(lambda: _kernels._topology_codes_jit(4), repeats)
    else:
        jit_codes = None
    rows.append(("topology scan n=4", jit_codes, numpy_codes))

    pairs = sweep_inputs(3)
    numpy_sweep = timed(lambda: run_sweep(_kernels._reflection_counts_numpy, pairs),
                        repeats)
    if _kernels._reflection_counts_jit is not None:
        run_sweep(_kernels._reflection_counts_jit, pairs)  # warmup / compile
        jit_sweep = timed(lambda: run_sweep(_kernels._reflection_counts_jit, pairs),
                          repeats)
        agree = (run_sweep(_kernels._reflection_counts_jit, pairs)
                 == run_sweep(_kernels._reflection_counts_numpy, pairs))
    else:
        jit_sweep = None
        agree = True
    rows.append((f"reflection sweep n<=3 ({len(pairs)} pairs)", jit_sweep, numpy_sweep))

    print(f"selected backend: {_kernels.BACKEND}")
    print(f"{'kernel':<40} {'numba':>10} {'numpy':>10} {'speedup':>8}")
    for name, jit, py in rows:
        if jit is None:
            print(f"{name:<40} {'n/a':>10} {py * 1e3:>8.2f}ms {'':>8}")
        else:
            print(f"{name:<40} {jit * 1e3:>8.2f}ms {py * 1e3:>8.2f}ms {py / jit:>7.1f}x")
    if not agree:
        print("BACKENDS DISAGREE", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
