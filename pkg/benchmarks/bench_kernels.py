"""Compare the compiled kernel extension against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from gisk import _kernels_py

try:
    from gisk import _kernels_cy
except ImportError:
    _kernels_cy = None

from gisk.proplab import sample_root_tuple
from gisk.stability import psi


def _workload(rng):
    polys = []
    for _ in range(400):
        n = int(rng.integers(3, 9))
        c = psi(sample_root_tuple(rng, n))
        polys.append(np.array(c.diagonal().coeffs))
    vecs = [rng.uniform(0.1, 10.0, int(rng.integers(3, 12))) for _ in range(2000)]
    return polys, vecs


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    polys, vecs = _workload(rng)

    backends = [("py", _kernels_py)]
    if _kernels_cy is not None:
        backends.append(("c", _kernels_cy))

    print(f"{'kernel':24s}" + "".join(f"{name:>12s}" for name, _ in backends)
          + ("     speedup" if len(backends) == 2 else ""))
    rows = [
        ("chain_largest_roots", lambda k: [k.chain_largest_roots(p) for p in polys]),
        ("real_roots", lambda k: [k.real_roots(p) for p in polys]),
        ("sigma_table", lambda k: [k.sigma_table(v) for v in vecs]),
    ]
    for label, work in rows:
        times = [_time(lambda k=k: work(k), args.repeat) for _, k in backends]
        line = f"{label:24s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
