"""Compare the compiled and pure-Python commutator sweeps.

    python benchmarks/bench_kernels.py --kmax 7 --repeat 3
"""

import argparse
import time

import numpy as np

from chargehunt import _kernels_py
from chargehunt.basis import enumerate_pbc_basis
from chargehunt.constraints import placements_for
from chargehunt.models import fredkin

try:
    from chargehunt import _kernels
except ImportError:
    _kernels = None


def inputs(k):
    basis = enumerate_pbc_basis(k)
    pl = placements_for(basis, fredkin())
    e = basis.elements
    c = [np.array([getattr(p, a) for p in e], dtype=t)
         for a, t in (("x", np.uint64), ("z", np.uint64), ("length", np.int64), ("anchor", np.int64))]
    h = [np.array([getattr(p, a) for _, p in pl], dtype=t)
         for a, t in (("x", np.uint64), ("z", np.uint64), ("length", np.int64), ("anchor", np.int64))]
    return c + h


def best(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--kmin", type=int, default=4)
    ap.add_argument("--kmax", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'k':>3}{'cols':>8}{'pairs':>10}{'python s':>12}{'cython s':>12}{'speedup':>9}")
    for k in range(args.kmin, args.kmax + 1):
        data = inputs(k)
        tp, outp = best(_kernels_py.pair_commutators, data, args.repeat)
        if _kernels is None:
            print(f"{k:>3}{len(data[0]):>8}{len(outp[0]):>10}{tp:>12.4f}{'n/a':>12}{'':>9}")
            continue
        tc, outc = best(_kernels.pair_commutators, data, args.repeat)
        assert all(np.array_equal(a, b) for a, b in zip(outp, outc)), "backends disagree"
        print(f"{k:>3}{len(data[0]):>8}{len(outp[0]):>10}{tp:>12.4f}{tc:>12.4f}{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
