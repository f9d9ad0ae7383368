"""Time each hot kernel through its numba and pure-numpy implementations.

    python benchmarks/bench_kernels.py --x 1000000 --repeat 3
"""
import argparse
import math
import time

import numpy as np

from dedekind_residue import kernels
from dedekind_residue.numfield import make_field
from dedekind_residue.splitting import _small_primes, split_table


def best_of(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(X):
    limit = int(X) - 1
    base = _small_primes(math.isqrt(limit) + 1)
    primes = _small_primes(limit)
    cubic = make_field((-1, -1, 0, 1))
    t = split_table(cubic, X)
    args = (t.primes, t.offsets, t.degrees)
    rows = np.array([[c % int(p) for c in cubic.poly.coeffs] for p in primes[10:20_010]], dtype=np.int64)
    ps = primes[10:20_010]
    lims = np.array([limit, limit // 9], dtype=np.int64)
    scales = np.array([math.sqrt(X) * math.log(X), math.sqrt(X / 9) * math.log(X / 9)])
    chi = np.array([0.0, 1.0, 0.0, -1.0])
    return [
        ("sieve_segment", lambda k: k.sieve_segment(0, limit + 1, base)),
        ("ddf_counts (20k primes, cubic)", lambda k: k.ddf_counts(rows, ps)),
        ("bsum_pair", lambda k: k.bsum_pair(*args, lims, scales)),
        ("schoof_sum", lambda k: k.schoof_sum(*args, limit)),
        ("ideal_log_sum", lambda k: k.ideal_log_sum(*args, limit, 1.5, 1.0)),
        ("mangoldt_plateau_sum", lambda k: k.mangoldt_plateau_sum(primes, limit, math.log(20), 1.0)),
        ("periodic_harmonic_sum (1e7)", lambda k: k.periodic_harmonic_sum(chi, 10**7)),
    ]


class Backend:
    def __init__(self, suffix):
        self.suffix = suffix

    def __getattr__(self, name):
        return getattr(kernels, f"{name}_{self.suffix}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--x", type=float, default=1e6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    nb, np_ = Backend("nb"), Backend("np")
    print(f"{'kernel':34s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s}")
    for name, fn in cases(args.x):
        fn(nb)  # compile
        a = best_of(lambda: fn(nb), args.repeat)
        b = best_of(lambda: fn(np_), args.repeat)
        print(f"{name:34s} {a:10.4f} {b:10.4f} {b / a:8.1f}x")


if __name__ == "__main__":
    main()
