"""Time the numba and numpy Conway search kernels against each other.

    python benchmarks/bench_kernels.py [--repeat N]

Each row runs the primitive-candidate scan for one (p, n) over the full
candidate range and reports the best of N wall-clock timings per backend.
The numba column excludes JIT compilation (a warm-up call is made first).
"""

import argparse
import time

import numpy as np

from smtffa import _kernels
from smtffa.conway import _group_exponents

CASES = [(2, 16), (3, 9), (5, 6), (7, 5), (13, 4), (101, 3), (1009, 2)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not _kernels.HAVE_NUMBA:
        print("numba unavailable (or SMTFFA_NUMBA=0); timing numpy only")
    print(f"{'p':>5} {'n':>3} {'index':>8} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for p, n in CASES:
        order, exps = _group_exponents(p, n, 10**6)
        stop = p**n
        t_np, i_np = best_of(lambda: _kernels.np_first_primitive(p, n, order, exps, 0, stop), args.repeat)
        if _kernels.HAVE_NUMBA:
            arr = np.asarray(exps, dtype=np.int64)
            _kernels.nb_first_primitive(p, n, order, arr, 0, 1)
            t_nb, i_nb = best_of(lambda: _kernels.nb_first_primitive(p, n, order, arr, 0, stop), args.repeat)
            assert i_nb == i_np, (p, n, i_nb, i_np)
            print(f"{p:>5} {n:>3} {i_np:>8} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")
        else:
            print(f"{p:>5} {n:>3} {i_np:>8} {t_np:>10.4f} {'-':>10} {'-':>8}")

    # single powmod, the inner step of both paths
    p, n = 1009, 6
    f = np.array([3] + [0] * (n - 1) + [1], dtype=np.int64)
    a = np.zeros(n, dtype=np.int64)
    a[1] = 1
    e = p**n - 2
    t_np, r_np = best_of(lambda: _kernels.np_powmod(a, e, f, p), 50)
    line = f"powmod p={p} n={n}: numpy {t_np * 1e6:.1f} us"
    if _kernels.HAVE_NUMBA:
        _kernels.nb_powmod(a, 3, f, p)
        t_nb, r_nb = best_of(lambda: _kernels.nb_powmod(a, e, f, p), 50)
        assert (r_nb == r_np).all()
        line += f", numba {t_nb * 1e6:.1f} us"
    print(line)


if __name__ == "__main__":
    main()
