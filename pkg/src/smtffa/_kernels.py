"""Fixed-width kernels for the Conway candidate search.

Polynomials here are int64 arrays of *unsigned* residues ``0..p-1``, index
``i`` holding the coefficient of ``a**i``; the modulus ``f`` is monic with
``len(f) == n + 1``.  Two interchangeable implementations exist:

* ``numba`` -- per-candidate loops compiled with ``@njit``, early exit.
* ``numpy`` -- candidates processed in blocks, vectorized across the block.

Set ``SMTFFA_NUMBA=0`` to force the numpy path (numba is also skipped when it
cannot be imported).  Both paths are bit-for-bit equivalent; the test suite
runs them against each other and ``benchmarks/bench_kernels.py`` times them.
"""

from __future__ import annotations

import os

import numpy as np

# p*p + p must fit in int64 for the fused multiply-add-reduce steps.
MAX_P = 1 << 31
MAX_ORDER = 1 << 62


def fits(p: int, n: int) -> bool:
    """True when F_{p^n} search can run on int64 kernels."""
    return p < MAX_P and (n + 1) * p * p < MAX_ORDER and p**n < MAX_ORDER


def candidate(idx, p, n):
    """Monic degree-``n`` polynomial at position ``idx`` of the alt-sign order.

    ``idx`` written in base ``p`` is ``(c_{n-1} ... c_0)``; the coefficient of
    ``a**k`` is ``(-1)**(n-k) * c_k``.
    """
    f = np.zeros(n + 1, dtype=np.int64)
    f[n] = 1
    for k in range(n):
        c = idx % p
        idx //= p
        if (n - k) % 2 == 1:
            c = (p - c) % p
        f[k] = c
    return f


# ---------------------------------------------------------------- numpy path


def np_mulmod(a, b, f, p):
    n = f.shape[0] - 1
    prod = np.zeros(2 * n - 1, dtype=np.int64)
    for i in range(n):
        if a[i]:
            prod[i : i + n] = (prod[i : i + n] + a[i] * b) % p
    lo = f[:n]
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k]
        if c:
            prod[k - n : k] = (prod[k - n : k] + (p - c) * lo) % p
    return prod[:n].copy()


def np_powmod(a, e, f, p):
    n = f.shape[0] - 1
    result = np.zeros(n, dtype=np.int64)
    result[0] = 1 % p
    base = a.copy()
    while e:
        if e & 1:
            result = np_mulmod(result, base, f, p)
        e >>= 1
        if e:
            base = np_mulmod(base, base, f, p)
    return result


def _block_mulmod(a, b, f, p):
    # a, b: (B, n) residues; f: (B, n + 1) monic moduli
    bsz, n = a.shape
    prod = np.zeros((bsz, 2 * n - 1), dtype=np.int64)
    for i in range(n):
        prod[:, i : i + n] = (prod[:, i : i + n] + a[:, i : i + 1] * b) % p
    lo = f[:, :n]
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[:, k : k + 1]
        prod[:, k - n : k] = (prod[:, k - n : k] + (p - c) * lo) % p
    return prod[:, :n]


def _block_pow_alpha(f, e, p):
    bsz, n1 = f.shape
    n = n1 - 1
    base = np.zeros((bsz, n), dtype=np.int64)
    if n == 1:
        base[:, 0] = (p - f[:, 0]) % p  # a == -f0 mod (a + f0)
    else:
        base[:, 1] = 1
    result = np.zeros((bsz, n), dtype=np.int64)
    result[:, 0] = 1 % p
    while e:
        if e & 1:
            result = _block_mulmod(result, base, f, p)
        e >>= 1
        if e:
            base = _block_mulmod(base, base, f, p)
    return result


def _is_one(rows):
    out = rows[:, 0] == 1
    if rows.shape[1] > 1:
        out &= ~rows[:, 1:].any(axis=1)
    return out


def np_first_primitive(p, n, order, cofactor_exps, start, stop, block=4096):
    """First index in ``[start, stop)`` whose candidate has ``a`` of exact order ``order``."""
    digits = p ** np.arange(n, dtype=np.int64)
    signs = (n - np.arange(n)) % 2 == 1
    for lo in range(start, stop, block):
        hi = min(stop, lo + block)
        idx = np.arange(lo, hi, dtype=np.int64)
        cs = (idx[:, None] // digits[None, :]) % p
        cs = np.where(signs[None, :], (p - cs) % p, cs)
        f = np.concatenate([cs, np.ones((hi - lo, 1), dtype=np.int64)], axis=1)
        ok = f[:, 0] != 0
        if ok.any():
            ok &= _is_one(_block_pow_alpha(f, order, p))
        for e in cofactor_exps:
            if not ok.any():
                break
            ok &= ~_is_one(_block_pow_alpha(f, int(e), p))
        hits = np.flatnonzero(ok)
        if hits.size:
            return lo + int(hits[0])
    return -1


# ---------------------------------------------------------------- numba path


def _nb_mulmod(a, b, f, p):
    n = f.shape[0] - 1
    prod = np.zeros(2 * n - 1, dtype=np.int64)
    for i in range(n):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(n):
            prod[i + j] = (prod[i + j] + ai * b[j]) % p
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k]
        if c == 0:
            continue
        m = p - c
        for i in range(n):
            prod[k - n + i] = (prod[k - n + i] + m * f[i]) % p
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        out[i] = prod[i]
    return out


def _nb_powmod(a, e, f, p):
    n = f.shape[0] - 1
    result = np.zeros(n, dtype=np.int64)
    result[0] = 1 % p
    base = a.copy()
    while e > 0:
        if e & 1:
            result = _nb_mulmod(result, base, f, p)
        e >>= 1
        if e > 0:
            base = _nb_mulmod(base, base, f, p)
    return result


def _nb_alpha(f, p):
    n = f.shape[0] - 1
    a = np.zeros(n, dtype=np.int64)
    if n == 1:
        a[0] = (p - f[0]) % p
    else:
        a[1] = 1
    return a


def _nb_is_one(r):
    if r[0] != 1:
        return False
    for i in range(1, r.shape[0]):
        if r[i] != 0:
            return False
    return True


def _nb_first_primitive(p, n, order, cofactor_exps, start, stop):
    f = np.zeros(n + 1, dtype=np.int64)
    f[n] = 1
    for idx in range(start, stop):
        t = idx
        for k in range(n):
            c = t % p
            t //= p
            if (n - k) % 2 == 1:
                c = (p - c) % p
            f[k] = c
        if f[0] == 0:
            continue
        alpha = _nb_alpha(f, p)
        if not _nb_is_one(_nb_powmod(alpha, order, f, p)):
            continue
        good = True
        for j in range(cofactor_exps.shape[0]):
            if _nb_is_one(_nb_powmod(alpha, cofactor_exps[j], f, p)):
                good = False
                break
        if good:
            return idx
    return -1


def _want_numba() -> bool:
    return os.environ.get("SMTFFA_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


try:
    if not _want_numba():
        raise ImportError
    from numba import njit

    _jit = njit(cache=True, nogil=True)
    nb_mulmod = _jit(_nb_mulmod)
    nb_powmod = _jit(_nb_powmod)
    _nb_alpha = _jit(_nb_alpha)
    _nb_is_one = _jit(_nb_is_one)
    # rebind helpers so the compiled search sees compiled callees
    _nb_mulmod, _nb_powmod = nb_mulmod, nb_powmod
    nb_first_primitive = _jit(_nb_first_primitive)
    HAVE_NUMBA = True
except ImportError:
    nb_mulmod = nb_powmod = nb_first_primitive = None
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"

if HAVE_NUMBA:
    mulmod, powmod = nb_mulmod, nb_powmod

    def first_primitive(p, n, order, cofactor_exps, start, stop):
        exps = np.asarray(cofactor_exps, dtype=np.int64)
        return int(nb_first_primitive(p, n, order, exps, start, stop))

else:
    mulmod, powmod = np_mulmod, np_powmod
    first_primitive = np_first_primitive
