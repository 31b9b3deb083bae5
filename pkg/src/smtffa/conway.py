"""Conway polynomials by direct search.

C_{p,n} is the first monic degree-``n`` polynomial, in the alternating-sign
lexicographic order of :func:`alt_sign_key`, that is primitive and
compatible with C_{p,m} for every proper divisor ``m`` of ``n``.  The search
is plain enumeration; it is meant for small fields.

Results live in a :class:`ConwayCache`, optionally persisted to a text file
with one ``p n c0 c1 ... cn`` line per entry (signed coefficients, ascending
degree).  Entries read from disk are re-verified before use.
"""

from __future__ import annotations

import functools
import logging
import os
import tempfile
import threading

import numpy as np

from .errors import ConwayCacheError, FFAError, ResourceError
from .field_core import check_prime, is_probable_prime, smod
from .poly import (
    Polynomial,
    is_irreducible,
    poly_compose_mod,
    poly_powmod,
)

log = logging.getLogger(__name__)

DEFAULT_SEARCH_BUDGET = 10**7
DEFAULT_FACTOR_BOUND = 10**6
# below this many candidates the pure-Python path beats JIT start-up
KERNEL_MIN_CANDIDATES = 1 << 12

ENV_CACHE = "SMTFFA_CONWAY_CACHE"


def alt_sign_key(f: Polynomial) -> tuple[int, ...]:
    """``(c_d, ..., c_0)`` with ``f = sum((-1)**i * c_{d-i} * a**(d-i))``, ``c_i`` in ``0..p-1``.

    This tuple is the sort key of the Conway search.

    >>> alt_sign_key(Polynomial.make([-1, -1, 1], 3))
    (1, 1, 2)
    """
    if not f.is_monic():
        raise FFAError(f"alt_sign_key needs a monic polynomial, got {f}")
    d = f.degree
    return tuple((-1) ** (d - k) * f.coeffs[k] % f.p for k in range(d, -1, -1))


def candidate_at(idx: int, p: int, n: int) -> Polynomial:
    """Inverse of the search order: the ``idx``-th monic degree-``n`` polynomial."""
    cs = []
    for k in range(n):
        c = idx % p
        idx //= p
        cs.append(-c if (n - k) % 2 else c)
    return Polynomial.make(cs + [1], p)


@functools.lru_cache(maxsize=None)
def _sieve(limit: int) -> tuple[int, ...]:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return tuple(int(x) for x in np.flatnonzero(flags))


def factorize(N: int, bound: int = DEFAULT_FACTOR_BOUND) -> dict[int, int]:
    """Factor ``N`` by trial division up to ``bound``.

    The leftover cofactor is accepted only if it is provably prime
    (``< bound**2``) or passes Miller-Rabin; otherwise :class:`ResourceError`.
    """
    if N < 1:
        raise ValueError("factorize needs a positive integer")
    out: dict[int, int] = {}
    for q in _sieve(bound):
        if q * q > N:
            break
        while N % q == 0:
            out[q] = out.get(q, 0) + 1
            N //= q
    if N > 1:
        if N < bound * bound or is_probable_prime(N):
            out[N] = out.get(N, 0) + 1
        else:
            raise ResourceError(f"cannot factor cofactor {N} within trial bound {bound}")
    return out


def _group_exponents(p: int, n: int, bound: int) -> tuple[int, list[int]]:
    order = p**n - 1
    return order, [order // q for q in sorted(factorize(order, bound))]


def _alpha_power_is_one(f: Polynomial, e: int) -> bool:
    r = poly_powmod(Polynomial((0, 1), f.p), e, f)
    return r.coeffs == (1,)


def _to_array(f: Polynomial) -> np.ndarray:
    return np.array([c % f.p for c in f.coeffs], dtype=np.int64)


def _kernels():
    # imported on demand: loading numba costs more than small searches
    from . import _kernels

    return _kernels


def _use_kernel(p: int, n: int) -> bool:
    return p**n >= KERNEL_MIN_CANDIDATES and _kernels().fits(p, n)


def is_primitive(f: Polynomial, p: int, n: int, factor_bound: int = DEFAULT_FACTOR_BOUND) -> bool:
    """True iff ``a`` has multiplicative order ``p**n - 1`` modulo ``f``.

    That forces ``F_p[a]/f`` to be a field, so irreducibility comes for free.
    """
    if f.p != p or f.degree != n or not f.is_monic():
        return False
    if f.coeffs[0] == 0:
        return False
    order, exps = _group_exponents(p, n, factor_bound)
    if _use_kernel(p, n):
        arr = _to_array(f)
        alpha = np.zeros(n, dtype=np.int64)
        if n == 1:
            alpha[0] = (p - arr[0]) % p
        else:
            alpha[1] = 1

        def one(e):
            r = _kernels().powmod(alpha, e, arr, p)
            return r[0] == 1 % p and not r[1:].any()

    else:

        def one(e):
            return _alpha_power_is_one(f, e)

    return one(order) and not any(one(e) for e in exps)


def is_compatible(f: Polynomial, m: int, cache: ConwayCache | None = None) -> bool:
    """Does ``C_{p,m}`` vanish at ``a**r`` in ``F_p[a]/f``, ``r = (p^n-1)/(p^m-1)``?"""
    n, p = f.degree, f.p
    if m < 1 or n % m:
        raise FFAError(f"{m} does not divide {n}")
    if m == n:
        return True
    cache = cache if cache is not None else default_cache()
    g = cache.get(p, m)
    r = (p**n - 1) // (p**m - 1)
    root = poly_powmod(Polynomial((0, 1), p), r, f)
    return poly_compose_mod(g, root, f).is_zero()


def proper_divisors(n: int) -> list[int]:
    return [m for m in range(1, n) if n % m == 0]


def verify_conway(f: Polynomial, p: int, n: int, cache: ConwayCache | None = None) -> bool:
    """Primitivity and compatibility checks on a claimed C_{p,n} (not minimality)."""
    if f.p != p or f.degree != n or not f.is_monic():
        return False
    if n > 1 and not is_irreducible(f):
        return False
    cache = cache if cache is not None else default_cache()
    if not is_primitive(f, p, n, cache.factor_bound):
        return False
    return all(is_compatible(f, m, cache) for m in proper_divisors(n))


def search_conway(p: int, n: int, cache: ConwayCache) -> Polynomial:
    """Enumerate candidates in alt-sign order; see module docstring."""
    check_prime(p)
    if n < 1:
        raise FFAError(f"Conway polynomial degree must be positive, got {n}")
    divisors = proper_divisors(n)
    for m in divisors:
        cache.get(p, m)
    total = p**n
    limit = min(total, cache.search_budget)
    order, exps = _group_exponents(p, n, cache.factor_bound)
    use_kernel = _use_kernel(p, n)
    start = 0
    while start < limit:
        if use_kernel:
            idx = _kernels().first_primitive(p, n, order, exps, start, limit)
            if idx < 0:
                break
        else:
            idx = start
            if not is_primitive(candidate_at(idx, p, n), p, n, cache.factor_bound):
                start += 1
                continue
        f = candidate_at(idx, p, n)
        if all(is_compatible(f, m, cache) for m in divisors):
            log.debug("C_{%d,%d} found at candidate %d", p, n, idx)
            return f
        start = idx + 1
    if limit < total:
        raise ResourceError(
            f"Conway search for ({p}, {n}) exceeded budget of {cache.search_budget} candidates"
        )
    raise FFAError(f"no Conway polynomial found for ({p}, {n})")  # unreachable for prime p


class ConwayCache:
    """Memo table for Conway polynomials, optionally backed by a file.

    Reads may come from any thread; computation and file writes are
    serialized on one re-entrant lock (the search recurses into divisors).
    """

    def __init__(
        self,
        path: str | os.PathLike | None = None,
        search_budget: int = DEFAULT_SEARCH_BUDGET,
        factor_bound: int = DEFAULT_FACTOR_BOUND,
        autosave: bool = True,
    ):
        self.path = os.fspath(path) if path is not None else None
        self.search_budget = search_budget
        self.factor_bound = factor_bound
        self.autosave = autosave
        self._table: dict[tuple[int, int], Polynomial] = {}
        self._lock = threading.RLock()
        if self.path and os.path.exists(self.path):
            self.load()

    def __contains__(self, key):
        return key in self._table

    def __len__(self):
        return len(self._table)

    def keys(self):
        return sorted(self._table)

    def get(self, p: int, n: int) -> Polynomial:
        hit = self._table.get((p, n))
        if hit is not None:
            return hit
        with self._lock:
            hit = self._table.get((p, n))
            if hit is None:
                hit = search_conway(p, n, self)
                self._table[(p, n)] = hit
                if self.autosave and self.path:
                    self.save()
            return hit

    def load(self) -> None:
        entries = []
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    nums = [int(tok) for tok in line.split()]
                except ValueError:
                    raise ConwayCacheError(f"{self.path}:{lineno}: malformed entry") from None
                if len(nums) < 3:
                    raise ConwayCacheError(f"{self.path}:{lineno}: malformed entry")
                p, n, cs = nums[0], nums[1], nums[2:]
                if len(cs) != n + 1 or any(smod(c, p) != c for c in cs):
                    raise ConwayCacheError(f"{self.path}:{lineno}: coefficients not normalized")
                entries.append((lineno, p, n, Polynomial.make(cs, p)))
        with self._lock:
            for _, p, n, f in entries:
                self._table[(p, n)] = f
            for lineno, p, n, f in sorted(entries, key=lambda e: (e[1], e[2])):
                if not verify_conway(f, p, n, self):
                    del self._table[(p, n)]
                    raise ConwayCacheError(f"{self.path}:{lineno}: C_{{{p},{n}}} fails verification")

    def save(self) -> None:
        if not self.path:
            return
        with self._lock:
            lines = ["# smtffa Conway cache: p n c0 c1 ... cn\n"]
            for (p, n), f in sorted(self._table.items()):
                lines.append(" ".join(str(x) for x in (p, n, *f.coeffs)) + "\n")
            directory = os.path.dirname(os.path.abspath(self.path))
            fd, tmp = tempfile.mkstemp(dir=directory, prefix=".conway-", suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    fh.writelines(lines)
                os.replace(tmp, self.path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise


_default: ConwayCache | None = None
_default_lock = threading.Lock()


def default_cache() -> ConwayCache:
    """Process-wide cache; file-backed when ``$SMTFFA_CONWAY_CACHE`` is set."""
    global _default
    with _default_lock:
        if _default is None:
            _default = ConwayCache(os.environ.get(ENV_CACHE) or None)
        return _default


def set_default_cache(cache: ConwayCache | None) -> None:
    global _default
    with _default_lock:
        _default = cache


def conway_polynomial(p: int, n: int, cache: ConwayCache | None = None) -> Polynomial:
    """C_{p,n}, computed on first use and memoized."""
    cache = cache if cache is not None else default_cache()
    check_prime(p)
    return cache.get(p, n)


def format_entry(p: int, n: int, f: Polynomial) -> str:
    """Cache-file line for one entry, e.g. ``3 2 -1 -1 1``."""
    return " ".join(str(x) for x in (p, n, *f.coeffs))
