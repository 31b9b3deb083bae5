"""Prime-field arithmetic in the signed representation.

Elements of F_p are the integers ``-(p-1)//2, ..., p//2``.  Every operation
is ordinary integer arithmetic followed by :func:`smod`.  Reciprocal and
division are total: the reciprocal of zero is zero.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass

from .errors import FFAError, SortError

DEFAULT_MR_ROUNDS = 40

_TRIAL_LIMIT = 1 << 16


def smod(z: int, p: int) -> int:
    """Map ``z`` to the unique signed representative of its class mod ``p``."""
    r = z % p
    if r > p >> 1:
        r -= p
    return r


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b)``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def inv_mod(a: int, p: int) -> int:
    """Signed inverse of ``a`` modulo prime ``p``; ``inv_mod(0, p) == 0``."""
    a %= p
    if a == 0:
        return 0
    g, x, _ = egcd(a, p)
    if g != 1:
        raise ValueError(f"{a} is not invertible modulo {p}")
    return smod(x, p)


@functools.lru_cache(maxsize=None)
def _small_primes(limit: int = _TRIAL_LIMIT) -> tuple[int, ...]:
    sieve = bytearray([1]) * limit
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return tuple(i for i in range(limit) if sieve[i])


def is_probable_prime(p: int, rounds: int = DEFAULT_MR_ROUNDS) -> bool:
    """Miller-Rabin with ``rounds`` witnesses.

    ``False`` means ``p`` is certainly composite.  Below 2**16 the answer is
    exact (trial division).  Witnesses come from a generator seeded with
    ``p`` itself, so the verdict for a given ``(p, rounds)`` is reproducible.
    """
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    if p < 2:
        raise FFAError(f"primality is undefined for {p}")
    for q in _small_primes():
        if q * q > p:
            return True
        if p % q == 0:
            return p == q

    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = random.Random(p)
    for _ in range(rounds):
        a = rng.randrange(2, p - 1)
        x = pow(a, d, p)
        if x == 1 or x == p - 1:
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@functools.lru_cache(maxsize=4096)
def _checked(p: int, rounds: int) -> bool:
    return is_probable_prime(p, rounds)


def check_prime(p: int, rounds: int | None = None) -> int:
    """Validate ``p`` as a field characteristic and return it.

    Raises :class:`SortError` for anything that fails the primality test,
    including 0 and 1.  Results are cached, so repeated sort construction
    does not re-run Miller-Rabin.
    """
    if rounds is None:
        rounds = DEFAULT_MR_ROUNDS
    if not isinstance(p, int) or p < 2 or not _checked(p, rounds):
        raise SortError(f"finite field index {p} is not prime")
    return p


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self):
        check_prime(self.p)

    def __int__(self):
        return self.p

    def residue(self, z: int) -> Residue:
        return Residue(smod(z, self.p), self)

    def elements(self) -> list[Residue]:
        lo = -((self.p - 1) // 2)
        return [Residue(v, self) for v in range(lo, self.p // 2 + 1)]


@dataclass(frozen=True)
class Residue:
    """An element of F_p. Build through :meth:`PrimeModulus.residue`."""

    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        object.__setattr__(self, "value", smod(self.value, self.modulus.p))

    @property
    def p(self) -> int:
        return self.modulus.p

    def _same(self, other: Residue) -> int:
        if not isinstance(other, Residue):
            raise TypeError(f"cannot combine Residue with {type(other).__name__}")
        if other.modulus != self.modulus:
            raise SortError(f"operands over F_{self.p} and F_{other.p}")
        return self.p

    def __add__(self, other):
        return res_add(self, other)

    def __sub__(self, other):
        return res_sub(self, other)

    def __mul__(self, other):
        return res_mul(self, other)

    def __truediv__(self, other):
        return res_div(self, other)

    def __neg__(self):
        return res_neg(self)

    def __pow__(self, e):
        return res_pow(self, e)

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Residue({self.value} mod {self.p})"


def res_add(a: Residue, b: Residue) -> Residue:
    p = a._same(b)
    return Residue(smod(a.value + b.value, p), a.modulus)


def res_sub(a: Residue, b: Residue) -> Residue:
    p = a._same(b)
    return Residue(smod(a.value - b.value, p), a.modulus)


def res_mul(a: Residue, b: Residue) -> Residue:
    p = a._same(b)
    return Residue(smod(a.value * b.value, p), a.modulus)


def res_neg(a: Residue) -> Residue:
    # p = 2 has range {0, 1}; plain sign flip would leave it.
    return Residue(smod(-a.value, a.p), a.modulus)


def res_recip(a: Residue) -> Residue:
    return Residue(inv_mod(a.value, a.p), a.modulus)


def res_div(a: Residue, b: Residue) -> Residue:
    a._same(b)
    return res_mul(a, res_recip(b))


def res_pow(a: Residue, e: int) -> Residue:
    """Square-and-multiply; ``a ** 0 == 1`` even for ``a == 0``."""
    if e < 0:
        raise ValueError("negative exponent")
    p = a.p
    result, base = 1, a.value
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return Residue(smod(result, p), a.modulus)
