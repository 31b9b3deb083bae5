"""Finite field sorts and their elements.

A :class:`FieldSort` is ``(p, n)``; ``n == 1`` is the prime field.  Elements
of ``F_{p^n}`` are coefficient tuples ``(c0, ..., c_{k})`` of a polynomial in
``a`` of degree below ``n``, reduced modulo the Conway polynomial C_{p,n}.
Prime-field elements use the same type with at most one coefficient, which
is why ``ff1`` means one in every sort.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from . import conway
from .errors import FFAError, SortError
from .field_core import check_prime, inv_mod, smod
from .poly import Polynomial, poly_divrem, poly_inverse, poly_mul


@dataclass(frozen=True)
class FieldSort:
    p: int
    n: int = 1

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise SortError(f"finite field degree must be at least 1, got {self.n}")
        check_prime(self.p)

    @property
    def order(self) -> int:
        return self.p**self.n

    @property
    def is_prime_field(self) -> bool:
        return self.n == 1

    def context(self) -> ExtFieldContext:
        return _context(self.p, self.n)

    def element(self, coeffs) -> FieldElement:
        """Normalize any integer coefficient sequence (or a single int) into this sort."""
        if isinstance(coeffs, int):
            coeffs = (coeffs,)
        coeffs = list(coeffs)
        if len(coeffs) > self.n:
            raise SortError(
                f"{len(coeffs)} coefficients given for {self}, which allows at most {self.n}"
            )
        return FieldElement(self, _trim([smod(c, self.p) for c in coeffs]))

    def zero(self) -> FieldElement:
        return FieldElement(self, ())

    def one(self) -> FieldElement:
        return FieldElement(self, (1,))

    def elements(self):
        """Every element, zero first, in a fixed order."""
        p = self.p
        digits = [0]
        for k in range(1, p // 2 + 1):
            digits.append(k)
            if -k >= -((p - 1) // 2):
                digits.append(-k)
        for combo in itertools.product(digits, repeat=self.n):
            yield FieldElement(self, _trim(list(reversed(combo))))

    def __str__(self):
        if self.n == 1:
            return f"(_ FiniteField {self.p})"
        return f"(_ FiniteField {self.p} {self.n})"


@dataclass(frozen=True)
class ExtFieldContext:
    p: int
    n: int
    modulus: Polynomial


@functools.lru_cache(maxsize=None)
def _context(p: int, n: int) -> ExtFieldContext:
    if n == 1:
        return ExtFieldContext(p, 1, Polynomial.make([0, 1], p))
    f = conway.conway_polynomial(p, n)
    if f.degree != n or not f.is_monic():
        raise FFAError(f"bad modulus for F_{p}^{n}: {f}")
    return ExtFieldContext(p, n, f)


def _trim(cs: list[int]) -> tuple[int, ...]:
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class FieldElement:
    """Normalized element: signed coefficients, no trailing zeros, length <= n."""

    sort: FieldSort
    coeffs: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def value(self) -> int:
        """Signed integer value of a prime-subfield element."""
        if len(self.coeffs) > 1:
            raise FFAError(f"{self} is not in the prime subfield")
        return self.coeffs[0] if self.coeffs else 0

    def poly(self) -> Polynomial:
        return Polynomial(self.coeffs, self.sort.p)

    def __add__(self, other):
        return ext_add(self, other)

    def __sub__(self, other):
        return ext_sub(self, other)

    def __mul__(self, other):
        return ext_mul(self, other)

    def __truediv__(self, other):
        return ext_div(self, other)

    def __neg__(self):
        return ext_neg(self)

    def __repr__(self):
        body = ".".join(str(c) for c in self.coeffs) or "0"
        return f"ff{body}:{self.sort.p}^{self.sort.n}"


def _same(a: FieldElement, b: FieldElement) -> FieldSort:
    if a.sort != b.sort:
        raise SortError(f"operands of sorts {a.sort} and {b.sort}")
    return a.sort


def ext_add(a: FieldElement, b: FieldElement) -> FieldElement:
    s = _same(a, b)
    p = s.p
    x, y = a.coeffs, b.coeffs
    if len(x) < len(y):
        x, y = y, x
    cs = list(x)
    for i, c in enumerate(y):
        cs[i] = smod(cs[i] + c, p)
    return FieldElement(s, _trim(cs))


def ext_neg(a: FieldElement) -> FieldElement:
    p = a.sort.p
    return FieldElement(a.sort, tuple(smod(-c, p) for c in a.coeffs))


def ext_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    _same(a, b)
    return ext_add(a, ext_neg(b))


def ext_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    s = _same(a, b)
    if not a.coeffs or not b.coeffs:
        return s.zero()
    if s.n == 1:
        return FieldElement(s, _trim([smod(a.coeffs[0] * b.coeffs[0], s.p)]))
    prod = poly_mul(a.poly(), b.poly())
    _, r = poly_divrem(prod, s.context().modulus)
    return FieldElement(s, r.coeffs)


def ext_recip(a: FieldElement) -> FieldElement:
    """Multiplicative inverse, with the reciprocal of zero defined as zero."""
    s = a.sort
    if not a.coeffs:
        return a
    if s.n == 1:
        return FieldElement(s, (inv_mod(a.coeffs[0], s.p),))
    return FieldElement(s, poly_inverse(a.poly(), s.context().modulus).coeffs)


def ext_div(a: FieldElement, b: FieldElement) -> FieldElement:
    _same(a, b)
    return ext_mul(a, ext_recip(b))


def ext_pow(a: FieldElement, e: int) -> FieldElement:
    if e < 0:
        raise ValueError("negative exponent")
    result, base = a.sort.one(), a
    while e:
        if e & 1:
            result = ext_mul(result, base)
        e >>= 1
        if e:
            base = ext_mul(base, base)
    return result
