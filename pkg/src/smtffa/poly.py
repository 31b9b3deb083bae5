"""Dense univariate polynomials over F_p with signed coefficients.

``Polynomial((c0, c1, ..., cd), p)`` is ``c0 + c1*a + ... + cd*a**d``.
Coefficients are kept in the signed range of ``p`` and the tuple never ends
in a zero, so the zero polynomial is ``()``.  Arithmetic here does not reduce
modulo anything; :mod:`smtffa.field` layers the Conway reduction on top.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import FFAError, SortError
from .field_core import check_prime, inv_mod, smod


def _trim(cs: list[int]) -> tuple[int, ...]:
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[int, ...]
    p: int

    @classmethod
    def make(cls, coeffs: Iterable[int], p: int) -> Polynomial:
        check_prime(p)
        return cls(_trim([smod(c, p) for c in coeffs]), p)

    @classmethod
    def monomial(cls, k: int, p: int, c: int = 1) -> Polynomial:
        return cls.make([0] * k + [c], p)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lead == 1

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        return poly_add(self, other)

    def __sub__(self, other):
        return poly_sub(self, other)

    def __neg__(self):
        return poly_neg(self)

    def __mul__(self, other):
        return poly_mul(self, other)

    def __divmod__(self, other):
        return poly_divrem(self, other)

    def __mod__(self, other):
        return poly_divrem(self, other)[1]

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return smod(acc, self.p)

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            body = "a" if k == 1 else f"a^{k}" if k else ""
            if not body:
                body = str(mag)
            elif mag != 1:
                body = f"{mag}*{body}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _check(f: Polynomial, g: Polynomial) -> int:
    if f.p != g.p:
        raise SortError(f"polynomials over F_{f.p} and F_{g.p}")
    return f.p


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    p = _check(f, g)
    a, b = f.coeffs, g.coeffs
    if len(a) < len(b):
        a, b = b, a
    cs = list(a)
    for i, c in enumerate(b):
        cs[i] = smod(cs[i] + c, p)
    return Polynomial(_trim(cs), p)


def poly_neg(f: Polynomial) -> Polynomial:
    return Polynomial(tuple(smod(-c, f.p) for c in f.coeffs), f.p)


def poly_sub(f: Polynomial, g: Polynomial) -> Polynomial:
    return poly_add(f, poly_neg(g))


def poly_scale(f: Polynomial, c: int) -> Polynomial:
    return Polynomial(_trim([smod(c * x, f.p) for x in f.coeffs]), f.p)


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    p = _check(f, g)
    a, b = f.coeffs, g.coeffs
    if not a or not b:
        return Polynomial((), p)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return Polynomial(_trim([smod(c, p) for c in out]), p)


def poly_divrem(f: Polynomial, g: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Long division: ``f == q*g + r`` with ``deg r < deg g``."""
    p = _check(f, g)
    if not g.coeffs:
        raise FFAError("polynomial division by zero")
    dg = g.degree
    r = list(f.coeffs)
    if len(r) <= dg:
        return Polynomial((), p), f
    q = [0] * (len(r) - dg)
    inv_lead = inv_mod(g.lead, p)
    gc = g.coeffs
    for k in range(len(r) - 1, dg - 1, -1):
        c = smod(r[k] * inv_lead, p)
        if c == 0:
            continue
        q[k - dg] = c
        shift = k - dg
        for i, y in enumerate(gc):
            r[shift + i] = smod(r[shift + i] - c * y, p)
    return Polynomial(_trim(q), p), Polynomial(_trim(r[:dg]), p)


def poly_mod(f: Polynomial, m: Polynomial) -> Polynomial:
    return poly_divrem(f, m)[1]


def poly_monic(f: Polynomial) -> Polynomial:
    if not f.coeffs:
        return f
    return poly_scale(f, inv_mod(f.lead, f.p))


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd (zero if both inputs are zero)."""
    while g.coeffs:
        f, g = g, poly_mod(f, g)
    return poly_monic(f)


def poly_mulmod(f: Polynomial, g: Polynomial, m: Polynomial) -> Polynomial:
    return poly_mod(poly_mul(f, g), m)


def poly_powmod(f: Polynomial, e: int, m: Polynomial) -> Polynomial:
    """``f**e mod m`` by repeated squaring."""
    if e < 0:
        raise ValueError("negative exponent")
    result = poly_mod(Polynomial.make([1], f.p), m)
    base = poly_mod(f, m)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, m)
        e >>= 1
        if e:
            base = poly_mulmod(base, base, m)
    return result


def poly_inverse(f: Polynomial, m: Polynomial) -> Polynomial:
    """Inverse of ``f`` modulo ``m`` by extended Euclid; zero maps to zero."""
    p = _check(f, m)
    f = poly_mod(f, m)
    if not f.coeffs:
        return f
    r0, r1 = m, f
    s0, s1 = Polynomial((), p), Polynomial((1,), p)
    while r1.coeffs:
        q, r = poly_divrem(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
    if r0.degree != 0:
        raise FFAError(f"{f} is not invertible modulo {m}")
    return poly_mod(poly_scale(s0, inv_mod(r0.lead, p)), m)


def poly_compose_mod(g: Polynomial, h: Polynomial, m: Polynomial) -> Polynomial:
    """``g(h) mod m`` by Horner's rule."""
    acc = Polynomial((), g.p)
    for c in reversed(g.coeffs):
        acc = poly_add(poly_mulmod(acc, h, m), Polynomial.make([c], g.p))
    return acc


def is_irreducible(f: Polynomial) -> bool:
    """Distinct-degree test: ``gcd(f, a**(p**k) - a) == 1`` for ``k <= deg/2``."""
    d = f.degree
    if d < 1:
        raise FFAError("irreducibility is undefined for constant polynomials")
    if d == 1:
        return True
    p = f.p
    f = poly_monic(f)
    x = Polynomial((0, 1), p)
    h = x
    for _ in range(d // 2):
        h = poly_powmod(h, p, f)
        if poly_gcd(f, poly_sub(h, x)).degree != 0:
            return False
    return True
