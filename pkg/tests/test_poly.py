import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from smtffa.errors import FFAError
from smtffa.poly import (
    Polynomial,
    is_irreducible,
    poly_divrem,
    poly_gcd,
    poly_inverse,
    poly_mulmod,
    poly_powmod,
)

P = st.sampled_from([2, 3, 5, 7])


def polys(p, max_deg=6):
    return st.lists(st.integers(), max_size=max_deg + 1).map(lambda cs: Polynomial.make(cs, p))


@st.composite
def poly_pair(draw):
    p = draw(P)
    return p, draw(polys(p)), draw(polys(p))


def monic(p, n):
    for tail in itertools.product(range(p), repeat=n):
        yield Polynomial.make(list(tail) + [1], p)


def brute_irreducible(f):
    """No monic factor of degree 1..n/2."""
    p, n = f.p, f.degree
    for d in range(1, n // 2 + 1):
        for g in monic(p, d):
            if not poly_divrem(f, g)[1]:
                return False
    return True


def test_make_trims_and_normalizes():
    f = Polynomial.make([4, 0, 5, 0], 5)
    assert f.coeffs == (-1,)
    assert f.degree == 0
    assert Polynomial.make([], 3).degree == -1


def test_str():
    assert str(Polynomial.make([-1, -1, 1], 3)) == "a^2 - a - 1"
    assert str(Polynomial.make([2, 0, 0, 1], 5)) == "a^3 + 2"
    assert str(Polynomial.make([], 5)) == "0"


@given(poly_pair())
def test_divrem_identity(args):
    p, f, g = args
    if not g:
        with pytest.raises(FFAError):
            poly_divrem(f, g)
        return
    q, r = poly_divrem(f, g)
    assert q * g + r == f
    assert r.degree < g.degree


@given(poly_pair())
def test_ring_laws(args):
    p, f, g = args
    assert f + g == g + f
    assert f * g == g * f
    assert f - f == Polynomial.make([], p)
    assert (f + g) * g == f * g + g * g


@given(poly_pair())
def test_gcd_divides(args):
    p, f, g = args
    d = poly_gcd(f, g)
    if d:
        assert d.is_monic()
        assert not (f % d) and not (g % d)


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (5, 3), (7, 2)])
def test_irreducible_matches_brute_force(p, n):
    for f in monic(p, n):
        assert is_irreducible(f) == brute_irreducible(f), f


def test_irreducible_counts():
    # number of monic irreducibles of degree 2 over F_p is (p^2 - p) / 2
    for p in (2, 3, 5, 7):
        assert sum(is_irreducible(f) for f in monic(p, 2)) == (p * p - p) // 2


def test_inverse_and_powmod():
    m = Polynomial.make([-1, -1, 1], 3)
    for cs in itertools.product(range(3), repeat=2):
        a = Polynomial.make(cs, 3)
        inv = poly_inverse(a, m)
        if a:
            assert poly_mulmod(a, inv, m).coeffs == (1,)
        else:
            assert not inv
    x = Polynomial.make([0, 1], 3)
    assert poly_powmod(x, 8, m).coeffs == (1,)
    assert poly_powmod(x, 4, m).coeffs == (-1,)


def test_inverse_needs_coprime():
    m = Polynomial.make([0, 0, 1], 3)
    with pytest.raises(FFAError):
        poly_inverse(Polynomial.make([0, 1], 3), m)


def test_evaluate():
    f = Polynomial.make([-1, -1, 1], 3)
    assert [f(x) for x in range(3)] == [-1, -1, 1]
