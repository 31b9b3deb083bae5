import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smtffa.errors import FFAError, SortError
from smtffa.field_core import (
    PrimeModulus,
    Residue,
    check_prime,
    egcd,
    inv_mod,
    is_probable_prime,
    res_div,
    res_recip,
    smod,
)

PRIMES = [2, 3, 5, 7, 11, 13, 101, 65537, 2**61 - 1]


def sieve(n):
    flags = bytearray([1]) * n
    flags[0:2] = b"\0\0"
    for i in range(2, int(n**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return flags


@pytest.mark.parametrize(
    "z,p,want",
    [(3, 5, -2), (4, 5, -1), (10, 5, 0), (2, 5, 2), (-3, 5, 2), (1, 2, 1), (-1, 2, 1), (2, 3, -1), (7, 7, 0)],
)
def test_smod_examples(z, p, want):
    assert smod(z, p) == want


@given(st.integers(), st.sampled_from(PRIMES))
def test_smod_range_and_congruence(z, p):
    r = smod(z, p)
    assert -((p - 1) // 2) <= r <= p // 2
    assert (r - z) % p == 0


@given(st.integers(min_value=-(10**30), max_value=10**30), st.integers(min_value=-(10**30), max_value=10**30))
def test_egcd_bezout(a, b):
    g, x, y = egcd(a, b)
    assert a * x + b * y == g
    assert g >= 0
    if a or b:
        assert a % g == 0 and b % g == 0


def test_inverse_exhaustive_small():
    for p in (2, 3, 5, 7, 11, 13):
        for a in range(p):
            inv = inv_mod(a, p)
            if a == 0:
                assert inv == 0
            else:
                assert a * inv % p == 1
                assert smod(inv, p) == inv


def test_inverse_non_coprime():
    with pytest.raises(ValueError):
        inv_mod(2, 4)


def test_mr_agrees_with_sieve_below_10k():
    flags = sieve(10**4)
    for n in range(2, 10**4):
        assert is_probable_prime(n) == bool(flags[n]), n


@pytest.mark.parametrize("n", [561, 1105, 1729, 2465, 2821, 6601, 8911, 3215031751, 2**64 + 1, (2**61 - 1) * (2**31 - 1)])
def test_mr_rejects_carmichael_and_products(n):
    assert not is_probable_prime(n)


@pytest.mark.parametrize("p", [2**61 - 1, 2**89 - 1, 2**127 - 1, 2**255 - 19, 2**521 - 1])
def test_mr_accepts_known_large_primes(p):
    assert is_probable_prime(p)


def test_mr_deterministic_witnesses():
    n = 2**127 - 1
    assert [is_probable_prime(n, 3) for _ in range(5)] == [True] * 5


def test_mr_argument_errors():
    with pytest.raises(FFAError):
        is_probable_prime(1)
    with pytest.raises(ValueError):
        is_probable_prime(7, 0)


@pytest.mark.parametrize("bad", [0, 1, 4, 9, 561, -7])
def test_check_prime_rejects(bad):
    with pytest.raises(SortError):
        check_prime(bad)


def test_paper_identities_in_f5():
    F = PrimeModulus(5)
    two, one, m1 = F.residue(2), F.residue(1), F.residue(-1)
    assert (two + one).value == -2
    assert (two * m1).value == -2
    assert ((two + one) * two).value == 1


def test_division_by_zero():
    for p in (5, 7):
        F = PrimeModulus(p)
        for a in F.elements():
            assert res_div(a, F.residue(0)).value == 0
        assert res_recip(F.residue(0)).value == 0


def test_mixed_moduli_rejected():
    with pytest.raises(SortError):
        Residue(1, PrimeModulus(5)) + Residue(1, PrimeModulus(7))
    with pytest.raises(TypeError):
        Residue(1, PrimeModulus(5)) + 1


def test_residue_normalizes():
    assert Residue(12, PrimeModulus(5)).value == 2
    assert [r.value for r in PrimeModulus(5).elements()] == [-2, -1, 0, 1, 2]


@settings(max_examples=200)
@given(st.integers(min_value=0, max_value=2**256), st.integers(), st.integers(), st.integers())
def test_axioms_random_prime(seed, a, b, c):
    rng = random.Random(seed)
    p = rng.choice(PRIMES)
    F = PrimeModulus(p)
    x, y, z = F.residue(a), F.residue(b), F.residue(c)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == F.residue(0)
    if x.value:
        assert x * res_recip(x) == F.residue(1)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_ops_match_unsigned_tables(p):
    from smtffa.field_core import res_add, res_mul, res_neg, res_sub

    F = PrimeModulus(p)
    for a, b in ((x, y) for x in range(p) for y in range(p)):
        ra, rb = F.residue(a), F.residue(b)
        assert res_add(ra, rb).value == smod((a + b) % p, p)
        assert res_mul(ra, rb).value == smod((a * b) % p, p)
        assert res_sub(ra, rb) == res_add(ra, res_neg(rb))
        assert res_div(ra, rb) == ra * res_recip(rb)
        inv = next((c for c in range(p) if b * c % p == 1), 0)
        assert res_div(ra, rb).value == smod(a * inv % p, p)


@given(st.integers(), st.sampled_from(PRIMES))
def test_smod_idempotent(z, p):
    assert smod(smod(z, p), p) == smod(z, p)


def test_pow():
    F = PrimeModulus(7)
    for a in F.elements():
        assert (a**6).value == (0 if a.value == 0 else 1)
        assert (a**0).value == 1
