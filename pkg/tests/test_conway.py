import itertools
import threading

import pytest

from smtffa import conway
from smtffa.conway import (
    ConwayCache,
    alt_sign_key,
    candidate_at,
    conway_polynomial,
    factorize,
    format_entry,
    is_primitive,
    verify_conway,
)
from smtffa.errors import ConwayCacheError, FFAError, ResourceError, SortError
from smtffa.poly import Polynomial, poly_divrem, poly_mulmod

# ascending coefficients from the standard published table
KNOWN = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (-1, -1, 1),
    (3, 3): (1, -1, 0, 1),
    (3, 6): (-1, -1, 1, 0, -1, 0, 1),
    (5, 1): (-2, 1),
    (5, 2): (2, -1, 1),
    (5, 3): (-2, -2, 0, 1),
    (7, 1): (-3, 1),
    (7, 4): (3, -3, -2, 0, 1),
    (11, 3): (-2, 2, 0, 1),
}


# ------------------------------------------------------------ brute-force oracle


def oracle_key(cs, p):
    n = len(cs) - 1
    return tuple(((-1) ** (n - k) * cs[k]) % p for k in range(n - 1, -1, -1))


def order_of_alpha(f):
    """Multiplicative order of a mod f by repeated multiplication; None if a^k never hits 1."""
    p, n = f.p, f.degree
    x = poly_divrem(Polynomial.make([0, 1], p), f)[1]
    acc = x
    for k in range(1, p**n):
        if acc.coeffs == (1,):
            return k
        acc = poly_mulmod(acc, x, f)
    return None


def oracle_conway(p, n, memo={}):
    if (p, n) in memo:
        return memo[(p, n)]
    q = p**n
    cands = [list(t) + [1] for t in itertools.product(range(p), repeat=n)]
    cands.sort(key=lambda cs: oracle_key(cs, p))
    for cs in cands:
        f = Polynomial.make(cs, p)
        if f.degree != n or order_of_alpha(f) != q - 1:
            continue
        ok = True
        for m in range(1, n):
            if n % m:
                continue
            g = oracle_conway(p, m)
            r = (q - 1) // (p**m - 1)
            x = Polynomial.make([0, 1], p)
            a_r = Polynomial.make([1], p)
            for _ in range(r):
                a_r = poly_mulmod(a_r, x, f)
            # g(a^r) by Horner
            val = Polynomial.make([], p)
            for c in reversed(g.coeffs + (0,) * (m + 1 - len(g.coeffs))):
                val = poly_divrem(val * a_r + Polynomial.make([c], p), f)[1]
            if val:
                ok = False
                break
        if ok:
            memo[(p, n)] = f
            return f
    raise AssertionError("no Conway polynomial")


# ------------------------------------------------------------------- tests


def test_paper_c32():
    assert conway_polynomial(3, 2).coeffs == (-1, -1, 1)
    assert str(conway_polynomial(3, 2)) == "a^2 - a - 1"


@pytest.mark.parametrize("pn", [(2, 2), (3, 2), (2, 3), (5, 2), (2, 4), (3, 3), (2, 6), (7, 2)])
def test_minimality_against_oracle(pn):
    assert conway_polynomial(*pn) == oracle_conway(*pn)


@pytest.mark.parametrize("pn,coeffs", sorted(KNOWN.items()))
def test_published_table(pn, coeffs):
    assert conway_polynomial(*pn).coeffs == coeffs


def test_candidate_order_matches_key():
    for p, n in [(2, 3), (3, 2), (5, 2)]:
        cands = [candidate_at(i, p, n) for i in range(p**n)]
        keys = [alt_sign_key(f) for f in cands]
        assert keys == sorted(keys)
        assert [oracle_key(list(f.coeffs) + [0] * (n + 1 - len(f.coeffs)), p) for f in cands] == sorted(
            oracle_key(list(f.coeffs) + [0] * (n + 1 - len(f.coeffs)), p) for f in cands
        )
        assert len(set(cands)) == p**n


def test_alt_sign_key_requires_monic():
    with pytest.raises(FFAError):
        alt_sign_key(Polynomial.make([1, 2], 5))


def test_is_primitive_vs_order():
    for p, n in [(2, 4), (3, 2), (5, 2)]:
        for i in range(p**n):
            f = candidate_at(i, p, n)
            assert is_primitive(f, p, n) == (order_of_alpha(f) == p**n - 1), f


def test_factorize():
    assert factorize(2**16 - 1) == {3: 1, 5: 1, 17: 1, 257: 1}
    assert factorize(3**6 - 1) == {2: 3, 7: 1, 13: 1}
    assert factorize(1) == {}
    big = (2**61 - 1) * 3
    assert factorize(big) == {3: 1, 2**61 - 1: 1}


def test_factorization_budget():
    hard = (10**6 + 3) * (10**6 + 33)
    with pytest.raises(ResourceError):
        factorize(hard, bound=10**3)


def test_search_budget_is_resource_error():
    with pytest.raises(ResourceError):
        conway_polynomial(7, 6, ConwayCache(search_budget=5))


def test_composite_characteristic():
    with pytest.raises(SortError):
        conway_polynomial(4, 2)


def test_verify_conway():
    assert verify_conway(conway_polynomial(3, 6), 3, 6)
    assert not verify_conway(Polynomial.make([1, 0, 1], 3), 3, 2)
    assert not verify_conway(Polynomial.make([0, 0, 1], 3), 3, 2)
    # primitive polynomials that are not first in the order still verify;
    # minimality is the search's job
    assert verify_conway(Polynomial.make([-1, 1, 1], 3), 3, 2)
    # over F_3 every primitive quadratic is compatible with C_{3,1} = a + 1
    prims = [f for f in (candidate_at(i, 3, 2) for i in range(9)) if is_primitive(f, 3, 2)]
    assert len(prims) == 2 and all(verify_conway(f, 3, 2) for f in prims)
    # a primitive sextic over F_2 that is not compatible with C_{2,2} and C_{2,3}
    sextics = [candidate_at(i, 2, 6) for i in range(64)]
    prim6 = [f for f in sextics if is_primitive(f, 2, 6)]
    assert any(not verify_conway(f, 2, 6) for f in prim6)


def test_format_entry():
    assert format_entry(3, 2, conway_polynomial(3, 2)) == "3 2 -1 -1 1"
    assert format_entry(2, 1, conway_polynomial(2, 1)) == "2 1 1 1"


def test_cache_file_round_trip(tmp_path):
    path = tmp_path / "c.txt"
    c = ConwayCache(path)
    c.get(3, 6)
    assert (3, 2) in c and (3, 3) in c and (3, 1) in c
    text = path.read_text()
    assert text.startswith("#")
    assert "3 2 -1 -1 1\n" in text
    c2 = ConwayCache(path)
    assert c2.keys() == c.keys()
    assert c2.get(3, 6) == c.get(3, 6)


@pytest.mark.parametrize(
    "body",
    ["3 2 -1 -1\n", "3 2 x 1 1\n", "3 2 1 1 1\n", "3 2 2 -1 1\n", "3\n"],
)
def test_cache_corruption(tmp_path, body):
    path = tmp_path / "c.txt"
    path.write_text("# header\n" + body)
    with pytest.raises(ConwayCacheError, match=r"c\.txt:2"):
        ConwayCache(path)


def test_cache_concurrent_get():
    c = ConwayCache()
    out = []
    ts = [threading.Thread(target=lambda: out.append(c.get(2, 12))) for _ in range(4)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    assert len(set(out)) == 1
    assert out[0] == ConwayCache().get(2, 12)


def test_default_cache_uses_env(tmp_path, monkeypatch):
    path = tmp_path / "env.txt"
    monkeypatch.setenv(conway.ENV_CACHE, str(path))
    conway.set_default_cache(None)
    conway_polynomial(5, 2)
    assert "5 2 2 -1 1" in path.read_text()


def test_large_prime_degree_one():
    p = 2**61 - 1
    f = conway_polynomial(p, 1)
    assert f.degree == 1
    assert verify_conway(f, p, 1)
