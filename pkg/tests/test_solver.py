import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smtffa.errors import CommandError
from smtffa.field import FieldSort, ext_div, ext_recip
from smtffa.interop import FuzzParams, fuzz_generate
from smtffa.parser import parse
from smtffa.solver import (
    SAT,
    UNKNOWN,
    UNSAT,
    Session,
    check_sat,
    eval_term,
    get_value,
    naive_check_sat,
    preprocess,
    recip_constraint,
    recip_constraint_disjunctive,
    search_space,
    variable_order,
)
from smtffa.terms import Apply, Const, children, free_constants

SORTS = [FieldSort(2), FieldSort(3), FieldSort(5), FieldSort(7), FieldSort(3, 2)]
HEAD = "(set-logic QF_FFA)\n(define-sort F () (_ FiniteField 5))\n"


def script(body, head=HEAD):
    return parse(head + body)


@pytest.mark.parametrize("sort", SORTS, ids=str)
def test_encodings_exhaustive(sort):
    z, x = Const("z", sort), Const("x", sort)
    plain = recip_constraint(z, x)
    disj = recip_constraint_disjunctive(z, x)
    recip_term = Apply("ff.recip", (x,), sort)
    for zv, xv in itertools.product(list(sort.elements()), repeat=2):
        env = {"z": zv, "x": xv}
        truth = zv == ext_recip(xv)
        assert eval_term(recip_term, env) == ext_recip(xv)
        assert eval_term(plain, env) is truth
        assert eval_term(disj, env) is truth


@pytest.mark.parametrize("sort", [FieldSort(5), FieldSort(7), FieldSort(3, 2)], ids=str)
def test_division_by_zero_semantics(sort):
    zero = sort.zero()
    assert ext_recip(zero) == zero
    for a in sort.elements():
        assert ext_div(a, zero) == zero


def test_paper_example_unsat(data_path):
    with open(data_path("example_unsat.smt2")) as fh:
        s = parse(fh.read())
    assert check_sat(s).verdict == UNSAT
    assert naive_check_sat(s).verdict == UNSAT


def test_paper_example_sat_model(data_path):
    with open(data_path("example_sat.smt2")) as fh:
        s = parse(fh.read())
    r = check_sat(s)
    assert r.verdict == SAT
    assert list(r.model) == ["x0", "x1", "x2"]
    assert all(eval_term(a, r.model.values) is True for a in s.assertions())


def test_oracle_solution_set(data_path):
    """Every solution of the sat variant, listed by brute force."""
    with open(data_path("example_sat.smt2")) as fh:
        s = parse(fh.read())
    F = FieldSort(5)
    sols = []
    for x0, x1, x2 in itertools.product(range(5), repeat=3):
        inv = pow(x1, 3, 5)  # x^(p-2), and 0 -> 0
        if (x1 * x2 - x1 - x2) % 5 == 0 and inv == x0 and (x2 - x0 - 2) % 5 == 0:
            sols.append((x0, x1, x2))
    r = check_sat(s)
    got = tuple(r.model[n].value % 5 for n in ("x0", "x1", "x2"))
    assert got in sols
    assert len(sols) >= 1 and F.order == 5


def test_two_x_equals_one():
    r = check_sat(script("(declare-fun x () F)(assert (= (ff.mul (as ff2 F) x) (as ff1 F)))"))
    assert r.verdict == SAT and r.model["x"].value == -2


def test_recip_of_zero_only_zero():
    s = script("(declare-fun x () F)(assert (= (ff.recip x) (as ff0 F)))")
    r = check_sat(s)
    assert r.verdict == SAT and r.model["x"].is_zero
    s = script("(declare-fun x () F)(assert (= (ff.div (as ff1 F) x) (as ff0 F)))(assert (distinct x (as ff0 F)))")
    assert check_sat(s).verdict == UNSAT


def test_preprocess_removes_reciprocals():
    s = script("(declare-fun x () F)(declare-fun y () F)(assert (= (ff.div x y) (ff.recip y)))")
    pre = preprocess(s)
    names = [n for n, _ in pre.fresh]
    assert names == ["recip!0"]  # shared by both occurrences of y

    def no_recip(t):
        if isinstance(t, Apply):
            assert t.op not in ("ff.div", "ff.recip")
        for c in children(t):
            no_recip(c)

    for a in pre.assertions():
        no_recip(a)
        for c in free_constants(a):
            assert c.name in ("x", "y", "recip!0")
    assert preprocess(pre) is pre
    assert check_sat(s).verdict == naive_check_sat(s).verdict


def test_fresh_name_avoids_user_symbols():
    s = script("(declare-fun |recip!0| () F)(assert (= (ff.recip |recip!0|) (as ff2 F)))")
    pre = preprocess(s)
    assert pre.fresh[0][0] != "recip!0"
    r = check_sat(s)
    assert r.verdict == SAT and r.model["recip!0"].value == -2


def test_budget_gives_unknown():
    s = script("(declare-fun x () F)(declare-fun y () F)(assert (= x y))")
    assert search_space(s) == 25
    r = check_sat(s, budget=24)
    assert r.verdict == UNKNOWN and "budget" in r.reason
    assert check_sat(s, budget=25).verdict == SAT


def test_unused_constant_defaults_to_zero():
    s = script("(declare-fun x () F)(declare-fun y () F)(assert (= x (as ff1 F)))")
    r = check_sat(s)
    assert r.model["y"].is_zero and r.model["x"].value == 1


def test_ground_assertions():
    assert check_sat(script("(assert false)")).verdict == UNSAT
    assert check_sat(script("(assert (= (ff.recip (as ff0 F)) (as ff0 F)))")).verdict == SAT


def test_extension_field_solving():
    head = "(set-logic QF_FFA)\n(define-sort G () (_ FiniteField 3 2))\n"
    s = script("(declare-fun x () G)(assert (= (ff.mul x x) (as ff-1 G)))", head)
    r = check_sat(s)
    assert r.verdict == SAT
    x = r.model["x"]
    assert (x * x).coeffs == (-1,)
    s = script("(declare-fun x () G)(assert (= (ff.mul x x x x x x x x) (as ff-1 G)))", head)
    assert check_sat(s).verdict == UNSAT


FUZZ = FuzzParams(max_constants=3, sorts=((2, 1), (3, 1), (5, 1), (3, 2)), max_assertions=4)


@pytest.mark.parametrize("seed", range(150))
def test_agrees_with_naive_oracle(seed):
    s = parse(fuzz_generate(seed, FUZZ))
    fast, slow = check_sat(s), naive_check_sat(s)
    assert fast.verdict == slow.verdict
    if fast.verdict == SAT:
        assert all(eval_term(a, fast.model.values) is True for a in s.assertions())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.randoms(use_true_random=False))
def test_verdict_independent_of_order(seed, rnd):
    s = parse(fuzz_generate(seed, FUZZ))
    pre = preprocess(s)
    order = variable_order(pre.assertions(), dict(pre.fresh))
    shuffled = list(order)
    rnd.shuffle(shuffled)
    assert check_sat(s, var_order=shuffled).verdict == check_sat(s).verdict


def test_variable_order_places_fresh_after_argument():
    s = script("(declare-fun a () F)(declare-fun b () F)(assert (= (ff.recip (ff.add a b)) a))")
    pre = preprocess(s)
    order = variable_order(pre.assertions(), dict(pre.fresh))
    assert order.index("recip!0") > max(order.index("a"), order.index("b"))


def test_get_value():
    s = script("(declare-fun x () F)(assert (= x (as ff3 F)))")
    r = check_sat(s)
    terms = [Const("x", FieldSort(5)), Apply("ff.mul", (Const("x", FieldSort(5)),) * 2, FieldSort(5))]
    vals = get_value(terms, r.model)
    assert [v.value for _, v in vals] == [-2, -1]
    with pytest.raises(CommandError):
        get_value(terms, None)


def test_session_commands(data_path):
    with open(data_path("example_sat.smt2")) as fh:
        s = parse(fh.read())
    sess = Session()
    out = [o for o in (sess.execute(c) for c in s.commands) if o is not None]
    assert out[0] == "sat"
    assert out[1].startswith("(\n  (define-fun x0 () (_ FiniteField 5) (_ ff2 5))")
    assert out[2] == "((x1 (_ ff-2 5)) ((ff.mul x1 x0) (_ ff1 5)))"


def test_session_get_model_requires_sat():
    s = script("(declare-fun x () F)(assert (distinct x x))(check-sat)(get-model)")
    sess = Session()
    assert sess.execute(s.commands[0]) is None
    outs = []
    with pytest.raises(CommandError):
        for c in s.commands[1:]:
            outs.append(sess.execute(c))
    assert "unsat" in outs


def test_session_incremental_assertions():
    s = script("(declare-fun x () F)(assert (= x x))(check-sat)(assert (distinct x x))(check-sat)(exit)(check-sat)")
    sess = Session()
    outs = [o for o in map(sess.execute, s.commands) if o is not None]
    assert outs == ["sat", "unsat"]


def test_random_polynomial_systems_against_oracle():
    rng = random.Random(7)
    for _ in range(40):
        p = rng.choice([2, 3, 5, 7])
        k = rng.randint(1, 3)
        names = [f"v{i}" for i in range(k)]
        decls = "".join(f"(declare-fun {n} () (_ FiniteField {p}))" for n in names)
        eqs = []
        for _ in range(rng.randint(1, 3)):
            a, b = rng.choice(names), rng.choice(names)
            c = rng.randrange(p)
            op = rng.choice(["ff.mul", "ff.add", "ff.div", "ff.sub"])
            eqs.append(f"(assert (= ({op} {a} {b}) (_ ff{c} {p})))")
        s = parse("(set-logic QF_FFA)" + decls + "".join(eqs))
        assert check_sat(s).verdict == naive_check_sat(s).verdict
