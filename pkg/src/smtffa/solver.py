"""Desk-scale QF_FFA decision procedure.

Pipeline: :func:`preprocess` removes ``ff.div``/``ff.recip`` by introducing
fresh constants constrained with the reciprocal-free encoding
``z*z*x = z  and  z*x*x = x``; :func:`check_sat` then runs a depth-first
enumeration of all constants, checking each assertion as soon as its last
constant is assigned.  When the assignment space exceeds the budget the
answer is ``unknown``, never a guess.

:func:`eval_term` is the reference evaluator (zero convention for
reciprocal and division).  :func:`naive_check_sat` is an independent
oracle: no preprocessing, no pruning, evaluation of the original
assertions on every total assignment.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import CommandError, FFAError
from .field import (
    FieldElement,
    FieldSort,
    ext_add,
    ext_div,
    ext_mul,
    ext_neg,
    ext_recip,
    ext_sub,
)
from .field_core import inv_mod
from .normalizer import Model, print_literal, print_model
from .terms import (
    Apply,
    Assert,
    BoolConnective,
    CheckSat,
    Const,
    DeclareFun,
    DefineSort,
    Equality,
    Exit,
    GetModel,
    GetValue,
    Ite,
    Let,
    Literal,
    Script,
    SetInfo,
    SetLogic,
    SetOption,
    children,
    free_constants,
    print_term,
)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**7

SAT, UNSAT, UNKNOWN = "sat", "unsat", "unknown"


@dataclass
class SolveResult:
    verdict: str
    model: Model | None = None
    reason: str | None = None

    def __str__(self):
        return self.verdict


# ---------------------------------------------------------------- evaluation

_FIELD_OPS = {
    "ff.add": ext_add,
    "ff.sub": ext_sub,
    "ff.mul": ext_mul,
    "ff.div": ext_div,
}


def eval_term(t, assignment: Mapping[str, FieldElement]):
    """Evaluate ``t`` to a :class:`FieldElement` or ``bool``."""
    if isinstance(t, Literal):
        return t.value
    if isinstance(t, Const):
        try:
            return assignment[t.name]
        except KeyError:
            raise FFAError(f"no value for constant {t.name}") from None
    if isinstance(t, Apply):
        args = [eval_term(a, assignment) for a in t.args]
        if t.op == "ff.neg":
            return ext_neg(args[0])
        if t.op == "ff.recip":
            return ext_recip(args[0])
        acc = args[0]
        fn = _FIELD_OPS[t.op]
        for a in args[1:]:
            acc = fn(acc, a)
        return acc
    if isinstance(t, Equality):
        return eval_term(t.lhs, assignment) == eval_term(t.rhs, assignment)
    if isinstance(t, BoolConnective):
        k = t.kind
        if k == "true":
            return True
        if k == "false":
            return False
        if k == "not":
            return not eval_term(t.args[0], assignment)
        if k == "and":
            return all(eval_term(a, assignment) for a in t.args)
        if k == "or":
            return any(eval_term(a, assignment) for a in t.args)
        vals = [eval_term(a, assignment) for a in t.args]
        if k == "=>":
            out = vals[-1]
            for v in reversed(vals[:-1]):
                out = (not v) or out
            return out
        if k == "xor":
            out = vals[0]
            for v in vals[1:]:
                out = out != v
            return out
        raise FFAError(f"unknown connective {k}")
    if isinstance(t, Ite):
        branch = t.then if eval_term(t.cond, assignment) else t.else_
        return eval_term(branch, assignment)
    if isinstance(t, Let):
        inner = dict(assignment)
        for name, v in t.bindings:
            inner[name] = eval_term(v, assignment)
        return eval_term(t.body, inner)
    raise TypeError(f"not a term: {t!r}")


# ------------------------------------------------------------- preprocessing


def inline_lets(t, env: Mapping | None = None):
    """Substitute let-bound names; the result contains no :class:`Let`."""
    env = env or {}
    if isinstance(t, Const):
        return env.get(t.name, t)
    if isinstance(t, Literal):
        return t
    if isinstance(t, Let):
        inner = dict(env)
        for name, v in t.bindings:
            inner[name] = inline_lets(v, env)
        return inline_lets(t.body, inner)
    if isinstance(t, Apply):
        return Apply(t.op, tuple(inline_lets(a, env) for a in t.args), t.sort)
    if isinstance(t, BoolConnective):
        return BoolConnective(t.kind, tuple(inline_lets(a, env) for a in t.args))
    if isinstance(t, Equality):
        return Equality(inline_lets(t.lhs, env), inline_lets(t.rhs, env))
    if isinstance(t, Ite):
        return Ite(inline_lets(t.cond, env), inline_lets(t.then, env), inline_lets(t.else_, env))
    raise TypeError(f"not a term: {t!r}")


def recip_constraint(z, x):
    """``z = recip(x)`` without reciprocal or disjunction: ``zzx = z and zxx = x``."""
    s = x.sort
    zzx = Apply("ff.mul", (Apply("ff.mul", (z, z), s), x), s)
    zxx = Apply("ff.mul", (Apply("ff.mul", (z, x), s), x), s)
    return BoolConnective("and", (Equality(zzx, z), Equality(zxx, x)))


def recip_constraint_disjunctive(z, x):
    """``(x != 0 and x*z = 1) or (x = 0 and z = 0)``; kept for cross-checking."""
    s = x.sort
    zero, one = Literal(s.zero()), Literal(s.one())
    nonzero = BoolConnective(
        "and", (BoolConnective("not", (Equality(x, zero),)), Equality(Apply("ff.mul", (x, z), s), one))
    )
    is_zero = BoolConnective("and", (Equality(x, zero), Equality(z, zero)))
    return BoolConnective("or", (nonzero, is_zero))


class _Rewriter:
    def __init__(self, taken: set[str], encoding):
        self.taken = taken
        self.encoding = encoding
        self.memo: dict = {}
        self.fresh: list[tuple[str, object]] = []
        self.pending: list = []

    def name(self) -> str:
        k = len(self.fresh)
        while True:
            cand = f"recip!{k}"
            if cand not in self.taken:
                self.taken.add(cand)
                return cand
            k += 1

    def recip_of(self, x):
        z = self.memo.get(x)
        if z is None:
            z = Const(self.name(), x.sort)
            self.memo[x] = z
            self.fresh.append((z.name, x))
            self.pending.append(Assert(self.encoding(z, x)))
        return z

    def rewrite(self, t):
        if isinstance(t, (Const, Literal)):
            return t
        if isinstance(t, Apply):
            args = tuple(self.rewrite(a) for a in t.args)
            if t.op == "ff.recip":
                return self.recip_of(args[0])
            if t.op == "ff.div":
                return Apply("ff.mul", (args[0], self.recip_of(args[1])), t.sort)
            return Apply(t.op, args, t.sort)
        if isinstance(t, BoolConnective):
            return BoolConnective(t.kind, tuple(self.rewrite(a) for a in t.args))
        if isinstance(t, Equality):
            return Equality(self.rewrite(t.lhs), self.rewrite(t.rhs))
        if isinstance(t, Ite):
            return Ite(self.rewrite(t.cond), self.rewrite(t.then), self.rewrite(t.else_))
        raise TypeError(f"not a term: {t!r}")


def _has_reciprocal(t) -> bool:
    if isinstance(t, Apply) and t.op in ("ff.div", "ff.recip"):
        return True
    return any(_has_reciprocal(c) for c in children(t))


def preprocess(script: Script, encoding=recip_constraint) -> Script:
    """Eliminate ``ff.div`` and ``ff.recip`` from every assertion.

    ``ff.div a b`` becomes ``ff.mul a r`` and ``ff.recip x`` becomes ``r``,
    where ``r`` is a fresh constant (shared by identical arguments) whose
    defining constraint is asserted just before its first use.  Assertions
    without reciprocals are left untouched; get-value terms are left alone
    because they are evaluated directly against the model.
    """
    if script.preprocessed:
        return script
    taken = {c.name for c in script.declarations()}
    rw = _Rewriter(taken, encoding)
    out = []
    for c in script.commands:
        if isinstance(c, Assert) and _has_reciprocal(c.term):
            t = rw.rewrite(inline_lets(c.term))
            out.extend(rw.pending)
            rw.pending = []
            out.append(Assert(t))
        else:
            out.append(c)
    return Script(script.logic, tuple(out), script.typed, preprocessed=True, fresh=tuple(rw.fresh))


# ---------------------------------------------------------------- compilation


def _compile(t, slot: Mapping[str, int]):
    """Closure ``env -> value``; prime-field values are plain signed ints."""
    if isinstance(t, Literal):
        v = t.value.value if t.sort.n == 1 else t.value
        return lambda env: v
    if isinstance(t, Const):
        i = slot[t.name]
        return lambda env: env[i]
    if isinstance(t, Apply):
        fs = [_compile(a, slot) for a in t.args]
        s = t.sort
        if s.n == 1:
            p, half = s.p, s.p >> 1

            def norm(r):
                return r - p if r > half else r

            if t.op == "ff.neg":
                (f,) = fs
                return lambda env: norm(-f(env) % p)
            if t.op == "ff.recip":
                (f,) = fs
                return lambda env: inv_mod(f(env), p)
            f, g = fs[0], fs[1]
            if t.op == "ff.add":
                return lambda env: norm((f(env) + g(env)) % p)
            if t.op == "ff.sub":
                return lambda env: norm((f(env) - g(env)) % p)
            if t.op == "ff.mul":
                return lambda env: norm(f(env) * g(env) % p)
            if t.op == "ff.div":
                return lambda env: norm(f(env) * inv_mod(g(env), p) % p)
        else:
            if t.op == "ff.neg":
                (f,) = fs
                return lambda env: ext_neg(f(env))
            if t.op == "ff.recip":
                (f,) = fs
                return lambda env: ext_recip(f(env))
            fn = _FIELD_OPS[t.op]
            f, g = fs[0], fs[1]
            return lambda env: fn(f(env), g(env))
        raise FFAError(f"unknown operator {t.op}")
    if isinstance(t, Equality):
        f, g = _compile(t.lhs, slot), _compile(t.rhs, slot)
        return lambda env: f(env) == g(env)
    if isinstance(t, BoolConnective):
        k = t.kind
        fs = [_compile(a, slot) for a in t.args]
        if k == "true":
            return lambda env: True
        if k == "false":
            return lambda env: False
        if k == "not":
            (f,) = fs
            return lambda env: not f(env)
        if k == "and":
            return lambda env: all(f(env) for f in fs)
        if k == "or":
            return lambda env: any(f(env) for f in fs)
        if k == "=>":
            f, g = fs
            return lambda env: (not f(env)) or g(env)
        if k == "xor":
            f, g = fs
            return lambda env: f(env) != g(env)
        raise FFAError(f"unknown connective {k}")
    if isinstance(t, Ite):
        c, f, g = (_compile(x, slot) for x in (t.cond, t.then, t.else_))
        return lambda env: f(env) if c(env) else g(env)
    if isinstance(t, Let):
        return _compile(inline_lets(t), slot)
    raise TypeError(f"not a term: {t!r}")


def _domain(sort: FieldSort) -> list:
    if sort.n == 1:
        return [e.value for e in sort.elements()]
    return list(sort.elements())


def _lift(sort: FieldSort, v) -> FieldElement:
    return sort.element(v) if sort.n == 1 else v


# ---------------------------------------------------------------- search


def variable_order(assertions: Sequence, fresh: Mapping[str, object]) -> list[str]:
    """Constants in first-use order, each fresh constant after its argument's."""
    order: list[str] = []
    placed: set[str] = set()

    def visit(t):
        for c in free_constants(t):
            if c.name in placed:
                continue
            if c.name in fresh:
                visit(fresh[c.name])
            if c.name not in placed:
                placed.add(c.name)
                order.append(c.name)

    for a in assertions:
        visit(a)
    return order


def search_space(script: Script) -> int:
    """Number of total assignments over the declared constants the assertions use."""
    used = set()
    for a in script.assertions():
        used.update(c.name for c in free_constants(a))
    return math.prod(d.sort.order for d in script.declarations() if d.name in used)


def check_sat(
    script: Script, budget: int = DEFAULT_BUDGET, var_order: Sequence[str] | None = None
) -> SolveResult:
    """Decide the conjunction of the script's assertions.

    ``var_order`` overrides the enumeration order of the (preprocessed)
    constants; verdicts do not depend on it.
    """
    original = script
    script = preprocess(script)
    decls = {d.name: d.sort for d in script.declarations()}
    fresh = dict(script.fresh)
    sorts = dict(decls)
    sorts.update({name: arg.sort for name, arg in script.fresh})
    assertions = script.assertions()

    space = search_space(original)
    if space > budget:
        return SolveResult(UNKNOWN, reason=f"budget: {space} assignments exceed {budget}")

    order = list(var_order) if var_order is not None else variable_order(assertions, fresh)
    needed = {c.name for a in assertions for c in free_constants(a)}
    order = [v for v in order if v in needed]
    missing = needed - set(order)
    if missing:
        raise FFAError(f"variable order is missing {sorted(missing)}")
    slot = {name: i for i, name in enumerate(order)}

    by_level: list[list] = [[] for _ in order]
    for a in assertions:
        names = [c.name for c in free_constants(a)]
        f = _compile(a, slot)
        if not names:
            if not f([]):
                return SolveResult(UNSAT)
            continue
        by_level[max(slot[n] for n in names)].append(f)

    domains = [_domain(sorts[name]) for name in order]
    env = [None] * len(order)
    depth = len(order)

    def dfs(k: int) -> bool:
        if k == depth:
            return True
        checks = by_level[k]
        for v in domains[k]:
            env[k] = v
            if all(f(env) for f in checks) and dfs(k + 1):
                return True
        return False

    if not dfs(0):
        return SolveResult(UNSAT)

    values = {name: _lift(sorts[name], env[slot[name]]) for name in order}
    model = Model.from_pairs(
        (d.name, values.get(d.name, d.sort.zero())) for d in original.declarations()
    )
    for a in original.assertions():
        if eval_term(a, model.values) is not True:
            raise FFAError(f"internal error: model violates {print_term(a)}")
    return SolveResult(SAT, model)


def naive_check_sat(script: Script, budget: int = DEFAULT_BUDGET) -> SolveResult:
    """Reference oracle: evaluate the original assertions on every assignment."""
    decls = script.declarations()
    assertions = script.assertions()
    space = math.prod(d.sort.order for d in decls)
    if space > budget:
        return SolveResult(UNKNOWN, reason=f"budget: {space} assignments exceed {budget}")
    names = [d.name for d in decls]
    for combo in itertools.product(*(list(d.sort.elements()) for d in decls)):
        a = dict(zip(names, combo))
        if all(eval_term(t, a) for t in assertions):
            return SolveResult(SAT, Model.from_pairs(a.items()))
    return SolveResult(UNSAT)


def get_value(terms: Iterable, model: Model | None) -> list[tuple]:
    if model is None:
        raise CommandError("get-value requires a model from a sat check-sat")
    return [(t, eval_term(t, model.values)) for t in terms]


def print_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return print_literal(v)


# ---------------------------------------------------------------- sessions


@dataclass
class Session:
    """Runs a typed script command by command, like an SMT-LIB solver process."""

    budget: int = DEFAULT_BUDGET
    commands: list = field(default_factory=list)
    logic: str = "QF_FFA"
    last: SolveResult | None = None
    done: bool = False

    def current(self) -> Script:
        return Script(self.logic, tuple(self.commands), typed=True)

    def execute(self, c) -> str | None:
        """Run one command; returns the text to print, if any."""
        if self.done:
            return None
        if isinstance(c, SetLogic):
            self.logic = c.name
            self.commands.append(c)
        elif isinstance(c, (SetInfo, SetOption)):
            return None
        elif isinstance(c, (DeclareFun, DefineSort)):
            self.commands.append(c)
        elif isinstance(c, Assert):
            self.commands.append(c)
            self.last = None
        elif isinstance(c, CheckSat):
            self.last = check_sat(self.current(), self.budget)
            if self.last.verdict == UNKNOWN:
                log.info("check-sat: %s", self.last.reason)
            return self.last.verdict
        elif isinstance(c, GetModel):
            if self.last is None or self.last.model is None:
                raise CommandError("get-model requires a preceding sat check-sat")
            return print_model(self.last.model)
        elif isinstance(c, GetValue):
            model = self.last.model if self.last is not None else None
            pairs = get_value(c.terms, model)
            return "(" + " ".join(f"({print_term(t)} {print_value(v)})" for t, v in pairs) + ")"
        elif isinstance(c, Exit):
            self.done = True
        return None
