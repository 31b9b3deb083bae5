"""Sorted terms, commands and the SMT-LIB printer."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .field import FieldElement, FieldSort
from .normalizer import print_literal, print_sort


class BoolSort:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Bool"

    def __str__(self):
        return "Bool"

    def __reduce__(self):
        return (BoolSort, ())


BOOL = BoolSort()
Sort = Union[FieldSort, BoolSort]

FF_OPS = {
    # name: (min arity, max arity or None)
    "ff.add": (2, None),
    "ff.mul": (2, None),
    "ff.sub": (2, 2),
    "ff.div": (2, 2),
    "ff.neg": (1, 1),
    "ff.recip": (1, 1),
}
LEFT_ASSOC = {"ff.add", "ff.mul"}

BOOL_KINDS = ("true", "false", "not", "and", "or", "=>", "xor")


@dataclass(frozen=True)
class Literal:
    value: FieldElement

    @property
    def sort(self) -> FieldSort:
        return self.value.sort


@dataclass(frozen=True)
class Const:
    """A declared constant, a let-bound name, or a fresh preprocessing constant."""

    name: str
    sort: Sort


@dataclass(frozen=True)
class Apply:
    op: str
    args: tuple
    sort: FieldSort


@dataclass(frozen=True)
class BoolConnective:
    kind: str
    args: tuple = ()

    sort = BOOL


@dataclass(frozen=True)
class Equality:
    lhs: "Term"
    rhs: "Term"

    sort = BOOL


@dataclass(frozen=True)
class Ite:
    cond: "Term"
    then: "Term"
    else_: "Term"

    @property
    def sort(self) -> Sort:
        return self.then.sort


@dataclass(frozen=True)
class Let:
    bindings: tuple  # ((name, Term), ...)
    body: "Term"

    @property
    def sort(self) -> Sort:
        return self.body.sort


Term = Union[Literal, Const, Apply, BoolConnective, Equality, Ite, Let]

TRUE = BoolConnective("true")
FALSE = BoolConnective("false")


# ------------------------------------------------------------------ commands


@dataclass(frozen=True)
class SetLogic:
    name: str


@dataclass(frozen=True)
class SetInfo:
    keyword: str
    value: str = ""


@dataclass(frozen=True)
class SetOption:
    keyword: str
    value: str = ""


@dataclass(frozen=True)
class DeclareFun:
    name: str
    sort: FieldSort


@dataclass(frozen=True)
class DefineSort:
    name: str
    sort: FieldSort


@dataclass(frozen=True)
class Assert:
    term: object  # SExpr before sort checking, Term after


@dataclass(frozen=True)
class CheckSat:
    pass


@dataclass(frozen=True)
class GetModel:
    pass


@dataclass(frozen=True)
class GetValue:
    terms: tuple


@dataclass(frozen=True)
class Exit:
    pass


Command = Union[SetLogic, SetInfo, SetOption, DeclareFun, DefineSort, Assert, CheckSat, GetModel, GetValue, Exit]


@dataclass(frozen=True)
class Script:
    """A command sequence.

    ``fresh`` lists ``(name, argument)`` for constants introduced by
    preprocessing; each stands for the reciprocal of its argument.
    """

    logic: str
    commands: tuple
    typed: bool = False
    preprocessed: bool = False
    fresh: tuple = ()

    def declarations(self) -> list[DeclareFun]:
        return [c for c in self.commands if isinstance(c, DeclareFun)]

    def assertions(self) -> list:
        return [c.term for c in self.commands if isinstance(c, Assert)]


# ------------------------------------------------------------------ traversal


def children(t: Term) -> tuple:
    if isinstance(t, (Apply, BoolConnective)):
        return t.args
    if isinstance(t, Equality):
        return (t.lhs, t.rhs)
    if isinstance(t, Ite):
        return (t.cond, t.then, t.else_)
    if isinstance(t, Let):
        return tuple(v for _, v in t.bindings) + (t.body,)
    return ()


def free_constants(t: Term, bound: frozenset = frozenset()) -> list[Const]:
    """Free constants of ``t`` in first-occurrence (depth-first) order."""
    seen: dict[str, Const] = {}

    def walk(u, scope):
        if isinstance(u, Const):
            if u.name not in scope and u.name not in seen:
                seen[u.name] = u
        elif isinstance(u, Let):
            for _, v in u.bindings:
                walk(v, scope)
            walk(u.body, scope | {n for n, _ in u.bindings})
        else:
            for c in children(u):
                walk(c, scope)

    walk(t, bound)
    return list(seen.values())


# ------------------------------------------------------------------ printing

_SIMPLE = re.compile(r"[A-Za-z~!@$%^&*_\-+=<>.?/][A-Za-z0-9~!@$%^&*_\-+=<>.?/]*")


def print_symbol(name: str) -> str:
    if _SIMPLE.fullmatch(name):
        return name
    return f"|{name}|"


def print_term(t: Term) -> str:
    if isinstance(t, Literal):
        return print_literal(t.value)
    if isinstance(t, Const):
        return print_symbol(t.name)
    if isinstance(t, Apply):
        return f"({t.op} {' '.join(print_term(a) for a in t.args)})"
    if isinstance(t, BoolConnective):
        if not t.args:
            return t.kind
        return f"({t.kind} {' '.join(print_term(a) for a in t.args)})"
    if isinstance(t, Equality):
        return f"(= {print_term(t.lhs)} {print_term(t.rhs)})"
    if isinstance(t, Ite):
        return f"(ite {print_term(t.cond)} {print_term(t.then)} {print_term(t.else_)})"
    if isinstance(t, Let):
        binds = " ".join(f"({print_symbol(n)} {print_term(v)})" for n, v in t.bindings)
        return f"(let ({binds}) {print_term(t.body)})"
    raise TypeError(f"not a term: {t!r}")


def print_command(c) -> str:
    if isinstance(c, SetLogic):
        return f"(set-logic {c.name})"
    if isinstance(c, SetInfo):
        return f"(set-info {c.keyword} {c.value})" if c.value else f"(set-info {c.keyword})"
    if isinstance(c, SetOption):
        return f"(set-option {c.keyword} {c.value})" if c.value else f"(set-option {c.keyword})"
    if isinstance(c, DeclareFun):
        return f"(declare-fun {print_symbol(c.name)} () {print_sort(c.sort)})"
    if isinstance(c, DefineSort):
        return f"(define-sort {print_symbol(c.name)} () {print_sort(c.sort)})"
    if isinstance(c, Assert):
        return f"(assert {print_term(c.term)})"
    if isinstance(c, CheckSat):
        return "(check-sat)"
    if isinstance(c, GetModel):
        return "(get-model)"
    if isinstance(c, GetValue):
        return f"(get-value ({' '.join(print_term(t) for t in c.terms)}))"
    if isinstance(c, Exit):
        return "(exit)"
    raise TypeError(f"not a command: {c!r}")


def print_script(script: Script) -> str:
    """One command per line; reparses to an identical typed script."""
    return "".join(print_command(c) + "\n" for c in script.commands)
