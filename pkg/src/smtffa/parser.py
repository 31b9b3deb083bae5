"""QF_FFA script parsing and sort checking.

``parse_script`` turns tokens into commands (resolving sort aliases and
rejecting reserved names); ``sort_check`` turns each command's
s-expression terms into sorted :mod:`smtffa.terms` nodes.  ``parse`` does
both.
"""

from __future__ import annotations

import re
from functools import reduce

from . import lexer
from .errors import FFAError, ParseError, SortError, UnsupportedError
from .field import FieldSort
from .lexer import SList, Token, read_sexprs, render, tokenize
from .normalizer import normalize_literal
from .terms import (
    BOOL,
    BOOL_KINDS,
    FF_OPS,
    LEFT_ASSOC,
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
)

LOGIC = "QF_FFA"
QUANTIFIED_LOGIC = "FFA"

_LITERAL_BODY = re.compile(r"ff(-?\d+(?:\.-?\d+)*)")

# Names the theory or the core owns; users may not declare them.
_RESERVED = frozenset(FF_OPS) | frozenset(BOOL_KINDS) | {
    "=", "distinct", "ite", "let", "as", "_", "!", "forall", "exists", "Bool", "FiniteField",
}


def is_reserved_name(name: str) -> bool:
    """``ff`` literals, theory operators and core symbols cannot be user symbols."""
    return bool(lexer.FF_LITERAL.fullmatch(name)) or name in _RESERVED


def _loc(e):
    return e.loc if e is not None else None


def _numeral(e, what: str) -> int:
    if not isinstance(e, Token) or e.kind != lexer.NUMERAL:
        raise ParseError(f"expected a numeral for {what}", _loc(e))
    return int(e.text)


def _symbol(e, what: str) -> str:
    if not isinstance(e, Token) or e.kind not in (lexer.SYMBOL, lexer.LITERAL):
        raise ParseError(f"expected a symbol for {what}", _loc(e))
    return e.value


def make_sort(p: int, n: int | None, loc=None) -> FieldSort:
    """Sort for ``(_ FiniteField p)`` (``n is None``) or ``(_ FiniteField p n)``."""
    if n is not None and n < 2:
        raise SortError(f"extension field degree must exceed 1, got {n}", loc)
    try:
        return FieldSort(p, 1 if n is None else n)
    except FFAError as exc:
        raise SortError(exc.message, loc) from None


def parse_literal(token: str, sort: FieldSort, loc=None):
    """Parse ``ffc0.c1...`` at ``sort`` into a normalized element."""
    m = _LITERAL_BODY.fullmatch(token)
    if m is None:
        raise ParseError(f"malformed finite field literal {token!r}", loc)
    coeffs = [int(c) for c in m.group(1).split(".")]
    if sort.n == 1 and len(coeffs) != 1:
        raise SortError(f"prime field literal {token} must have one coefficient", loc)
    if len(coeffs) > sort.n:
        raise SortError(f"literal {token} has more than {sort.n} coefficients", loc)
    return normalize_literal(coeffs, sort)


class _Reader:
    """Command-level parser state: the sort alias table."""

    def __init__(self):
        self.aliases: dict[str, FieldSort] = {}

    def sort(self, e) -> FieldSort:
        if isinstance(e, Token):
            if e.kind == lexer.SYMBOL:
                name = e.value
                if name in self.aliases:
                    return self.aliases[name]
                if name == "Bool":
                    raise SortError("Bool is not a finite field sort", e.loc)
                raise SortError(f"unknown sort {name}", e.loc)
            raise ParseError(f"expected a sort, got {e.text}", e.loc)
        items = e.items
        if len(items) >= 2 and _is_sym(items[0], "_") and _is_sym(items[1], "FiniteField"):
            if len(items) == 3:
                return make_sort(_numeral(items[2], "FiniteField"), None, items[2].loc)
            if len(items) == 4:
                p = _numeral(items[2], "FiniteField")
                n = _numeral(items[3], "FiniteField")
                return make_sort(p, n, items[2].loc)
            raise ParseError("FiniteField takes one or two indexes", e.loc)
        if len(items) and isinstance(items[0], Token) and items[0].value in self.aliases:
            raise UnsupportedError("parametric sorts are not supported", e.loc)
        raise SortError(f"unknown sort {render(e)}", e.loc)


def _is_sym(e, name: str) -> bool:
    return isinstance(e, Token) and e.kind == lexer.SYMBOL and e.value == name


def parse_script(source) -> Script:
    """Build the (unsorted) command list from text or a token list."""
    tokens = tokenize(source) if isinstance(source, str) else list(source)
    reader = _Reader()
    commands = []
    logic = None
    declared: set[str] = set()
    for e in read_sexprs(tokens):
        if not isinstance(e, SList) or not e.items or not isinstance(e.items[0], Token):
            raise ParseError("expected a command", _loc(e))
        head = e.items[0]
        name, args = head.value, e.items[1:]
        if name == "set-logic":
            if len(args) != 1:
                raise ParseError("set-logic takes one symbol", e.loc)
            sym = _symbol(args[0], "logic")
            if logic is not None:
                raise ParseError("set-logic given twice", head.loc)
            if sym == QUANTIFIED_LOGIC:
                raise UnsupportedError("logic FFA (quantified) is not supported; use QF_FFA", args[0].loc)
            if sym != LOGIC:
                raise UnsupportedError(f"unsupported logic {sym}", args[0].loc)
            logic = sym
            commands.append(SetLogic(sym))
            continue
        if name == "set-info":
            if not args or not isinstance(args[0], Token) or args[0].kind != lexer.KEYWORD:
                raise ParseError("set-info needs a keyword", e.loc)
            commands.append(SetInfo(args[0].text, " ".join(render(a) for a in args[1:])))
            continue
        if name == "set-option":
            if not args or not isinstance(args[0], Token) or args[0].kind != lexer.KEYWORD:
                raise ParseError("set-option needs a keyword", e.loc)
            commands.append(SetOption(args[0].text, " ".join(render(a) for a in args[1:])))
            continue
        if name == "exit":
            commands.append(Exit())
            continue
        if logic is None:
            raise ParseError(f"{name} before set-logic", head.loc)
        if name in ("declare-fun", "declare-const"):
            if name == "declare-fun":
                if len(args) != 3:
                    raise ParseError("declare-fun takes a name, a parameter list and a sort", e.loc)
                params, sort_e = args[1], args[2]
                if not isinstance(params, SList) or params.items:
                    raise UnsupportedError("only nullary declare-fun is supported", _loc(params))
            else:
                if len(args) != 2:
                    raise ParseError("declare-const takes a name and a sort", e.loc)
                sort_e = args[1]
            sym = _symbol(args[0], "declaration")
            if is_reserved_name(sym):
                raise ParseError(f"cannot declare reserved symbol {sym}", args[0].loc)
            if sym in declared:
                raise ParseError(f"symbol {sym} already declared", args[0].loc)
            declared.add(sym)
            commands.append(DeclareFun(sym, reader.sort(sort_e)))
        elif name == "define-sort":
            if len(args) != 3:
                raise ParseError("define-sort takes a name, parameters and a sort", e.loc)
            sym = _symbol(args[0], "sort name")
            if not isinstance(args[1], SList) or args[1].items:
                raise UnsupportedError("parametric define-sort is not supported", _loc(args[1]))
            if sym in reader.aliases or sym in ("Bool", "FiniteField"):
                raise ParseError(f"sort {sym} already defined", args[0].loc)
            sort = reader.sort(args[2])
            reader.aliases[sym] = sort
            commands.append(DefineSort(sym, sort))
        elif name == "assert":
            if len(args) != 1:
                raise ParseError("assert takes one term", e.loc)
            _reject_quantifiers(args[0])
            commands.append(Assert(args[0]))
        elif name == "check-sat":
            if args:
                raise ParseError("check-sat takes no arguments", e.loc)
            commands.append(CheckSat())
        elif name == "get-model":
            commands.append(GetModel())
        elif name == "get-value":
            if len(args) != 1 or not isinstance(args[0], SList) or not args[0].items:
                raise ParseError("get-value takes a non-empty term list", e.loc)
            _reject_quantifiers(args[0])
            commands.append(GetValue(tuple(args[0].items)))
        elif name in ("push", "pop", "declare-sort", "define-fun", "define-fun-rec", "check-sat-assuming"):
            raise UnsupportedError(f"{name} is not supported", head.loc)
        else:
            raise ParseError(f"unknown command {name}", head.loc)
    if logic is None:
        raise ParseError("missing set-logic", (1, 1))
    return Script(logic, tuple(commands), typed=False)


def _reject_quantifiers(e):
    if isinstance(e, SList):
        if e.items and _is_sym(e.items[0], "forall") or e.items and _is_sym(e.items[0], "exists"):
            raise UnsupportedError("quantifiers are not part of QF_FFA", e.items[0].loc)
        for x in e.items:
            _reject_quantifiers(x)


class _Checker:
    def __init__(self, reader: _Reader):
        self.reader = reader
        self.consts: dict[str, FieldSort] = {}

    def term(self, e, scope: dict):
        if isinstance(e, Token):
            return self.atom(e, scope)
        if not e.items:
            raise ParseError("empty term", e.loc)
        head = e.items[0]
        if isinstance(head, SList):
            raise ParseError(f"unexpected term head {render(head)}", head.loc)
        op, args = head.value, e.items[1:]
        if head.kind == lexer.SYMBOL and op == "_" or head.kind == lexer.SYMBOL and op == "as":
            return self.annotated(e, op)
        if head.kind != lexer.SYMBOL:
            raise ParseError(f"{head.text} is not a function", head.loc)
        if op == "let":
            return self.let(e, scope)
        if op == "!":
            if not args:
                raise ParseError("empty annotation", e.loc)
            return self.term(args[0], scope)
        sub = [self.term(a, scope) for a in args]
        if op in FF_OPS:
            return self.ff_apply(op, sub, args, head)
        if op in ("=", "distinct"):
            if len(sub) < 2:
                raise ParseError(f"{op} needs at least two arguments", head.loc)
            s0 = sub[0].sort
            for t, a in zip(sub[1:], args[1:]):
                if t.sort != s0:
                    raise SortError(f"{op} over sorts {s0} and {t.sort}", _loc(a))
            if op == "=":
                eqs = [Equality(x, y) for x, y in zip(sub, sub[1:])]
                return eqs[0] if len(eqs) == 1 else BoolConnective("and", tuple(eqs))
            neqs = [
                BoolConnective("not", (Equality(sub[i], sub[j]),))
                for i in range(len(sub))
                for j in range(i + 1, len(sub))
            ]
            return neqs[0] if len(neqs) == 1 else BoolConnective("and", tuple(neqs))
        if op == "ite":
            if len(sub) != 3:
                raise ParseError("ite takes three arguments", head.loc)
            if sub[0].sort is not BOOL:
                raise SortError("ite condition must be Bool", _loc(args[0]))
            if sub[1].sort != sub[2].sort:
                raise SortError(f"ite branches of sorts {sub[1].sort} and {sub[2].sort}", _loc(args[2]))
            return Ite(*sub)
        if op in BOOL_KINDS:
            for t, a in zip(sub, args):
                if t.sort is not BOOL:
                    raise SortError(f"{op} expects Bool arguments", _loc(a))
            if op in ("true", "false"):
                raise ParseError(f"{op} is not a function", head.loc)
            if op == "not":
                if len(sub) != 1:
                    raise ParseError("not takes one argument", head.loc)
                return BoolConnective("not", tuple(sub))
            if op in ("and", "or"):
                if len(sub) < 2:
                    raise ParseError(f"{op} needs at least two arguments", head.loc)
                return BoolConnective(op, tuple(sub))
            if len(sub) < 2:
                raise ParseError(f"{op} needs at least two arguments", head.loc)
            if op == "=>":
                return reduce(lambda acc, x: BoolConnective("=>", (x, acc)), reversed(sub[:-1]), sub[-1])
            return reduce(lambda acc, x: BoolConnective("xor", (acc, x)), sub[1:], sub[0])
        if op in ("forall", "exists"):
            raise UnsupportedError("quantifiers are not part of QF_FFA", head.loc)
        if op in scope or op in self.consts:
            raise SortError(f"{op} is a constant, not a function", head.loc)
        raise SortError(f"unknown function symbol {op}", head.loc)

    def atom(self, tok: Token, scope: dict):
        if tok.kind == lexer.LITERAL:
            raise SortError(
                f"literal {tok.text} has no sort; write (_ {tok.text} p) or (as {tok.text} S)", tok.loc
            )
        if tok.kind != lexer.SYMBOL:
            raise SortError(f"{tok.text} is not a finite field term", tok.loc)
        name = tok.value
        if name in scope:
            return Const(name, scope[name])
        if name == "true":
            return BoolConnective("true")
        if name == "false":
            return BoolConnective("false")
        if name in self.consts:
            return Const(name, self.consts[name])
        raise SortError(f"unbound symbol {name}", tok.loc)

    def annotated(self, e: SList, op: str):
        items = e.items
        if len(items) < 3 or not isinstance(items[1], Token) or items[1].kind != lexer.LITERAL:
            raise ParseError(f"({op} ...) is only supported for finite field literals", e.loc)
        lit = items[1]
        if op == "_":
            if len(items) == 3:
                sort = make_sort(_numeral(items[2], "literal index"), None, items[2].loc)
            elif len(items) == 4:
                sort = make_sort(
                    _numeral(items[2], "literal index"), _numeral(items[3], "literal index"), items[2].loc
                )
            else:
                raise ParseError("indexed literal takes one or two indexes", e.loc)
        else:
            if len(items) != 3:
                raise ParseError("as takes a literal and a sort", e.loc)
            sort = self.reader.sort(items[2])
        return Literal(parse_literal(lit.text, sort, lit.loc))

    def ff_apply(self, op, sub, args, head):
        lo, hi = FF_OPS[op]
        if len(sub) < lo or hi is not None and len(sub) > hi:
            want = f"exactly {lo}" if lo == hi else f"at least {lo}"
            raise ParseError(f"{op} takes {want} argument(s), got {len(sub)}", head.loc)
        s0 = sub[0].sort
        for t, a in zip(sub, args):
            if not isinstance(t.sort, FieldSort):
                raise SortError(f"{op} expects finite field arguments", _loc(a))
            if t.sort != s0:
                raise SortError(f"{op} over sorts {s0} and {t.sort}", _loc(a))
        if op in LEFT_ASSOC:
            return reduce(lambda acc, x: Apply(op, (acc, x), s0), sub[1:], sub[0])
        return Apply(op, tuple(sub), s0)

    def let(self, e: SList, scope: dict):
        items = e.items
        if len(items) != 3 or not isinstance(items[1], SList) or not items[1].items:
            raise ParseError("let takes a binding list and a body", e.loc)
        bindings = []
        inner = dict(scope)
        names = set()
        for b in items[1].items:
            if not isinstance(b, SList) or len(b.items) != 2:
                raise ParseError("malformed let binding", _loc(b))
            name = _symbol(b.items[0], "let binding")
            if is_reserved_name(name):
                raise ParseError(f"cannot bind reserved symbol {name}", b.items[0].loc)
            if name in names:
                raise ParseError(f"{name} bound twice in one let", b.items[0].loc)
            names.add(name)
            value = self.term(b.items[1], scope)
            bindings.append((name, value))
            inner[name] = value.sort
        return Let(tuple(bindings), self.term(items[2], inner))


def sort_check(script: Script) -> Script:
    """Resolve every term; returns a script whose Assert/GetValue hold Terms."""
    reader = _Reader()
    checker = _Checker(reader)
    out = []
    for c in script.commands:
        if isinstance(c, DefineSort):
            reader.aliases[c.name] = c.sort
        elif isinstance(c, DeclareFun):
            checker.consts[c.name] = c.sort
        elif isinstance(c, Assert):
            t = checker.term(c.term, {})
            if t.sort is not BOOL:
                raise SortError("assertion is not Bool", _loc(c.term))
            c = Assert(t)
        elif isinstance(c, GetValue):
            c = GetValue(tuple(checker.term(x, {}) for x in c.terms))
        out.append(c)
    return Script(script.logic, tuple(out), typed=True)


def parse(text: str) -> Script:
    """Tokenize, parse and sort-check a whole script."""
    return sort_check(parse_script(text))
