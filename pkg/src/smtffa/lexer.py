"""SMT-LIB 2.6 tokenizer and s-expression reader."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import LexError, ParseError

LPAREN = "LPAREN"
RPAREN = "RPAREN"
SYMBOL = "SYM"
LITERAL = "LIT"  # finite field literal such as ff-1.1
NUMERAL = "NUM"
DECIMAL = "DEC"
HEXADECIMAL = "HEX"
BINARY = "BIN"
STRING = "STR"
KEYWORD = "KW"

FF_LITERAL = re.compile(r"ff-?\d+(?:\.-?\d+)*")

_SYMBOL_CHARS = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789~!@$%^&*_-+=<>.?/"
)
_NUMERAL = re.compile(r"0|[1-9]\d*")
_DECIMAL = re.compile(r"(?:0|[1-9]\d*)\.\d+")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    @property
    def loc(self) -> tuple[int, int]:
        return (self.line, self.col)

    @property
    def value(self) -> str:
        """Symbol name with ``|...|`` quoting removed; string contents unescaped."""
        if self.kind == SYMBOL and self.text.startswith("|"):
            return self.text[1:-1]
        if self.kind == STRING:
            return self.text[1:-1].replace('""', '"')
        return self.text

    def __repr__(self):
        if self.kind in (LPAREN, RPAREN):
            return self.kind
        return f"{self.kind} {self.text}"


def tokenize(text: str) -> list[Token]:
    return list(iter_tokens(text))


def iter_tokens(text: str) -> Iterator[Token]:
    i, n = 0, len(text)
    line, line_start = 1, 0

    def here(pos):
        return line, pos - line_start + 1

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            line_start = i + 1
            i += 1
        elif ch in " \t\r\f\v":
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch == "(":
            yield Token(LPAREN, "(", *here(i))
            i += 1
        elif ch == ")":
            yield Token(RPAREN, ")", *here(i))
            i += 1
        elif ch == '"':
            start, loc = i, here(i)
            i += 1
            while True:
                if i >= n:
                    raise LexError("unterminated string literal", loc)
                if text[i] == '"':
                    if i + 1 < n and text[i + 1] == '"':
                        i += 2
                        continue
                    i += 1
                    break
                if text[i] == "\n":
                    line += 1
                    line_start = i + 1
                i += 1
            yield Token(STRING, text[start:i], *loc)
        elif ch == "|":
            start, loc = i, here(i)
            end = text.find("|", i + 1)
            if end < 0:
                raise LexError("unterminated quoted symbol", loc)
            body = text[i + 1 : end]
            if "\\" in body:
                raise LexError("backslash in quoted symbol", loc)
            for k, c in enumerate(body):
                if c == "\n":
                    line += 1
                    line_start = i + 2 + k
            i = end + 1
            yield Token(SYMBOL, text[start:i], *loc)
        elif ch == "#":
            start, loc = i, here(i)
            if text.startswith("#x", i):
                j = i + 2
                while j < n and text[j] in "0123456789abcdefABCDEF":
                    j += 1
                kind = HEXADECIMAL
            elif text.startswith("#b", i):
                j = i + 2
                while j < n and text[j] in "01":
                    j += 1
                kind = BINARY
            else:
                raise LexError(f"illegal character {ch!r}", loc)
            if j == i + 2:
                raise LexError("empty hexadecimal/binary literal", loc)
            i = j
            yield Token(kind, text[start:i], *loc)
        elif ch == ":":
            start, loc = i, here(i)
            i += 1
            while i < n and text[i] in _SYMBOL_CHARS:
                i += 1
            if i == start + 1:
                raise LexError("empty keyword", loc)
            yield Token(KEYWORD, text[start:i], *loc)
        elif ch in _SYMBOL_CHARS:
            start, loc = i, here(i)
            while i < n and text[i] in _SYMBOL_CHARS:
                i += 1
            word = text[start:i]
            if word[0].isdigit():
                if _NUMERAL.fullmatch(word):
                    kind = NUMERAL
                elif _DECIMAL.fullmatch(word):
                    kind = DECIMAL
                else:
                    raise LexError(f"malformed numeral {word!r}", loc)
            elif FF_LITERAL.fullmatch(word):
                kind = LITERAL
            else:
                kind = SYMBOL
            yield Token(kind, word, *loc)
        else:
            raise LexError(f"illegal character {ch!r}", here(i))


@dataclass(frozen=True)
class SList:
    """A parenthesized s-expression; ``loc`` is the opening parenthesis."""

    items: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    @property
    def loc(self) -> tuple[int, int]:
        return (self.line, self.col)

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __iter__(self):
        return iter(self.items)


SExpr = Union[Token, SList]


def read_sexprs(tokens: list[Token]) -> list[SExpr]:
    """Group a token stream into top-level s-expressions."""
    out: list[SExpr] = []
    stack: list[tuple[Token, list]] = []
    for tok in tokens:
        if tok.kind == LPAREN:
            stack.append((tok, []))
        elif tok.kind == RPAREN:
            if not stack:
                raise ParseError("unbalanced ')'", tok.loc)
            open_tok, items = stack.pop()
            node = SList(tuple(items), open_tok.line, open_tok.col)
            (stack[-1][1] if stack else out).append(node)
        else:
            (stack[-1][1] if stack else out).append(tok)
    if stack:
        raise ParseError("unbalanced '('", stack[-1][0].loc)
    return out


def render(e: SExpr) -> str:
    if isinstance(e, Token):
        return e.text
    return "(" + " ".join(render(x) for x in e.items) + ")"
