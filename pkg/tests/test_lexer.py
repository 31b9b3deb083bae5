import pytest

from smtffa.errors import LexError, ParseError
from smtffa.lexer import (
    BINARY,
    DECIMAL,
    HEXADECIMAL,
    KEYWORD,
    LITERAL,
    NUMERAL,
    STRING,
    SYMBOL,
    SList,
    read_sexprs,
    render,
    tokenize,
)


def kinds(text):
    return [(t.kind, t.text) for t in tokenize(text)]


def test_token_kinds():
    toks = kinds('ff-1.1 ff0 x 42 1.5 #x1F #b01 :named "a ""b""" |odd sym|')
    assert toks == [
        (LITERAL, "ff-1.1"),
        (LITERAL, "ff0"),
        (SYMBOL, "x"),
        (NUMERAL, "42"),
        (DECIMAL, "1.5"),
        (HEXADECIMAL, "#x1F"),
        (BINARY, "#b01"),
        (KEYWORD, ":named"),
        (STRING, '"a ""b"""'),
        (SYMBOL, "|odd sym|"),
    ]


@pytest.mark.parametrize("word", ["ff", "ff.add", "ff1.", "ff-", "ffx", "ff1..2", "FF1"])
def test_not_literals(word):
    assert tokenize(word)[0].kind == SYMBOL


@pytest.mark.parametrize("word", ["ff0", "ff10", "ff-3", "ff1.0.-1.0.0", "ff007"])
def test_literals(word):
    assert tokenize(word)[0].kind == LITERAL


def test_locations_and_comments():
    toks = tokenize("; comment (\n  (assert\n\tx)")
    assert [(t.text, t.line, t.col) for t in toks] == [("(", 2, 3), ("assert", 2, 4), ("x", 3, 2), (")", 3, 3)]


def test_quoted_symbol_value():
    t = tokenize("|a b|")[0]
    assert t.value == "a b"
    assert tokenize("|x|")[0] == tokenize("|x|")[0]


@pytest.mark.parametrize(
    "text,loc",
    [('"open', (1, 1)), ("|open", (1, 1)), ("x\n  #q", (2, 3)), ("\n 01", (2, 2)), ("[", (1, 1)), (": x", (1, 1))],
)
def test_lex_errors(text, loc):
    with pytest.raises(LexError) as ei:
        tokenize(text)
    assert ei.value.loc == loc
    assert str(ei.value).startswith(f"line {loc[0]} column {loc[1]}:")


def test_read_sexprs_nested():
    (e,) = read_sexprs(tokenize("(a (b c) ())"))
    assert isinstance(e, SList) and len(e) == 3
    assert render(e) == "(a (b c) ())"


@pytest.mark.parametrize("text", ["(a", "a)", "((a)"])
def test_unbalanced(text):
    with pytest.raises(ParseError):
        read_sexprs(tokenize(text))
