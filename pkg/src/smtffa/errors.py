"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class FFAError(Exception):
    """Base class. ``loc`` is an optional ``(line, column)`` pair, 1-based."""

    exit_code = 1

    def __init__(self, message: str, loc: tuple[int, int] | None = None):
        self.message = message
        self.loc = loc
        if loc is not None:
            message = f"line {loc[0]} column {loc[1]}: {message}"
        super().__init__(message)


class LexError(FFAError):
    pass


class ParseError(FFAError):
    pass


class SortError(FFAError):
    """Ill-sorted input, including mixed-modulus arithmetic and bad sort indexes."""


class UnsupportedError(FFAError):
    """Input that is valid SMT-LIB but outside QF_FFA as implemented here."""


class CommandError(FFAError):
    """A command that cannot run in the current state, e.g. get-model after unsat."""


class ResourceError(FFAError):
    """A configured search, enumeration or factorization budget was exhausted."""

    exit_code = 2


class ConwayCacheError(FFAError):
    """A Conway cache file holds an entry that fails verification."""
