"""SMT-LIB theory of finite field arithmetic (QF_FFA) in Python."""

from .conway import conway_polynomial
from .errors import (
    CommandError,
    ConwayCacheError,
    FFAError,
    LexError,
    ParseError,
    ResourceError,
    SortError,
    UnsupportedError,
)
from .field import FieldElement, FieldSort
from .field_core import PrimeModulus, Residue, is_probable_prime, smod
from .parser import parse
from .solver import SolveResult, check_sat, eval_term

__version__ = "0.1.0"

__all__ = [
    "CommandError",
    "ConwayCacheError",
    "FFAError",
    "FieldElement",
    "FieldSort",
    "LexError",
    "ParseError",
    "PrimeModulus",
    "Residue",
    "ResourceError",
    "SolveResult",
    "SortError",
    "UnsupportedError",
    "check_sat",
    "conway_polynomial",
    "eval_term",
    "is_probable_prime",
    "parse",
    "smod",
]
