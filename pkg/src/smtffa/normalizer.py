"""Canonical literals and model printing.

Outputs always use the indexed spelling, ``(_ ff-1.1 3 2)``, never
``(as ... S)``, so a model can be read without the producing script.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import SortError
from .field import FieldElement, FieldSort


def normalize_literal(coeffs: Sequence[int], sort: FieldSort) -> FieldElement:
    """smod every coefficient and drop trailing zeros.

    >>> normalize_literal([2, 1], FieldSort(3, 2)).coeffs
    (-1, 1)
    """
    if len(coeffs) > sort.n:
        raise SortError(f"literal has {len(coeffs)} coefficients but {sort} allows {sort.n}")
    return sort.element(coeffs)


def literal_body(e: FieldElement) -> str:
    """``ff`` spelling without the index, e.g. ``ff-1.1``; zero is ``ff0``."""
    return "ff" + (".".join(str(c) for c in e.coeffs) if e.coeffs else "0")


def print_sort(sort: FieldSort) -> str:
    return str(sort)


def print_literal(e: FieldElement) -> str:
    s = e.sort
    if s.n == 1:
        return f"(_ {literal_body(e)} {s.p})"
    return f"(_ {literal_body(e)} {s.p} {s.n})"


@dataclass
class Model:
    """Constant name to value, in declaration order."""

    values: dict[str, FieldElement] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, FieldElement]]) -> Model:
        return cls(dict(pairs))

    def __getitem__(self, name):
        return self.values[name]

    def __contains__(self, name):
        return name in self.values

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def items(self):
        return self.values.items()


def print_model(m: Model) -> str:
    """One ``define-fun`` per line, values as normalized indexed literals."""
    from .terms import print_symbol

    if not len(m):
        return "()"
    rows = [
        f"  (define-fun {print_symbol(name)} () {print_sort(v.sort)} {print_literal(v)})"
        for name, v in m.items()
    ]
    return "(\n" + "\n".join(rows) + "\n)"
