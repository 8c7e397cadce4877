"""Exact integer and rational helpers.

Python ints are arbitrary precision and :class:`fractions.Fraction` already
keeps itself in lowest terms with a positive denominator, so this module only
adds the pieces the rest of the package needs on top: a shared factorial
table, a small dispatch helper and the ``p/q`` text format used on the wire.
"""

from __future__ import annotations

import operator
import threading
from fractions import Fraction
from typing import Union

Rational = Fraction

__all__ = [
    "Rational",
    "factorial",
    "rat_arith",
    "format_rational",
    "parse_rational",
]

_fact_table = [1]
_fact_lock = threading.Lock()


def factorial(k: int) -> int:
    """Return ``k!`` from a growable table shared by the whole process."""
    if k < 0:
        raise ValueError(f"factorial of negative number {k}")
    table = _fact_table
    if k < len(table):
        return table[k]
    with _fact_lock:
        # list.append is atomic; readers only index below len(table)
        while len(table) <= k:
            table.append(table[-1] * len(table))
    return table[k]


_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def rat_arith(a: Fraction, b: Fraction, op: str) -> Union[Fraction, int]:
    """Apply ``op`` to two rationals.

    ``op`` is one of ``add``, ``sub``, ``mul``, ``div`` or ``cmp``; ``cmp``
    returns -1, 0 or 1.  Division by zero raises :class:`ZeroDivisionError`.
    """
    a, b = Fraction(a), Fraction(b)
    if op == "cmp":
        return (a > b) - (a < b)
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(a, b)


def format_rational(x: Union[Fraction, int]) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational`; rejects float syntax."""
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not an exact rational: {text!r}") from None
    return Fraction(p, q)
