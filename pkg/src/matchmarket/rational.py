"""Exact rational helpers.

All solver arithmetic goes through :class:`fractions.Fraction`; this module
only adds the string grammar used on the wire (``"-3/4"``, ``"5"``) and a few
coercions that refuse floats.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from typing import Iterable

Rational = Fraction

_RATIONAL_RE = re.compile(r"^(-?)(\d+)(?:/(\d+))?$")

ZERO = Fraction(0)
ONE = Fraction(1)


class RationalFormatError(ValueError):
    """A rational-string does not follow ``[-]digits[/digits]`` or has a zero denominator."""

    def __init__(self, text: str, reason: str):
        super().__init__(f"invalid rational {text!r}: {reason}")
        self.text = text
        self.reason = reason


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise RationalFormatError(text, "expected [-]digits[/digits]")
    sign, num, den = m.groups()
    if den is not None and int(den) == 0:
        raise RationalFormatError(text, "denominator")
    value = Fraction(int(num), int(den) if den is not None else 1)
    return -value if sign else value


def format_rational(value: Fraction | int) -> str:
    """Canonical wire form: lowest terms, denominator omitted when 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_rational(value: object) -> Fraction:
    """Coerce ints, Fractions and rational-strings; floats and bools are rejected."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def common_denominator(values: Iterable[Fraction]) -> int:
    d = 1
    for v in values:
        d = lcm(d, v.denominator)
    return d
