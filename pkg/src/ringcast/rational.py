"""Exact rational helpers shared by every module.

Costs are plain :class:`fractions.Fraction` values. On the wire they are
strings, either ``"p/q"`` or ``"p"``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

RationalLike = Union[Fraction, int, str]


def to_fraction(value: RationalLike) -> Fraction:
    """Parse an exact rational. Floats are rejected to keep inputs exact."""
    if isinstance(value, bool):
        raise TypeError("booleans are not costs")
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass 'p/q' strings")
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational string")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    return Fraction(value)


def format_fraction(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@lru_cache(maxsize=None)
def harmonic(k: int) -> Fraction:
    """H_k = 1 + 1/2 + ... + 1/k with H_0 = 0."""
    if k < 0:
        raise ValueError("harmonic number of a negative index")
    if k == 0:
        return Fraction(0)
    return harmonic(k - 1) + Fraction(1, k)


@lru_cache(maxsize=None)
def lcm_upto(k: int) -> int:
    """lcm(1, ..., k); 1 for k <= 1."""
    out = 1
    for j in range(2, k + 1):
        out = out * j // math.gcd(out, j)
    return out


def common_denominator(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        d = Fraction(v).denominator
        out = out * d // math.gcd(out, d)
    return out


def ratio(cost: Fraction, optimum: Fraction) -> Fraction:
    """cost / optimum, with 0/0 read as 1 (a free network is optimal)."""
    if optimum == 0:
        if cost == 0:
            return Fraction(1)
        raise ZeroDivisionError("positive cost against a zero-cost optimum")
    return Fraction(cost) / optimum
