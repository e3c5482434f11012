"""Extended-range floating point for the G_k family.

Vertex counts of the construction are ``2^(2^k)`` and overflow doubles from
k = 10 on. mpmath floats carry an unbounded binary exponent, so they are used
as the big value type; this module fixes the working precision and adds
serialization and a matrix exponential for small stochastic matrices.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import mpf

__all__ = ["DEFAULT_PREC", "big", "to_pair", "big_to_json", "expm_stochastic", "log2_big"]

#: significand bits; relative error per operation is 2^-DEFAULT_PREC
DEFAULT_PREC = 160


def big(x) -> mpf:
    """Convert an int, Fraction, float or mpf to an mpf at the current precision."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


def to_pair(x: mpf) -> tuple[int, int]:
    """``(significand, exponent)`` with ``x == significand * 2**exponent``."""
    man, exp = mpf(x).man_exp
    return int(man), int(exp)


def big_to_json(x: mpf, digits: int = 12) -> dict:
    man, exp = to_pair(x)
    return {"significand": str(man), "exponent": exp, "approx": mpmath.nstr(x, digits)}


def log2_big(x: mpf) -> mpf:
    return mpmath.log(x, 2)


def expm_stochastic(p: Sequence[Sequence], t, prec: int | None = None) -> mpmath.matrix:
    """``exp(t (P - I))`` for a row-stochastic nonnegative matrix ``P``.

    Written as ``exp(-t) exp(t P)``: the Taylor series of ``exp(t P)`` has only
    nonnegative terms, so there is no cancellation. The argument is scaled by
    ``2^-s`` to norm at most 1/2, the series is summed until the next term
    falls below ``2^-(prec + 16)``, and the result is squared back ``s`` times.
    """
    prec = prec or DEFAULT_PREC
    with mpmath.workprec(prec + 32):
        t = big(t)
        size = len(p)
        pm = mpmath.matrix([[big(v) for v in row] for row in p])
        s = 0
        while t / 2**s > 0.5:
            s += 1
        a = pm * (t / 2**s)
        total = mpmath.eye(size)
        term = mpmath.eye(size)
        cutoff = mpf(2) ** -(prec + 16)
        j = 0
        while True:
            j += 1
            term = term * a / j
            total += term
            if mpmath.mnorm(term, 1) < cutoff:
                break
        total *= mpmath.exp(-t / 2**s)
        for _ in range(s):
            total = total * total
    return total
