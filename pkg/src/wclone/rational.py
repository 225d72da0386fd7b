"""Exact extended-rational values.

All weights in the workbench are exact rationals, optionally extended with a
single positive infinity.  Two interchangeable rational backends are selected
at import time: ``gmpy2.mpq`` (a compiled GMP core, much faster on the LP hot
path) when available, with ``fractions.Fraction`` as the pure-Python fallback.
Set ``WCLONE_PURE_RATIONAL=1`` to force the fallback; ``BACKEND`` records the
choice.  ``benchmarks/rational_backends.py`` compares the two.

Infinity follows the cost-function conventions used throughout:

* ``inf + x = inf`` for every x,
* ``c * inf = inf`` for every c >= 0, including ``0 * inf = inf``,
* ``inf`` compares strictly greater than every rational.

Finite values are plain backend rationals; infinity is the ``INF`` singleton.
Mixed arithmetic goes through the ``ext_*`` helpers below, never through
operators on ``INF`` itself.
"""

from __future__ import annotations

import os

from fractions import Fraction

if os.environ.get("WCLONE_PURE_RATIONAL"):
    Rat = Fraction
    BACKEND = "fractions"
else:
    try:
        from gmpy2 import mpq as Rat

        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover - exercised via env override instead
        Rat = Fraction
        BACKEND = "fractions"

ZERO = Rat(0)
ONE = Rat(1)


class _Infinity:
    """Positive infinity marker. A singleton; compare with ``is``/``is_inf``."""

    __slots__ = ()

    def __repr__(self):
        return "inf"

    def __reduce__(self):
        return (_get_inf, ())


INF = _Infinity()


def _get_inf():
    return INF


def is_inf(value) -> bool:
    return value is INF


def rat(p, q=1):
    """Exact rational p/q in the active backend."""
    return Rat(p) / Rat(q) if q != 1 else Rat(p)


def ext_add(a, b):
    if a is INF or b is INF:
        return INF
    return a + b


def ext_sum(values):
    total = ZERO
    for v in values:
        if v is INF:
            return INF
        total = total + v
    return total


def ext_scale(c, v):
    """c * v for rational c >= 0, with the convention 0 * inf = inf."""
    if c < 0:
        raise ValueError("scale factor must be non-negative, got %s" % (c,))
    if v is INF:
        return INF
    return c * v


def ext_shift(v, c):
    """v + c for rational c; infinity absorbs."""
    if v is INF:
        return INF
    return v + c


def ext_lt(a, b) -> bool:
    if a is INF:
        return False
    if b is INF:
        return True
    return a < b


def ext_le(a, b) -> bool:
    if a is INF:
        return b is INF
    if b is INF:
        return True
    return a <= b


def ext_eq(a, b) -> bool:
    if a is INF or b is INF:
        return a is b
    return a == b


def ext_min(a, b):
    return a if ext_le(a, b) else b


def floor_rat(r):
    return r.numerator // r.denominator


def ceil_rat(r):
    return -((-r.numerator) // r.denominator)


def format_value(v) -> str:
    """Serialize a value: "p/q" (or "p" when integral), or "inf"."""
    if v is INF:
        return "inf"
    return str(v)


def parse_rat(s) -> "Rat":
    """Parse "p/q" or "p" into an exact rational."""
    if isinstance(s, int):
        return Rat(s)
    text = str(s).strip()
    if "/" in text:
        p, q = text.split("/", 1)
        den = int(q)
        if den == 0:
            raise ValueError("zero denominator in %r" % (s,))
        return Rat(int(p), den)
    return Rat(int(text))


def parse_value(s):
    """Parse "p/q", "p", or "inf" into an extended rational."""
    if isinstance(s, str) and s.strip() == "inf":
        return INF
    return parse_rat(s)
