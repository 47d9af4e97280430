"""Input validation helpers shared by the functional API and the estimators.

Everything numeric is coerced to :class:`fractions.Fraction` unless it is a
float, which is kept as a float (profiles derived from irrational constants
are stored that way).
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction
from typing import Iterable, Sequence


class NoWorkingMachineError(ValueError):
    pass


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions, ``"p/q"`` strings and decimal strings to Fraction.

    Floats are converted exactly (``Fraction(0.1)`` is not ``1/10``); callers
    who want decimal semantics should pass strings.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not processing times")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational from {value!r}") from exc
    if isinstance(value, numbers.Real):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(float(value))
    raise TypeError(f"unsupported numeric type {type(value).__name__}")


def as_number(value):
    """Like :func:`as_rational` but leaves floats alone."""
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return value
    return as_rational(value)


def check_m(m) -> int:
    if isinstance(m, bool) or not isinstance(m, numbers.Integral):
        raise TypeError(f"machine count must be an integer, got {m!r}")
    if m < 1:
        raise ValueError(f"machine count must be >= 1, got {m}")
    return int(m)


def check_n(n, *, minimum: int = 0) -> int:
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise TypeError(f"job count must be an integer, got {n!r}")
    if n < minimum:
        raise ValueError(f"job count must be >= {minimum}, got {n}")
    return int(n)


def check_jobs(jobs: Iterable) -> tuple[Fraction, ...]:
    out = tuple(as_rational(p) for p in jobs)
    for p in out:
        if p < 0:
            raise ValueError(f"processing times must be nonnegative, got {p}")
    return out


def check_speeds(speeds: Sequence, m: int | None = None) -> tuple:
    out = tuple(as_number(s) for s in speeds)
    if m is not None and len(out) != m:
        raise ValueError(f"expected {m} speeds, got {len(out)}")
    if not out:
        raise ValueError("at least one machine speed is required")
    if any(s < 0 for s in out):
        raise ValueError("machine speeds must be nonnegative")
    if not any(s > 0 for s in out):
        raise NoWorkingMachineError("no working machine")
    return out


def format_number(x) -> str:
    """Serialize a rational as ``"num/den"`` (``str(Fraction)``), floats as 15 digits."""
    if isinstance(x, float):
        return f"{x:.15g}"
    return str(as_rational(x))
