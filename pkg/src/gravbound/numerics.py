"""
Signed base-10 log-magnitude scalars.

Quantities in this package range from e^{-10^9} to 10^{50} and beyond, so
they are carried as ``(sign, log10|x|)`` pairs.  Base 10 is used so that
``log10_mag`` reads directly as an order of magnitude.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

__all__ = [
    "LogScalar",
    "RangeFlag",
    "ZERO",
    "ONE",
    "from_real",
    "from_log10",
    "to_real",
    "log_mul",
    "log_div",
    "log_pow",
    "log_add",
    "log_neg",
    "compare",
]

# gap below which the smaller addend no longer changes the result
_CANCEL_DECADES = 15.0
_LOG10_MAX = math.log10(sys.float_info.max)
_LOG10_MIN = math.log10(sys.float_info.min)


class RangeFlag(str, enum.Enum):
    EXACT = "exact-range"
    UNDERFLOW = "underflow-clamped-to-0"
    OVERFLOW = "overflow-clamped-to-inf"


@dataclass(frozen=True)
class LogScalar:
    """A real number stored as ``sign * 10**log10_mag``."""

    sign: int
    log10_mag: float = 0.0

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign == 0:
            object.__setattr__(self, "log10_mag", 0.0)
        elif not math.isfinite(self.log10_mag):
            raise ValueError(f"log10_mag must be finite, got {self.log10_mag!r}")
        else:
            object.__setattr__(self, "log10_mag", float(self.log10_mag))

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def to_json(self) -> dict:
        return {"sign": self.sign, "log10": self.log10_mag}

    @classmethod
    def from_json(cls, data: dict) -> LogScalar:
        return cls(int(data["sign"]), float(data["log10"]))

    def __mul__(self, other):
        return log_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return log_div(self, _coerce(other))

    def __rtruediv__(self, other):
        return log_div(_coerce(other), self)

    def __add__(self, other):
        return log_add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return log_add(self, log_neg(_coerce(other)))

    def __rsub__(self, other):
        return log_add(_coerce(other), log_neg(self))

    def __neg__(self):
        return log_neg(self)

    def __pow__(self, p):
        return log_pow(self, p)

    def __lt__(self, other):
        return compare(self, _coerce(other)) < 0

    def __le__(self, other):
        return compare(self, _coerce(other)) <= 0

    def __gt__(self, other):
        return compare(self, _coerce(other)) > 0

    def __ge__(self, other):
        return compare(self, _coerce(other)) >= 0

    def __repr__(self):
        if self.sign == 0:
            return "LogScalar(0)"
        s = "+" if self.sign > 0 else "-"
        return f"LogScalar({s}10^{self.log10_mag:.6g})"


ZERO = LogScalar(0)
ONE = LogScalar(1, 0.0)


def _coerce(x) -> LogScalar:
    if isinstance(x, LogScalar):
        return x
    return from_real(x)


def from_real(x: float) -> LogScalar:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"cannot represent non-finite value {x!r}")
    if x == 0.0:
        return ZERO
    return LogScalar(1 if x > 0 else -1, math.log10(abs(x)))


def from_log10(log10_mag: float, sign: int = 1) -> LogScalar:
    return LogScalar(sign, log10_mag)


def to_real(a: LogScalar) -> tuple[float, RangeFlag]:
    """Convert to a native float, reporting whether the value was clamped."""
    if a.sign == 0:
        return 0.0, RangeFlag.EXACT
    if a.log10_mag > _LOG10_MAX:
        return a.sign * math.inf, RangeFlag.OVERFLOW
    if a.log10_mag < _LOG10_MIN:
        return 0.0, RangeFlag.UNDERFLOW
    return a.sign * 10.0 ** a.log10_mag, RangeFlag.EXACT


def log_mul(a: LogScalar, b: LogScalar) -> LogScalar:
    if a.sign == 0 or b.sign == 0:
        return ZERO
    return LogScalar(a.sign * b.sign, a.log10_mag + b.log10_mag)


def log_div(a: LogScalar, b: LogScalar) -> LogScalar:
    if b.sign == 0:
        raise ZeroDivisionError("LogScalar division by zero")
    if a.sign == 0:
        return ZERO
    return LogScalar(a.sign * b.sign, a.log10_mag - b.log10_mag)


def log_neg(a: LogScalar) -> LogScalar:
    return LogScalar(-a.sign, a.log10_mag)


def log_pow(a: LogScalar, num, den: int = 1) -> LogScalar:
    """Raise ``a`` to the rational power ``num/den``.

    ``num`` may also be a :class:`fractions.Fraction` (or an int) with ``den``
    left at 1.  Negative bases are only allowed for integer exponents.
    """
    p = Fraction(num) / Fraction(den)
    if a.sign == 0:
        if p > 0:
            return ZERO
        if p == 0:
            return ONE
        raise ZeroDivisionError("zero raised to a negative power")
    if a.sign < 0:
        if p.denominator != 1:
            raise DomainError(f"negative base with non-integer exponent {p}")
        sign = -1 if p.numerator % 2 else 1
    else:
        sign = 1
    return LogScalar(sign, a.log10_mag * p.numerator / p.denominator)


def log_add(a: LogScalar, b: LogScalar) -> LogScalar:
    if a.sign == 0:
        return b
    if b.sign == 0:
        return a
    big, small = (a, b) if a.log10_mag >= b.log10_mag else (b, a)
    ratio = 10.0 ** (small.log10_mag - big.log10_mag)  # underflows to 0 for huge gaps
    if big.sign == small.sign:
        return LogScalar(big.sign, big.log10_mag + math.log1p(ratio) / math.log(10.0))
    rest = 1.0 - ratio
    if rest <= 10.0 ** -_CANCEL_DECADES:
        return ZERO
    return LogScalar(big.sign, big.log10_mag + math.log10(rest))


def compare(a: LogScalar, b: LogScalar) -> int:
    """Three-way comparison: -1, 0 or +1."""
    if a.sign != b.sign:
        return -1 if a.sign < b.sign else 1
    if a.sign == 0 or a.log10_mag == b.log10_mag:
        return 0
    less = a.log10_mag < b.log10_mag
    if a.sign < 0:
        less = not less
    return -1 if less else 1
