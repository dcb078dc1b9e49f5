"""Bit-accurate fixed-point values with hardware quantization/overflow rules.

A value is a two's-complement (or plain unsigned) integer mantissa ``raw``
scaled by the format's LSB weight ``2**(int_bits - width)``.  Narrowing
conversions apply a quantization mode (RND, RND_ZERO, TRN) followed by an
overflow mode (SAT, WRAP); add/sub/mul return full precision in a widened
format and never round.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction

Rational = Fraction

MAX_WIDTH = 64


class Quant(enum.Enum):
    """Quantization (rounding) mode used when narrowing fractional bits."""

    RND = "RND"          # nearest, ties toward +inf
    RND_ZERO = "RND_ZERO"  # nearest, ties toward zero
    TRN = "TRN"          # truncate (floor toward -inf)


class Overflow(enum.Enum):
    """Overflow mode used when a value exceeds the format range."""

    SAT = "SAT"
    WRAP = "WRAP"


class WidthOverflowError(ValueError):
    """A full-precision result would need a format wider than 64 bits."""


@dataclass(frozen=True)
class FxFormat:
    width: int
    int_bits: int
    signed: bool = True
    quant: Quant = Quant.TRN
    ovf: Overflow = Overflow.WRAP

    def __post_init__(self):
        if not 1 <= self.width <= MAX_WIDTH:
            raise ValueError(f"width must be in 1..{MAX_WIDTH}, got {self.width}")
        if not 0 <= self.int_bits <= self.width:
            raise ValueError(
                f"int_bits must be in 0..{self.width}, got {self.int_bits}"
            )

    @property
    def frac_bits(self) -> int:
        return self.width - self.int_bits

    @property
    def lsb(self) -> Fraction:
        return Fraction(1, 1 << self.frac_bits) if self.frac_bits >= 0 else Fraction(1 << -self.frac_bits)

    @property
    def min_raw(self) -> int:
        return -(1 << (self.width - 1)) if self.signed else 0

    @property
    def max_raw(self) -> int:
        return (1 << (self.width - 1)) - 1 if self.signed else (1 << self.width) - 1

    @property
    def min_value(self) -> Fraction:
        return self.min_raw * self.lsb

    @property
    def max_value(self) -> Fraction:
        return self.max_raw * self.lsb

    def with_modes(self, quant: Quant | None = None, ovf: Overflow | None = None) -> "FxFormat":
        out = self
        if quant is not None:
            out = replace(out, quant=quant)
        if ovf is not None:
            out = replace(out, ovf=ovf)
        return out

    def __str__(self) -> str:
        w = f"u{self.width}" if not self.signed else str(self.width)
        return f"({w},{self.int_bits},{self.quant.value},{self.ovf.value})"


@dataclass(frozen=True)
class FxValue:
    raw: int
    fmt: FxFormat

    def __post_init__(self):
        if not self.fmt.min_raw <= self.raw <= self.fmt.max_raw:
            raise ValueError(f"raw {self.raw} out of range for {self.fmt}")

    @property
    def value(self) -> Fraction:
        return self.raw * self.fmt.lsb

    def __add__(self, other: "FxValue") -> "FxValue":
        return add(self, other)

    def __sub__(self, other: "FxValue") -> "FxValue":
        return sub(self, other)

    def __mul__(self, other: "FxValue") -> "FxValue":
        return mul(self, other)

    def __rshift__(self, n: int) -> "FxValue":
        return shift_right(self, n)

    def __lshift__(self, n: int) -> "FxValue":
        return shift_left(self, n)

    def __str__(self) -> str:
        return f"{self.raw}@{self.fmt} = {decimal_str(self.raw, self.fmt.frac_bits)}"


def _wrap_raw(n: int, fmt: FxFormat) -> int:
    m = n & ((1 << fmt.width) - 1)
    if fmt.signed and m >= 1 << (fmt.width - 1):
        m -= 1 << fmt.width
    return m


def _overflow(n: int, fmt: FxFormat) -> int:
    if fmt.min_raw <= n <= fmt.max_raw:
        return n
    if fmt.ovf is Overflow.SAT:
        return fmt.min_raw if n < fmt.min_raw else fmt.max_raw
    return _wrap_raw(n, fmt)


def _quantize_units(x: Fraction, fmt: FxFormat) -> int:
    """Round x onto the format's LSB grid; returns the grid count (pre-overflow)."""
    units = x * (1 << fmt.frac_bits)
    num, den = units.numerator, units.denominator
    if fmt.quant is Quant.TRN:
        return num // den
    if fmt.quant is Quant.RND:
        return (2 * num + den) // (2 * den)
    # RND_ZERO
    q, r = divmod(num, den)
    if 2 * r > den:
        return q + 1
    if 2 * r < den:
        return q
    return q + 1 if num < 0 else q  # tie: toward zero


def convert(x: Fraction | int, fmt: FxFormat) -> FxValue:
    """Quantize then apply overflow handling; total on all rationals."""
    return FxValue(_overflow(_quantize_units(Fraction(x), fmt), fmt), fmt)


def requantize(a: FxValue, fmt: FxFormat) -> FxValue:
    """Convert a value into another format (assignment semantics)."""
    d = fmt.frac_bits - a.fmt.frac_bits
    if d >= 0:
        return FxValue(_overflow(a.raw << d, fmt), fmt)
    return convert(a.value, fmt)


def _sum_format(a: FxFormat, b: FxFormat, force_signed: bool) -> FxFormat:
    ia, ib = a.int_bits, b.int_bits
    signed = force_signed or a.signed or b.signed
    if signed:
        # An unsigned operand needs one extra integer bit once signed.
        if not a.signed:
            ia += 1
        if not b.signed:
            ib += 1
    int_bits = max(ia, ib) + 1
    frac_bits = max(a.frac_bits, b.frac_bits)
    width = int_bits + frac_bits
    if width > MAX_WIDTH:
        raise WidthOverflowError(f"sum format needs {width} bits")
    return FxFormat(width, int_bits, signed)


def add(a: FxValue, b: FxValue) -> FxValue:
    fmt = _sum_format(a.fmt, b.fmt, force_signed=False)
    f = fmt.frac_bits
    raw = (a.raw << (f - a.fmt.frac_bits)) + (b.raw << (f - b.fmt.frac_bits))
    return FxValue(raw, fmt)


def sub(a: FxValue, b: FxValue) -> FxValue:
    fmt = _sum_format(a.fmt, b.fmt, force_signed=True)
    f = fmt.frac_bits
    raw = (a.raw << (f - a.fmt.frac_bits)) - (b.raw << (f - b.fmt.frac_bits))
    return FxValue(raw, fmt)


def mul(a: FxValue, b: FxValue) -> FxValue:
    int_bits = a.fmt.int_bits + b.fmt.int_bits
    width = a.fmt.width + b.fmt.width
    if width > MAX_WIDTH:
        raise WidthOverflowError(f"product format needs {width} bits")
    fmt = FxFormat(width, int_bits, a.fmt.signed or b.fmt.signed)
    return FxValue(a.raw * b.raw, fmt)


def shift_right(a: FxValue, n: int) -> FxValue:
    """Scale by 2**-n in place: raw is arithmetic-shifted, dropped bits truncate."""
    if n < 0:
        raise ValueError("shift count must be nonnegative")
    return FxValue(a.raw >> n, a.fmt)


def shift_left(a: FxValue, n: int) -> FxValue:
    """Scale by 2**n in place; bits shifted past the MSB are dropped (wrap)."""
    if n < 0:
        raise ValueError("shift count must be nonnegative")
    return FxValue(_wrap_raw(a.raw << n, a.fmt), a.fmt)


def bit_get(a: FxValue, k: int) -> int:
    if not 0 <= k < a.fmt.width:
        raise IndexError(f"bit index {k} out of range for width {a.fmt.width}")
    return (a.raw >> k) & 1


def bit_set(a: FxValue, k: int, v: int) -> FxValue:
    if not 0 <= k < a.fmt.width:
        raise IndexError(f"bit index {k} out of range for width {a.fmt.width}")
    if v not in (0, 1):
        raise ValueError("bit value must be 0 or 1")
    pattern = a.raw & ((1 << a.fmt.width) - 1)
    pattern = (pattern | (1 << k)) if v else (pattern & ~(1 << k))
    return FxValue(_wrap_raw(pattern, a.fmt), a.fmt)


def to_int(a: FxValue) -> int:
    """Integer part, truncated toward zero."""
    f = a.fmt.frac_bits
    return a.raw >> f if a.raw >= 0 else -((-a.raw) >> f)


def sign(a: FxValue) -> int:
    return (a.raw > 0) - (a.raw < 0)


def decimal_str(raw: int, frac_bits: int) -> str:
    """Exact finite decimal of raw * 2**-frac_bits."""
    neg = raw < 0
    mag = -raw if neg else raw
    ipart, rem = divmod(mag, 1 << frac_bits) if frac_bits >= 0 else (mag << -frac_bits, 0)
    s = str(ipart)
    if rem:
        digits = str(rem * 5**frac_bits).rjust(frac_bits, "0").rstrip("0")
        s += "." + digits
    return "-" + s if neg and (ipart or rem) else s


def from_raw(raw: int, fmt: FxFormat) -> FxValue:
    return FxValue(raw, fmt)


def zero(fmt: FxFormat) -> FxValue:
    return FxValue(0, fmt)
