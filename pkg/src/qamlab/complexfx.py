"""Complex arithmetic over fixed-point components (shared format per value)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import fixedpoint as fx
from .fixedpoint import FxFormat, FxValue

# Holds the {-1, 0, +1} components produced by sign_conj.
SIGN_FORMAT = FxFormat(2, 2)


@dataclass(frozen=True)
class CFx:
    re: FxValue
    im: FxValue

    def __post_init__(self):
        if self.re.fmt != self.im.fmt:
            raise ValueError("real and imaginary parts must share one format")

    @property
    def fmt(self) -> FxFormat:
        return self.re.fmt

    def __add__(self, other: "CFx") -> "CFx":
        return cadd(self, other)

    def __sub__(self, other: "CFx") -> "CFx":
        return csub(self, other)

    def __mul__(self, other: "CFx") -> "CFx":
        return cmul(self, other)

    def __str__(self) -> str:
        return (
            f"({fx.decimal_str(self.re.raw, self.fmt.frac_bits)}, "
            f"{fx.decimal_str(self.im.raw, self.fmt.frac_bits)})"
        )


def czero(fmt: FxFormat) -> CFx:
    return CFx(fx.zero(fmt), fx.zero(fmt))


def cconvert_exact(re: Fraction | int, im: Fraction | int, fmt: FxFormat) -> CFx:
    return CFx(fx.convert(re, fmt), fx.convert(im, fmt))


def cadd(a: CFx, b: CFx) -> CFx:
    return CFx(a.re + b.re, a.im + b.im)


def csub(a: CFx, b: CFx) -> CFx:
    return CFx(a.re - b.re, a.im - b.im)


def cmul(a: CFx, b: CFx) -> CFx:
    """Full-precision 4-multiply/2-add complex product."""
    return CFx(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re)


def sign_conj(a: CFx) -> CFx:
    """Conjugate of the componentwise sign vector: (sign(re), -sign(im))."""
    return CFx(
        FxValue(fx.sign(a.re), SIGN_FORMAT),
        FxValue(-fx.sign(a.im), SIGN_FORMAT),
    )


def cconvert(a: CFx, fmt: FxFormat) -> CFx:
    return CFx(fx.requantize(a.re, fmt), fx.requantize(a.im, fmt))
