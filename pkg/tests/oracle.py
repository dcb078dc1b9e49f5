"""Independent oracles used by the test suite.

Everything here is written against the documented behavior, on purpose with
different machinery than the package (plain Fractions and explicit grid
arithmetic, no FxValue):

* ``oracle_quantize`` / ``oracle_convert``: exact-rational model of format
  conversion (quantization mode, then overflow mode).
* ``TraceOracle``: a rational-arithmetic re-implementation of the decoder
  step used to produce the committed golden trace and to cross-check the
  kernels delta by delta.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def wrap_bits(n: int, width: int, signed: bool = True) -> int:
    m = n & ((1 << width) - 1)
    if signed and m >= 1 << (width - 1):
        m -= 1 << width
    return m


def oracle_quantize(value: Fraction, frac_bits: int, mode: str) -> int:
    """Grid count of value on the 2**-frac_bits grid, before overflow."""
    scaled = Fraction(value) * (1 << frac_bits)
    floor = scaled.numerator // scaled.denominator
    if mode == "TRN":
        return floor
    rem = scaled - floor
    if mode == "RND":
        return floor + (1 if rem >= Fraction(1, 2) else 0)
    if mode == "RND_ZERO":
        if rem > Fraction(1, 2):
            return floor + 1
        if rem == Fraction(1, 2):
            # tie: pick the neighbor closer to zero
            return floor + 1 if scaled < 0 else floor
        return floor
    raise ValueError(mode)


def oracle_convert(value: Fraction, width: int, int_bits: int,
                   signed: bool = True, mode: str = "TRN",
                   ovf: str = "WRAP") -> int:
    """Raw mantissa after quantization and overflow handling."""
    n = oracle_quantize(value, width - int_bits, mode)
    lo = -(1 << (width - 1)) if signed else 0
    hi = (1 << (width - 1)) - 1 if signed else (1 << width) - 1
    if lo <= n <= hi:
        return n
    if ovf == "SAT":
        return lo if n < lo else hi
    return wrap_bits(n, width, signed)


# ---------------------------------------------------------------------------
# decoder trace oracle


def _cmul(ar: Fraction, ai: Fraction, br: Fraction, bi: Fraction):
    return ar * br - ai * bi, ar * bi + ai * br


def _sgn(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def _regrid(value: Fraction, frac_bits: int, width: int) -> Fraction:
    """Truncate onto a grid and wrap into a width-bit signed mantissa."""
    n = wrap_bits(oracle_quantize(value, frac_bits, "TRN"), width)
    return Fraction(n, 1 << frac_bits)


@dataclass
class TraceOracle:
    """Rational-arithmetic decoder twin (one complex dimension pair)."""

    nffe: int = 8
    ndfe: int = 16
    fw: int = 10
    dw: int = 10
    cfw: int = 10
    cdw: int = 10
    mu_shift: int = 8
    round_updates: bool = False

    def __post_init__(self):
        assert self.mu_shift <= min(self.cfw, self.cdw)
        assert self.fw == self.dw, "oracle models the equal-width datapath"
        self.mu = Fraction(1, 1 << self.mu_shift)
        z = Fraction(0)
        self.ffe = [[z, z] for _ in range(self.nffe)]
        self.dfe = [[z, z] for _ in range(self.ndfe)]
        self.x = [[z, z] for _ in range(self.nffe)]
        self.sv = [[z, z] for _ in range(self.ndfe)]

    def _filter(self, taps, coefs, frac, width):
        acc = [Fraction(0), Fraction(0)]
        for (tr, ti), (cr, ci) in zip(taps, coefs):
            pr, pi = _cmul(tr, ti, cr, ci)
            acc[0] = _regrid(acc[0] + pr, frac, width)
            acc[1] = _regrid(acc[1] + pi, frac, width)
        return acc

    def _update(self, coefs, taps, er, ei, frac, width, mu):
        for k, (tr, ti) in enumerate(taps):
            sr, si = _sgn(tr), -_sgn(ti)
            ur, ui = _cmul(er, ei, sr, si)
            for d, u in ((0, ur), (1, ui)):
                target = mu * u
                if self.round_updates:
                    delta = oracle_quantize(target, frac, "RND")
                else:
                    delta = oracle_quantize(target, frac, "TRN")
                n = wrap_bits(
                    oracle_quantize(coefs[k][d], frac, "TRN") + delta, width
                )
                coefs[k][d] = Fraction(n, 1 << frac)

    def step(self, x0, x1, train_levels=None):
        """Decode one symbol; returns (symbol, y, e, sv0) as Fraction pairs."""
        self.x[0] = [Fraction(x0[0]), Fraction(x0[1])]
        self.x[1] = [Fraction(x1[0]), Fraction(x1[1])]

        yffe = self._filter(self.x, self.ffe, self.fw, self.fw + 1)
        ydfe = self._filter(self.sv, self.dfe, self.dw, self.dw + 1)
        y = [
            _regrid(yffe[0] - ydfe[0], self.fw, self.fw + 1),
            _regrid(yffe[1] - ydfe[1], self.fw, self.fw + 1),
        ]

        def level(v: Fraction) -> int:
            scaled = 8 * v
            ceil = -((-scaled.numerator) // scaled.denominator)
            return min(max(ceil - 1, -4), 3)

        lr, li = level(y[0]), level(y[1])
        symbol = (8 * lr + li) % 64
        if train_levels is not None:
            lr, li = train_levels
        sv0 = [Fraction(2 * lr + 1, 16), Fraction(2 * li + 1, 16)]
        self.sv[0] = sv0

        e = [
            _regrid(sv0[0] - y[0], self.fw, self.fw),
            _regrid(sv0[1] - y[1], self.fw, self.fw),
        ]

        self._update(self.ffe, self.x, e[0], e[1], self.cfw, self.cfw, self.mu)
        self._update(self.dfe, self.sv, e[0], e[1], self.cdw, self.cdw, -self.mu)

        for k in range(self.nffe - 4, -1, -2):
            self.x[k + 3] = self.x[k + 1]
            self.x[k + 2] = self.x[k]
        for k in range(self.ndfe - 2, -1, -1):
            self.sv[k + 1] = self.sv[k]
        return symbol, y, e, sv0

    # -- raw views matching DecoderState.snapshot() ------------------------

    def _raws(self, pairs, frac):
        return [(int(p[0] * (1 << frac)), int(p[1] * (1 << frac))) for p in pairs]

    def snapshot(self) -> str:
        def fmt(pairs):
            return " ".join(f"{r},{i}" for r, i in pairs)

        return (
            f"ffe_c {fmt(self._raws(self.ffe, self.cfw))}\n"
            f"dfe_c {fmt(self._raws(self.dfe, self.cdw))}\n"
            f"x {fmt(self._raws(self.x, self.fw))}\n"
            f"SV {fmt(self._raws(self.sv, 4))}\n"
        )


def golden_trace_text(steps: int = 10) -> str:
    """Zero-input decoder trace in the committed golden-file layout."""
    tr = TraceOracle()
    z = (Fraction(0), Fraction(0))
    lines = []
    for n in range(1, steps + 1):
        symbol, y, e, sv0 = tr.step(z, z)
        lines.append(f"step {n}")
        lines.append(f"symbol {symbol}")
        lines.append(f"y {int(y[0] * 1024)},{int(y[1] * 1024)}")
        lines.append(f"e {int(e[0] * 1024)},{int(e[1] * 1024)}")
        lines.append(f"sv0 {int(sv0[0] * 16)},{int(sv0[1] * 16)}")
        lines.append(tr.snapshot().rstrip("\n"))
    return "\n".join(lines) + "\n"
