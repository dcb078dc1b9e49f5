"""Bit-exact reference model of the 64-QAM decision-feedback equalizer.

One call decodes one symbol from two T/2-spaced complex input samples:
T/2-spaced FFE, T-spaced DFE, 64-QAM slicer, sign-LMS coefficient
adaptation, then tap-line shifts.  The per-step datapath runs in the
selected kernel backend on raw mantissas (see qamlab.backend); this module
owns parameters, state, formats and the slicer reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import backend
from . import fixedpoint as fx
from .complexfx import CFx
from .fixedpoint import FxFormat, FxValue

SV_FORMAT = FxFormat(4, 0)
LEVEL_FORMAT = FxFormat(3, 0)

# 6-bit code <-> (re, im) slicer levels in [-4, 3].  The code is the 6-bit
# two's-complement wrap of 8*re_level + im_level reinterpreted unsigned.
_LEVELS = [(r, i) for r in range(-4, 4) for i in range(-4, 4)]
_SYMBOL_TO_LEVELS = {(8 * r + i) & 63: (r, i) for r, i in _LEVELS}


def levels_to_symbol(r_level: int, i_level: int) -> int:
    return (8 * r_level + i_level) & 63


def symbol_to_levels(symbol: int) -> tuple[int, int]:
    if not 0 <= symbol <= 63:
        raise ValueError(f"symbol must be in 0..63, got {symbol}")
    return _SYMBOL_TO_LEVELS[symbol]


@dataclass(frozen=True)
class DecoderParams:
    nffe: int = 8
    ndfe: int = 16
    x_width: int = 10
    ffe_width: int = 10
    dfe_width: int = 10
    ffe_coef_width: int = 10
    dfe_coef_width: int = 10
    mu_shift: int = 8            # mu = 2**-mu_shift
    bits_per_symbol: int = 6
    round_coef_updates: bool = False

    def __post_init__(self):
        widths = (self.x_width, self.ffe_width, self.dfe_width,
                  self.ffe_coef_width, self.dfe_coef_width)
        for w in widths:
            # 24-bit cap keeps every kernel intermediate inside int64.
            if not 4 <= w <= 24:
                raise ValueError(f"widths must be in 4..24, got {w}")
        if self.nffe < 4 or self.nffe % 2:
            raise ValueError("nffe must be even and >= 4")
        if self.ndfe < 1:
            raise ValueError("ndfe must be >= 1")
        if self.mu_shift < 0:
            raise ValueError("mu_shift must be nonnegative")

    @property
    def x_format(self) -> FxFormat:
        return FxFormat(self.x_width, 0)

    @property
    def ffe_coef_format(self) -> FxFormat:
        return FxFormat(self.ffe_coef_width, 0)

    @property
    def dfe_coef_format(self) -> FxFormat:
        return FxFormat(self.dfe_coef_width, 0)

    @property
    def y_format(self) -> FxFormat:
        return FxFormat(self.ffe_width + 1, 1)

    @property
    def e_format(self) -> FxFormat:
        return FxFormat(self.ffe_width, 0)

    def mu_ffe(self) -> FxValue:
        """Step size, built as a 1 in (W+2,2) shifted right then narrowed."""
        one = fx.convert(1, FxFormat(self.ffe_width + 2, 2))
        return fx.requantize(one >> self.mu_shift, self.ffe_coef_format)

    def mu_dfe(self) -> FxValue:
        one = fx.convert(1, FxFormat(self.dfe_width + 2, 2))
        return fx.requantize(one >> self.mu_shift, self.dfe_coef_format)

    def kernel_params(self) -> tuple:
        return (
            self.nffe, self.ndfe, self.x_width, self.ffe_width, self.dfe_width,
            self.ffe_coef_width, self.dfe_coef_width,
            self.mu_ffe().raw, self.mu_dfe().raw,
            self.round_coef_updates,
        )


@dataclass
class DecoderState:
    params: DecoderParams
    ffe_re: list = field(default_factory=list)
    ffe_im: list = field(default_factory=list)
    dfe_re: list = field(default_factory=list)
    dfe_im: list = field(default_factory=list)
    x_re: list = field(default_factory=list)
    x_im: list = field(default_factory=list)
    sv_re: list = field(default_factory=list)
    sv_im: list = field(default_factory=list)

    def ffe_coeffs(self) -> list[CFx]:
        f = self.params.ffe_coef_format
        return [CFx(FxValue(r, f), FxValue(i, f))
                for r, i in zip(self.ffe_re, self.ffe_im)]

    def dfe_coeffs(self) -> list[CFx]:
        f = self.params.dfe_coef_format
        return [CFx(FxValue(r, f), FxValue(i, f))
                for r, i in zip(self.dfe_re, self.dfe_im)]

    def x_taps(self) -> list[CFx]:
        f = self.params.x_format
        return [CFx(FxValue(r, f), FxValue(i, f))
                for r, i in zip(self.x_re, self.x_im)]

    def sv_taps(self) -> list[CFx]:
        return [CFx(FxValue(r, SV_FORMAT), FxValue(i, SV_FORMAT))
                for r, i in zip(self.sv_re, self.sv_im)]

    def snapshot(self) -> str:
        """Deterministic raw-mantissa dump for golden-file regression."""
        def pairs(re, im):
            return " ".join(f"{r},{i}" for r, i in zip(re, im))

        return (
            f"ffe_c {pairs(self.ffe_re, self.ffe_im)}\n"
            f"dfe_c {pairs(self.dfe_re, self.dfe_im)}\n"
            f"x {pairs(self.x_re, self.x_im)}\n"
            f"SV {pairs(self.sv_re, self.sv_im)}\n"
        )


@dataclass(frozen=True)
class StepResult:
    symbol: int
    y: CFx
    e: CFx
    sv0: CFx


def reset(params: DecoderParams | None = None) -> DecoderState:
    p = params or DecoderParams()
    return DecoderState(
        params=p,
        ffe_re=[0] * p.nffe, ffe_im=[0] * p.nffe,
        dfe_re=[0] * p.ndfe, dfe_im=[0] * p.ndfe,
        x_re=[0] * p.nffe, x_im=[0] * p.nffe,
        sv_re=[0] * p.ndfe, sv_im=[0] * p.ndfe,
    )


def slice_point(y: CFx) -> tuple[CFx, int]:
    """64-QAM slicer: decision point in (4,0) and the 6-bit code.

    Per dimension the level k owning y is the nearest one, with the decision
    boundary halfway between adjacent points and a boundary hit going to the
    lower level: k = ceil(8y) - 1, saturated to the 3-bit level range.
    """
    def dim(v: FxValue) -> int:
        lo, hi = LEVEL_FORMAT.min_raw, LEVEL_FORMAT.max_raw
        return min(max(math.ceil(8 * v.value) - 1, lo), hi)

    lvl_r, lvl_i = dim(y.re), dim(y.im)
    sv0 = CFx(FxValue(2 * lvl_r + 1, SV_FORMAT), FxValue(2 * lvl_i + 1, SV_FORMAT))
    return sv0, levels_to_symbol(lvl_r, lvl_i)


def _check_inputs(state: DecoderState, x_in: tuple[CFx, CFx]):
    f = state.params.x_format
    for v in x_in:
        if v.fmt.width != f.width or v.fmt.int_bits != f.int_bits or not v.fmt.signed:
            raise ValueError(f"input sample format {v.fmt} does not match {f}")


def _step(state: DecoderState, x_in: tuple[CFx, CFx], lvl_r: int, lvl_i: int) -> StepResult:
    _check_inputs(state, x_in)
    p = state.params
    syms, y_re, y_im, e_re, e_im, sv_re, sv_im = backend.decode_block(
        p.kernel_params(),
        state.ffe_re, state.ffe_im, state.dfe_re, state.dfe_im,
        state.x_re, state.x_im, state.sv_re, state.sv_im,
        [x_in[0].re.raw, x_in[1].re.raw], [x_in[0].im.raw, x_in[1].im.raw],
        [lvl_r], [lvl_i],
    )
    yf, ef = p.y_format, p.e_format
    return StepResult(
        symbol=syms[0],
        y=CFx(FxValue(y_re[0], yf), FxValue(y_im[0], yf)),
        e=CFx(FxValue(e_re[0], ef), FxValue(e_im[0], ef)),
        sv0=CFx(FxValue(sv_re[0], SV_FORMAT), FxValue(sv_im[0], SV_FORMAT)),
    )


def decode_step(state: DecoderState, x_in: tuple[CFx, CFx]) -> StepResult:
    """Decision-directed decode of one symbol; mutates state."""
    return _step(state, x_in, backend.UNTRAINED, backend.UNTRAINED)


def decode_step_trained(state: DecoderState, x_in: tuple[CFx, CFx], true_symbol: int) -> StepResult:
    """Known-symbol decode: decision feedback and error use the true point."""
    lvl_r, lvl_i = symbol_to_levels(true_symbol)
    return _step(state, x_in, lvl_r, lvl_i)
