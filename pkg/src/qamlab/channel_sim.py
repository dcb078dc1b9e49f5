"""Channel harness: symbol source, constellation mapper, T/2 ISI channel,
optional noise, trial metrics, and an unquantized reference equalizer.

Determinism: everything is a pure function of (config, seed).  The symbol
stream uses an xorshift64* generator seeded with ``seed``; noise uses an
independent generator seeded with ``seed XOR NOISE_SEED_TWEAK`` and draws
two uniforms per half-sample (Box-Muller, cos -> real, sin -> imag).
Noiseless runs are bit-exact across platforms; noisy runs are only
statistically reproducible across float implementations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import backend
from . import fixedpoint as fx
from . import qam_decoder as qd
from .complexfx import CFx
from .fixedpoint import FxFormat, FxValue, Rational

# Max constellation magnitude per dimension: level 3 -> 3/8 + 1/16.
_MAX_POINT = Fraction(7, 16)

NOISE_SEED_TWEAK = 0x9E3779B97F4A7C15


class ConfigError(ValueError):
    """Invalid channel configuration."""


class Xorshift64Star:
    """xorshift64* PRNG (shifts 12/25/27, multiplier 2685821657736338717)."""

    MULT = 2685821657736338717

    def __init__(self, seed: int):
        self.state = (seed & 0xFFFFFFFFFFFFFFFF) or 0x106689D45497FDB5

    def next_u64(self) -> int:
        x = self.state
        x ^= (x >> 12)
        x ^= (x << 25) & 0xFFFFFFFFFFFFFFFF
        x ^= (x >> 27)
        self.state = x
        return (x * self.MULT) & 0xFFFFFFFFFFFFFFFF

    def next_symbol(self) -> int:
        return self.next_u64() >> 58

    def next_unit(self) -> float:
        # Uniform in (0, 1]: safe as a Box-Muller log argument.
        return 1.0 - (self.next_u64() >> 11) * (2.0 ** -53)


@dataclass(frozen=True)
class ChannelConfig:
    taps: tuple            # ((re, im) Rational pairs) at T/2 spacing
    noise_sigma: Rational = Fraction(0)
    seed: int = 1
    n_train: int = 0
    n_measure: int = 0
    ser_threshold: Rational = Fraction(0)
    block_symbols: int = 256
    x_width: int = 10

    def __post_init__(self):
        if not self.taps:
            raise ConfigError("channel needs at least one tap")
        if self.noise_sigma < 0:
            raise ConfigError("noise_sigma must be nonnegative")
        if not 0 <= self.seed < 1 << 64:
            raise ConfigError("seed must fit in 64 bits")
        if self.n_train < 0 or self.n_measure < 0:
            raise ConfigError("symbol counts must be nonnegative")
        if self.block_symbols < 1:
            raise ConfigError("block_symbols must be positive")
        # Symbols sit at even half-sample offsets, so taps of one index
        # parity never combine; bound each parity class separately.
        for parity in (0, 1):
            gain = sum(
                abs(Fraction(re)) + abs(Fraction(im))
                for j, (re, im) in enumerate(self.taps)
                if j % 2 == parity
            )
            if gain * _MAX_POINT >= Fraction(1, 2):
                raise ConfigError(
                    f"worst-case channel output {gain * _MAX_POINT} reaches the"
                    " input format limit 0.5; reduce tap gains"
                )


@dataclass
class TrialMetrics:
    mse_per_block: list = field(default_factory=list)
    cum_errors_per_block: list = field(default_factory=list)
    symbol_errors: int = 0
    ser: Fraction = Fraction(0)
    converged: bool = False
    n_train: int = 0
    n_measure: int = 0


def map_symbol(symbol: int, x_width: int = 10) -> CFx:
    """Constellation point of a 6-bit code: levels scaled to k/8 + 1/16."""
    r, i = qd.symbol_to_levels(symbol)
    f = FxFormat(x_width, 0)
    scale = 1 << (x_width - 4)  # one 2**-4 grid unit in raw LSBs
    return CFx(FxValue((2 * r + 1) * scale, f), FxValue((2 * i + 1) * scale, f))


def transmit(symbols: list[int], cfg: ChannelConfig) -> list[CFx]:
    """Channel output at T/2: impulses at even half-samples convolved with
    the taps, plus optional white Gaussian noise, saturated into (x_width, 0).
    """
    n_out = 2 * len(symbols)
    fmt = FxFormat(cfg.x_width, 0, quant=fx.Quant.RND, ovf=fx.Overflow.SAT)
    points = [map_symbol(s, cfg.x_width) for s in symbols]
    taps = [(Fraction(re), Fraction(im)) for re, im in cfg.taps]
    noise = Xorshift64Star(cfg.seed ^ NOISE_SEED_TWEAK) if cfg.noise_sigma else None
    sigma = float(cfg.noise_sigma)

    out = []
    for m in range(n_out):
        acc_re = Fraction(0)
        acc_im = Fraction(0)
        for j, (tre, tim) in enumerate(taps):
            pos = m - j
            if pos < 0 or pos % 2:
                continue
            p = points[pos // 2]
            ure, uim = p.re.value, p.im.value
            acc_re += tre * ure - tim * uim
            acc_im += tre * uim + tim * ure
        if noise is not None:
            u1, u2 = noise.next_unit(), noise.next_unit()
            mag = sigma * math.sqrt(-2.0 * math.log(u1))
            acc_re += Fraction(mag * math.cos(2.0 * math.pi * u2))
            acc_im += Fraction(mag * math.sin(2.0 * math.pi * u2))
        out.append(CFx(fx.convert(acc_re, fmt), fx.convert(acc_im, fmt)))
    return out


def _finish_metrics(cfg: ChannelConfig, sq_err: list, err_flags: list) -> TrialMetrics:
    mse = []
    cum = []
    running = 0
    for start in range(0, len(sq_err), cfg.block_symbols):
        blk = sq_err[start:start + cfg.block_symbols]
        mse.append(sum(blk) / len(blk))
        running += sum(err_flags[start:start + cfg.block_symbols])
        cum.append(running)
    errors = sum(err_flags)
    ser = Fraction(errors, cfg.n_measure) if cfg.n_measure else Fraction(0)
    return TrialMetrics(
        mse_per_block=mse,
        cum_errors_per_block=cum,
        symbol_errors=errors,
        ser=ser,
        converged=ser <= cfg.ser_threshold,
        n_train=cfg.n_train,
        n_measure=cfg.n_measure,
    )


def symbol_stream(cfg: ChannelConfig) -> list[int]:
    rng = Xorshift64Star(cfg.seed)
    return [rng.next_symbol() for _ in range(cfg.n_train + cfg.n_measure)]


def run_trial(cfg: ChannelConfig, params: qd.DecoderParams | None = None) -> TrialMetrics:
    """End-to-end trial: train with known symbols, then measure SER/MSE."""
    p = params or qd.DecoderParams()
    if p.x_width != cfg.x_width:
        raise ConfigError("decoder x_width must match channel x_width")
    symbols = symbol_stream(cfg)
    samples = transmit(symbols, cfg)
    n = len(symbols)

    train_r = [0] * n
    train_i = [0] * n
    for k, s in enumerate(symbols):
        if k < cfg.n_train:
            train_r[k], train_i[k] = qd.symbol_to_levels(s)
        else:
            train_r[k] = train_i[k] = backend.UNTRAINED

    state = qd.reset(p)
    syms, _, _, e_re, e_im, _, _ = backend.decode_block(
        p.kernel_params(),
        state.ffe_re, state.ffe_im, state.dfe_re, state.dfe_im,
        state.x_re, state.x_im, state.sv_re, state.sv_im,
        [c.re.raw for c in samples], [c.im.raw for c in samples],
        train_r, train_i,
    )

    lsb2 = 2.0 ** (-2 * p.ffe_width)
    sq_err = [(e_re[k] ** 2 + e_im[k] ** 2) * lsb2 for k in range(n)]
    err_flags = [
        1 if k >= cfg.n_train and syms[k] != symbols[k] else 0 for k in range(n)
    ]
    return _finish_metrics(cfg, sq_err, err_flags)


class ReferenceDecoder:
    """Unquantized (float64) twin of the fixed-point decoder.

    Same dataflow and sign-LMS updates, but no rounding or overflow anywhere
    except the slicer's decision grid.  Used to calibrate channel scenarios
    and bound the fixed-point model's quantization error.
    """

    OFFSET = 0.0625

    def __init__(self, params: qd.DecoderParams | None = None):
        p = params or qd.DecoderParams()
        self.params = p
        self.mu = 2.0 ** -p.mu_shift
        self.ffe_c = [0j] * p.nffe
        self.dfe_c = [0j] * p.ndfe
        self.x = [0j] * p.nffe
        self.sv = [0j] * p.ndfe

    @staticmethod
    def _slice_level(v: float) -> int:
        # nearest level; a boundary hit goes to the lower level
        return min(max(math.ceil(v * 8) - 1, -4), 3)

    @staticmethod
    def _sign_conj(v: complex) -> complex:
        sr = (v.real > 0) - (v.real < 0)
        si = (v.imag > 0) - (v.imag < 0)
        return complex(sr, -si)

    def _step(self, x0: complex, x1: complex, forced: tuple | None):
        p = self.params
        self.x[0], self.x[1] = x0, x1
        y = sum(xv * c for xv, c in zip(self.x, self.ffe_c))
        y -= sum(sv * c for sv, c in zip(self.sv, self.dfe_c))
        lr, li = self._slice_level(y.real), self._slice_level(y.imag)
        symbol = qd.levels_to_symbol(lr, li)
        if forced is not None:
            lr, li = forced
        sv0 = complex(lr / 8 + self.OFFSET, li / 8 + self.OFFSET)
        self.sv[0] = sv0
        e = sv0 - y
        for k in range(p.nffe):
            self.ffe_c[k] += self.mu * e * self._sign_conj(self.x[k])
        for k in range(p.ndfe):
            self.dfe_c[k] -= self.mu * e * self._sign_conj(self.sv[k])
        for k in range(p.nffe - 4, -1, -2):
            self.x[k + 3] = self.x[k + 1]
            self.x[k + 2] = self.x[k]
        for k in range(p.ndfe - 2, -1, -1):
            self.sv[k + 1] = self.sv[k]
        return symbol, y, e

    def decode_step(self, x0: complex, x1: complex):
        return self._step(x0, x1, None)

    def decode_step_trained(self, x0: complex, x1: complex, true_symbol: int):
        return self._step(x0, x1, qd.symbol_to_levels(true_symbol))


def run_reference_trial(cfg: ChannelConfig, params: qd.DecoderParams | None = None) -> TrialMetrics:
    """run_trial with the float reference decoder instead of the fixed-point one."""
    p = params or qd.DecoderParams()
    symbols = symbol_stream(cfg)
    samples = transmit(symbols, cfg)
    ref = ReferenceDecoder(p)
    n = len(symbols)

    sq_err = []
    err_flags = []
    for k in range(n):
        x0 = complex(samples[2 * k].re.value, samples[2 * k].im.value)
        x1 = complex(samples[2 * k + 1].re.value, samples[2 * k + 1].im.value)
        if k < cfg.n_train:
            sym, _, e = ref.decode_step_trained(x0, x1, symbols[k])
            err_flags.append(0)
        else:
            sym, _, e = ref.decode_step(x0, x1)
            err_flags.append(1 if sym != symbols[k] else 0)
        sq_err.append(abs(e) ** 2)
    return _finish_metrics(cfg, sq_err, err_flags)


def render_metrics(m: TrialMetrics, fmt: str = "table") -> str:
    """Trial report; CSV columns block_index, mse, cumulative_errors."""
    lines = []
    if fmt == "csv":
        lines.append("block_index,mse,cumulative_errors")
    else:
        lines.append(f"{'block':>7} {'mse':>14} {'cum_errors':>11}")
    for idx, (mse, cum) in enumerate(zip(m.mse_per_block, m.cum_errors_per_block)):
        if fmt == "csv":
            lines.append(f"{idx},{mse:.9e},{cum}")
        else:
            lines.append(f"{idx:>7} {mse:>14.6e} {cum:>11}")
    ser = float(m.ser)
    lines.append(
        f"summary ser={ser:.6f} errors={m.symbol_errors} "
        f"train={m.n_train} measure={m.n_measure} "
        f"converged={'yes' if m.converged else 'no'}"
    )
    return "\n".join(lines) + "\n"
