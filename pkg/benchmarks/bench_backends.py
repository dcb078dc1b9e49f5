#!/usr/bin/env python3
"""Throughput comparison of the decoder kernels (pure Python vs compiled).

Runs the same random symbol stream through every available backend and
reports decoded symbols per second.

    python3 benchmarks/bench_backends.py [--symbols N] [--repeat R]
"""

import argparse
import random
import time

from qamlab import backend
from qamlab import qam_decoder as qd
from qamlab._kernel_py import UNTRAINED


def make_stream(n, params, seed=1):
    rng = random.Random(seed)
    lim = 1 << (params.x_width - 1)
    xin_re = [rng.randrange(-lim, lim) for _ in range(2 * n)]
    xin_im = [rng.randrange(-lim, lim) for _ in range(2 * n)]
    train = [UNTRAINED] * n
    return xin_re, xin_im, train, list(train)


def bench(impl, params, stream, repeat):
    best = float("inf")
    n = len(stream[2])
    for _ in range(repeat):
        s = qd.reset(params)
        state = [s.ffe_re, s.ffe_im, s.dfe_re, s.dfe_im,
                 s.x_re, s.x_im, s.sv_re, s.sv_im]
        t0 = time.perf_counter()
        impl(params.kernel_params(), *state, *stream)
        best = min(best, time.perf_counter() - t0)
    return n / best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--symbols", type=int, default=50000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    params = qd.DecoderParams(round_coef_updates=True, mu_shift=7)
    stream = make_stream(args.symbols, params)
    impls = backend.available_backends()

    print(f"symbols per run: {args.symbols}, best of {args.repeat}")
    rates = {}
    for name, impl in impls.items():
        rates[name] = bench(impl, params, stream, args.repeat)
        print(f"  {name:3s} backend: {rates[name]:12,.0f} symbols/s")
    if "c" in rates and "py" in rates:
        print(f"  speedup (c/py): {rates['c'] / rates['py']:.1f}x")
    if "c" not in impls:
        print("  compiled backend not built; only the fallback was measured")


if __name__ == "__main__":
    main()
