"""Pure-Python decoder kernel operating on raw integer mantissas.

This is the fallback twin of the compiled kernel in ``_kernel_c.pyx``; both
must produce bit-identical results (see tests/test_backends.py).  All state
arrays are plain lists of ints holding raw mantissas:

* ``ffe/dfe`` coefficients on the 2**-cfw / 2**-cdw grid,
* ``x`` input taps on the 2**-xw grid,
* ``sv`` past decisions on the 2**-4 slicer grid.

``train_r``/``train_i`` carry forced decision levels in [-4, 3]; the
sentinel ``UNTRAINED`` selects decision-directed operation for a step.
"""

from __future__ import annotations

UNTRAINED = 127


def _wrap(v: int, w: int) -> int:
    m = v & ((1 << w) - 1)
    return m - (1 << w) if m >= 1 << (w - 1) else m


def _shr(v: int, d: int) -> int:
    # Floor shift with support for negative distances (exact widening).
    return v >> d if d >= 0 else v << -d


def decode_block(
    params: tuple,
    ffe_re: list, ffe_im: list, dfe_re: list, dfe_im: list,
    x_re: list, x_im: list, sv_re: list, sv_im: list,
    xin_re: list, xin_im: list,
    train_r: list, train_i: list,
):
    """Decode len(train_r) symbols in place; returns per-step outputs.

    Returns (symbols, y_re, y_im, e_re, e_im, sv0_re, sv0_im) raw lists;
    y on the 2**-fw grid (fw+1 bits), e on the 2**-fw grid (fw bits),
    sv0 on the 2**-4 grid.
    """
    (nffe, ndfe, xw, fw, dw, cfw, cdw, mu_f, mu_d, round_updates) = params
    n = len(train_r)

    d_f = xw + cfw - fw          # FFE product grid -> FFE accumulator grid
    d_d = 4 + cdw - dw           # DFE product grid -> DFE accumulator grid
    g = max(fw, dw)              # common grid for yffe - ydfe
    half = 1 << (fw - 1)         # RND bias for coefficient updates

    syms = [0] * n
    oy_re = [0] * n
    oy_im = [0] * n
    oe_re = [0] * n
    oe_im = [0] * n
    osv_re = [0] * n
    osv_im = [0] * n

    for step in range(n):
        x_re[0] = xin_re[2 * step]
        x_im[0] = xin_im[2 * step]
        x_re[1] = xin_re[2 * step + 1]
        x_im[1] = xin_im[2 * step + 1]

        yffe_re = yffe_im = 0
        for k in range(nffe):
            pr = x_re[k] * ffe_re[k] - x_im[k] * ffe_im[k]
            pi = x_re[k] * ffe_im[k] + x_im[k] * ffe_re[k]
            yffe_re = _wrap(yffe_re + _shr(pr, d_f), fw + 1)
            yffe_im = _wrap(yffe_im + _shr(pi, d_f), fw + 1)

        ydfe_re = ydfe_im = 0
        for k in range(ndfe):
            pr = sv_re[k] * dfe_re[k] - sv_im[k] * dfe_im[k]
            pi = sv_re[k] * dfe_im[k] + sv_im[k] * dfe_re[k]
            ydfe_re = _wrap(ydfe_re + _shr(pr, d_d), dw + 1)
            ydfe_im = _wrap(ydfe_im + _shr(pi, d_d), dw + 1)

        y_re = _wrap(_shr((yffe_re << (g - fw)) - (ydfe_re << (g - dw)), g - fw), fw + 1)
        y_im = _wrap(_shr((yffe_im << (g - fw)) - (ydfe_im << (g - dw)), g - fw), fw + 1)

        # 64-QAM slicer: nearest level, boundary halfway between points.
        # level k owns (k*2**-3, (k+1)*2**-3]; ceil(8y)-1 done as floor(8y-lsb),
        # saturated to the 3-bit level range.
        lvl_r = min(max((y_re - 1) >> (fw - 3), -4), 3)
        lvl_i = min(max((y_im - 1) >> (fw - 3), -4), 3)
        sym = (8 * lvl_r + lvl_i) & 63

        if train_r[step] != UNTRAINED:
            sv0_re = 2 * train_r[step] + 1
            sv0_im = 2 * train_i[step] + 1
        else:
            sv0_re = 2 * lvl_r + 1
            sv0_im = 2 * lvl_i + 1
        sv_re[0] = sv0_re
        sv_im[0] = sv0_im

        e_re = _wrap((sv0_re << (fw - 4)) - y_re, fw)
        e_im = _wrap((sv0_im << (fw - 4)) - y_im, fw)

        # Sign-LMS adaptation, mu * (e * sign_conj(data)) per coefficient.
        for k in range(nffe):
            sr = (x_re[k] > 0) - (x_re[k] < 0)
            si = (x_im[k] < 0) - (x_im[k] > 0)
            ur = e_re * sr - e_im * si
            ui = e_re * si + e_im * sr
            if round_updates:
                ffe_re[k] = _wrap(ffe_re[k] + ((mu_f * ur + half) >> fw), cfw)
                ffe_im[k] = _wrap(ffe_im[k] + ((mu_f * ui + half) >> fw), cfw)
            else:
                ffe_re[k] = _wrap(ffe_re[k] + ((mu_f * ur) >> fw), cfw)
                ffe_im[k] = _wrap(ffe_im[k] + ((mu_f * ui) >> fw), cfw)
        for k in range(ndfe):
            sr = (sv_re[k] > 0) - (sv_re[k] < 0)
            si = (sv_im[k] < 0) - (sv_im[k] > 0)
            ur = e_re * sr - e_im * si
            ui = e_re * si + e_im * sr
            if round_updates:
                dfe_re[k] = _wrap(dfe_re[k] + ((-mu_d * ur + half) >> fw), cdw)
                dfe_im[k] = _wrap(dfe_im[k] + ((-mu_d * ui + half) >> fw), cdw)
            else:
                dfe_re[k] = _wrap(dfe_re[k] + ((-mu_d * ur) >> fw), cdw)
                dfe_im[k] = _wrap(dfe_im[k] + ((-mu_d * ui) >> fw), cdw)

        for k in range(nffe - 4, -1, -2):
            x_re[k + 3] = x_re[k + 1]
            x_im[k + 3] = x_im[k + 1]
            x_re[k + 2] = x_re[k]
            x_im[k + 2] = x_im[k]
        for k in range(ndfe - 2, -1, -1):
            sv_re[k + 1] = sv_re[k]
            sv_im[k + 1] = sv_im[k]

        syms[step] = sym
        oy_re[step] = y_re
        oy_im[step] = y_im
        oe_re[step] = e_re
        oe_im[step] = e_im
        osv_re[step] = sv0_re
        osv_im[step] = sv0_im

    return syms, oy_re, oy_im, oe_re, oe_im, osv_re, osv_im
