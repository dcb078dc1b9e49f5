# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled decoder kernel; bit-identical twin of ``_kernel_py``.

Raw mantissas stay within 64-bit range because DecoderParams caps widths
at 24 bits, so all intermediates here fit comfortably in int64.
"""

import numpy as np

UNTRAINED = 127

ctypedef long long i64

cdef i64 _UNTRAINED = 127


cdef inline i64 _wrap(i64 v, int w) nogil:
    cdef i64 m = v & ((<i64>1 << w) - 1)
    if m >= (<i64>1 << (w - 1)):
        m -= (<i64>1 << w)
    return m


cdef inline i64 _shr(i64 v, int d) nogil:
    if d >= 0:
        return v >> d
    return v << (-d)


def decode_block(
    params,
    ffe_re, ffe_im, dfe_re, dfe_im,
    x_re, x_im, sv_re, sv_im,
    xin_re, xin_im,
    train_r, train_i,
):
    """Same contract as qamlab._kernel_py.decode_block."""
    nffe_, ndfe_, xw_, fw_, dw_, cfw_, cdw_, mu_f_, mu_d_, round_updates_ = params
    cdef int nffe = nffe_, ndfe = ndfe_, xw = xw_, fw = fw_, dw = dw_
    cdef int cfw = cfw_, cdw = cdw_
    cdef i64 mu_f = mu_f_, mu_d = mu_d_
    cdef bint round_updates = bool(round_updates_)

    cdef i64[::1] cf_re = np.asarray(ffe_re, dtype=np.int64)
    cdef i64[::1] cf_im = np.asarray(ffe_im, dtype=np.int64)
    cdef i64[::1] cd_re = np.asarray(dfe_re, dtype=np.int64)
    cdef i64[::1] cd_im = np.asarray(dfe_im, dtype=np.int64)
    cdef i64[::1] tx_re = np.asarray(x_re, dtype=np.int64)
    cdef i64[::1] tx_im = np.asarray(x_im, dtype=np.int64)
    cdef i64[::1] ts_re = np.asarray(sv_re, dtype=np.int64)
    cdef i64[::1] ts_im = np.asarray(sv_im, dtype=np.int64)
    cdef i64[::1] in_re = np.asarray(xin_re, dtype=np.int64)
    cdef i64[::1] in_im = np.asarray(xin_im, dtype=np.int64)
    cdef i64[::1] tr_r = np.asarray(train_r, dtype=np.int64)
    cdef i64[::1] tr_i = np.asarray(train_i, dtype=np.int64)

    cdef Py_ssize_t n = tr_r.shape[0]
    cdef i64[::1] syms = np.zeros(n, dtype=np.int64)
    cdef i64[::1] oy_re = np.zeros(n, dtype=np.int64)
    cdef i64[::1] oy_im = np.zeros(n, dtype=np.int64)
    cdef i64[::1] oe_re = np.zeros(n, dtype=np.int64)
    cdef i64[::1] oe_im = np.zeros(n, dtype=np.int64)
    cdef i64[::1] os_re = np.zeros(n, dtype=np.int64)
    cdef i64[::1] os_im = np.zeros(n, dtype=np.int64)

    cdef int d_f = xw + cfw - fw
    cdef int d_d = 4 + cdw - dw
    cdef int g = fw if fw > dw else dw
    cdef i64 half = <i64>1 << (fw - 1)

    cdef Py_ssize_t step
    cdef int k, lvl_r, lvl_i
    cdef i64 yffe_re, yffe_im, ydfe_re, ydfe_im, pr, pi
    cdef i64 y_re, y_im, t, e_re, e_im, sv0_re, sv0_im, ur, ui
    cdef i64 sr, si, sym

    with nogil:
        for step in range(n):
            tx_re[0] = in_re[2 * step]
            tx_im[0] = in_im[2 * step]
            tx_re[1] = in_re[2 * step + 1]
            tx_im[1] = in_im[2 * step + 1]

            yffe_re = 0
            yffe_im = 0
            for k in range(nffe):
                pr = tx_re[k] * cf_re[k] - tx_im[k] * cf_im[k]
                pi = tx_re[k] * cf_im[k] + tx_im[k] * cf_re[k]
                yffe_re = _wrap(yffe_re + _shr(pr, d_f), fw + 1)
                yffe_im = _wrap(yffe_im + _shr(pi, d_f), fw + 1)

            ydfe_re = 0
            ydfe_im = 0
            for k in range(ndfe):
                pr = ts_re[k] * cd_re[k] - ts_im[k] * cd_im[k]
                pi = ts_re[k] * cd_im[k] + ts_im[k] * cd_re[k]
                ydfe_re = _wrap(ydfe_re + _shr(pr, d_d), dw + 1)
                ydfe_im = _wrap(ydfe_im + _shr(pi, d_d), dw + 1)

            y_re = _wrap(_shr((yffe_re << (g - fw)) - (ydfe_re << (g - dw)), g - fw), fw + 1)
            y_im = _wrap(_shr((yffe_im << (g - fw)) - (ydfe_im << (g - dw)), g - fw), fw + 1)

            # nearest level, boundary halfway between points; ties to the
            # lower level: level = floor(8y - lsb) saturated to [-4, 3]
            t = (y_re - 1) >> (fw - 3)
            if t < -4:
                t = -4
            elif t > 3:
                t = 3
            lvl_r = <int>t
            t = (y_im - 1) >> (fw - 3)
            if t < -4:
                t = -4
            elif t > 3:
                t = 3
            lvl_i = <int>t
            sym = (8 * lvl_r + lvl_i) & 63

            if tr_r[step] != _UNTRAINED:
                sv0_re = 2 * tr_r[step] + 1
                sv0_im = 2 * tr_i[step] + 1
            else:
                sv0_re = 2 * lvl_r + 1
                sv0_im = 2 * lvl_i + 1
            ts_re[0] = sv0_re
            ts_im[0] = sv0_im

            e_re = _wrap((sv0_re << (fw - 4)) - y_re, fw)
            e_im = _wrap((sv0_im << (fw - 4)) - y_im, fw)

            for k in range(nffe):
                sr = (tx_re[k] > 0) - (tx_re[k] < 0)
                si = (tx_im[k] < 0) - (tx_im[k] > 0)
                ur = e_re * sr - e_im * si
                ui = e_re * si + e_im * sr
                if round_updates:
                    cf_re[k] = _wrap(cf_re[k] + ((mu_f * ur + half) >> fw), cfw)
                    cf_im[k] = _wrap(cf_im[k] + ((mu_f * ui + half) >> fw), cfw)
                else:
                    cf_re[k] = _wrap(cf_re[k] + ((mu_f * ur) >> fw), cfw)
                    cf_im[k] = _wrap(cf_im[k] + ((mu_f * ui) >> fw), cfw)
            for k in range(ndfe):
                sr = (ts_re[k] > 0) - (ts_re[k] < 0)
                si = (ts_im[k] < 0) - (ts_im[k] > 0)
                ur = e_re * sr - e_im * si
                ui = e_re * si + e_im * sr
                if round_updates:
                    cd_re[k] = _wrap(cd_re[k] + ((-mu_d * ur + half) >> fw), cdw)
                    cd_im[k] = _wrap(cd_im[k] + ((-mu_d * ui + half) >> fw), cdw)
                else:
                    cd_re[k] = _wrap(cd_re[k] + ((-mu_d * ur) >> fw), cdw)
                    cd_im[k] = _wrap(cd_im[k] + ((-mu_d * ui) >> fw), cdw)

            k = nffe - 4
            while k >= 0:
                tx_re[k + 3] = tx_re[k + 1]
                tx_im[k + 3] = tx_im[k + 1]
                tx_re[k + 2] = tx_re[k]
                tx_im[k + 2] = tx_im[k]
                k -= 2
            for k in range(ndfe - 2, -1, -1):
                ts_re[k + 1] = ts_re[k]
                ts_im[k + 1] = ts_im[k]

            syms[step] = sym
            oy_re[step] = y_re
            oy_im[step] = y_im
            oe_re[step] = e_re
            oe_im[step] = e_im
            os_re[step] = sv0_re
            os_im[step] = sv0_im

    ffe_re[:] = list(cf_re)
    ffe_im[:] = list(cf_im)
    dfe_re[:] = list(cd_re)
    dfe_im[:] = list(cd_im)
    x_re[:] = list(tx_re)
    x_im[:] = list(tx_im)
    sv_re[:] = list(ts_re)
    sv_im[:] = list(ts_im)

    return (
        list(syms), list(oy_re), list(oy_im),
        list(oe_re), list(oe_im), list(os_re), list(os_im),
    )
