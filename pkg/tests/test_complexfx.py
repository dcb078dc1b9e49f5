"""Tests for the complex fixed-point wrapper."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qamlab import complexfx as cfx
from qamlab import fixedpoint as fx
from qamlab.complexfx import CFx, cconvert_exact, cmul, czero, sign_conj
from qamlab.fixedpoint import FxFormat, FxValue

FMT = FxFormat(10, 2)


def cvals(fmt=FMT):
    raws = st.integers(fmt.min_raw, fmt.max_raw)
    return st.tuples(raws, raws).map(
        lambda p: CFx(FxValue(p[0], fmt), FxValue(p[1], fmt))
    )


def as_complex(a: CFx) -> complex:
    return complex(a.re.value, a.im.value)


def test_component_formats_must_match():
    with pytest.raises(ValueError):
        CFx(fx.zero(FxFormat(4, 0)), fx.zero(FxFormat(5, 0)))


def test_zero_and_str():
    z = czero(FxFormat(11, 1))
    assert (z.re.raw, z.im.raw) == (0, 0)
    v = cconvert_exact(Fraction(-1, 16), Fraction(-1, 16), FxFormat(11, 1))
    assert str(v) == "(-0.0625, -0.0625)"


@given(cvals(), cvals())
def test_add_sub_match_exact_complex(a, b):
    assert as_complex(a + b) == as_complex(a) + as_complex(b)
    assert as_complex(a - b) == as_complex(a) - as_complex(b)


@given(cvals(FxFormat(8, 1)), cvals(FxFormat(8, 1)))
def test_mul_matches_exact_complex(a, b):
    out = cmul(a, b)
    assert as_complex(out) == as_complex(a) * as_complex(b)
    # 4-mult expansion widths: products widen, then one add/sub level
    assert out.fmt.width == 17


@pytest.mark.parametrize("re,im,sr,si", [
    (Fraction(1, 2), Fraction(-1, 4), 1, 1),
    (Fraction(-3, 8), Fraction(1, 8), -1, -1),
    (Fraction(0), Fraction(5, 8), 0, -1),
    (Fraction(0), Fraction(0), 0, 0),
])
def test_sign_conj(re, im, sr, si):
    v = cconvert_exact(re, im, FMT)
    s = sign_conj(v)
    assert (s.re.raw, s.im.raw) == (sr, si)
    assert s.fmt == cfx.SIGN_FORMAT


@given(cvals())
def test_sign_conj_matches_conjugate_signs(a):
    s = sign_conj(a)
    assert s.re.raw == (a.re.raw > 0) - (a.re.raw < 0)
    assert s.im.raw == -((a.im.raw > 0) - (a.im.raw < 0))


def test_cconvert_narrows_both_dims():
    v = cconvert_exact(Fraction(7, 8), Fraction(-7, 8), FxFormat(12, 2))
    out = cfx.cconvert(v, FxFormat(4, 2))
    assert out.re.value == Fraction(3, 4)    # TRN toward -inf
    assert out.im.value == Fraction(-1)
