"""Pure-Python and compiled kernels must be bit-identical."""

import os
import random
import subprocess
import sys

import pytest

from qamlab import backend
from qamlab import qam_decoder as qd
from qamlab._kernel_py import UNTRAINED


def fresh_state(p):
    s = qd.reset(p)
    return [
        s.ffe_re, s.ffe_im, s.dfe_re, s.dfe_im,
        s.x_re, s.x_im, s.sv_re, s.sv_im,
    ]


def random_stream(rng, n, p):
    lim = 1 << (p.x_width - 1)
    xin_re = [rng.randrange(-lim, lim) for _ in range(2 * n)]
    xin_im = [rng.randrange(-lim, lim) for _ in range(2 * n)]
    train_r, train_i = [], []
    for k in range(n):
        if k % 4 == 0:
            lr, li = qd.symbol_to_levels(rng.randrange(64))
            train_r.append(lr)
            train_i.append(li)
        else:
            train_r.append(UNTRAINED)
            train_i.append(UNTRAINED)
    return xin_re, xin_im, train_r, train_i


def test_backend_identifier_is_consistent():
    impls = backend.available_backends()
    assert "py" in impls
    assert backend.BACKEND in impls
    assert backend.decode_block is impls[backend.BACKEND]


@pytest.mark.skipif(
    "c" not in backend.available_backends(),
    reason="compiled kernel not built",
)
@pytest.mark.parametrize("round_updates", [False, True])
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_kernels_bit_identical(seed, round_updates):
    impls = backend.available_backends()
    p = qd.DecoderParams(round_coef_updates=round_updates)
    rng = random.Random(seed)
    stream = random_stream(rng, 400, p)

    results = []
    states = []
    for name in ("py", "c"):
        state = fresh_state(p)
        out = impls[name](p.kernel_params(), *state, *stream)
        results.append(tuple(tuple(col) for col in out))
        states.append([list(arr) for arr in state])
    assert results[0] == results[1]
    assert states[0] == states[1]


@pytest.mark.skipif(
    "c" not in backend.available_backends(),
    reason="compiled kernel not built",
)
def test_kernels_identical_on_nondefault_widths():
    impls = backend.available_backends()
    p = qd.DecoderParams(nffe=4, ndfe=8, x_width=12, ffe_width=12,
                         dfe_width=12, ffe_coef_width=12, dfe_coef_width=12,
                         mu_shift=6, round_coef_updates=True)
    rng = random.Random(9)
    stream = random_stream(rng, 200, p)
    outs = []
    for name in ("py", "c"):
        state = fresh_state(p)
        outs.append(impls[name](p.kernel_params(), *state, *stream))
    assert outs[0] == outs[1]


def _spawn_backend(value):
    env = dict(os.environ, QAMLAB_BACKEND=value)
    return subprocess.run(
        [sys.executable, "-c", "import qamlab.backend as b; print(b.BACKEND)"],
        capture_output=True, text=True, env=env,
    )


def test_env_var_forces_python_backend():
    r = _spawn_backend("py")
    assert r.returncode == 0
    assert r.stdout.strip() == "py"


def test_env_var_rejects_unknown_value():
    r = _spawn_backend("fortran")
    assert r.returncode != 0
    assert "QAMLAB_BACKEND" in r.stderr
