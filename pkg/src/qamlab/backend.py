"""Kernel backend selection: compiled extension if available, else pure Python.

Set QAMLAB_BACKEND=py or QAMLAB_BACKEND=c to force a backend; forcing the
compiled one raises if the extension was not built.
"""

from __future__ import annotations

import os

from . import _kernel_py

try:
    from . import _kernel_c
except ImportError:
    _kernel_c = None

_forced = os.environ.get("QAMLAB_BACKEND", "").lower()
if _forced in ("py", "python"):
    _impl = _kernel_py
elif _forced in ("c", "cy", "compiled"):
    if _kernel_c is None:
        raise ImportError("QAMLAB_BACKEND=c requested but the compiled kernel is not built")
    _impl = _kernel_c
elif _forced:
    raise ValueError(f"unknown QAMLAB_BACKEND value: {_forced!r}")
else:
    _impl = _kernel_c if _kernel_c is not None else _kernel_py

BACKEND = "c" if _impl is _kernel_c else "py"
UNTRAINED = _kernel_py.UNTRAINED

decode_block = _impl.decode_block


def available_backends() -> dict:
    out = {"py": _kernel_py.decode_block}
    if _kernel_c is not None:
        out["c"] = _kernel_c.decode_block
    return out
