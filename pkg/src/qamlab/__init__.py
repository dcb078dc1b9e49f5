"""qamlab: bit-exact fixed-point 64-QAM equalizer lab and HLS-style
latency/data-rate/area architecture explorer.

The decoder inner loop runs on a compiled Cython kernel when available and
falls back to a bit-identical pure-Python kernel (see qamlab.backend).
"""

from .backend import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
