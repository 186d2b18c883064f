"""Integration kernels with a compiled core and a pure-numpy fallback.

The compiled module is preferred when importable; set OSCNET_PURE_PYTHON=1
to force the fallback.  Both backends stay importable side by side so they
can be benchmarked and cross-checked against each other.
"""

from __future__ import annotations

import os

from . import _fallback as pure

try:
    from . import _core as compiled
except ImportError:
    compiled = None

if compiled is not None and not os.environ.get("OSCNET_PURE_PYTHON"):
    _active = compiled
else:
    _active = pure


def backend_name() -> str:
    """Name of the backend in use: "compiled" or "pure"."""
    return "compiled" if _active is compiled else "pure"


rk4_linear_complex = _active.rk4_linear_complex
rk4_linear_real = _active.rk4_linear_real
leapfrog_wave = _active.leapfrog_wave
rk4_phase = _active.rk4_phase
rk4_locked_imag = _active.rk4_locked_imag

__all__ = [
    "backend_name",
    "compiled",
    "pure",
    "rk4_linear_complex",
    "rk4_linear_real",
    "leapfrog_wave",
    "rk4_phase",
    "rk4_locked_imag",
]
