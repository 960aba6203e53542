"""Kernel backend selection: compiled extension when built, numpy fallback
otherwise.  Set SEQOPT_FORCE_PYTHON=1 to force the fallback."""

import os

from . import _kernels_py

if os.environ.get("SEQOPT_FORCE_PYTHON"):
    _impl = _kernels_py
    HAVE_COMPILED = False
else:
    try:
        from . import _kernels as _impl
        HAVE_COMPILED = True
    except ImportError:
        _impl = _kernels_py
        HAVE_COMPILED = False

BACKEND = "compiled" if HAVE_COMPILED else "python"

quartic_value_grad = _impl.quartic_value_grad
mc_batch = _impl.mc_batch
