"""Hot kernels, compiled when available.

The Cython extension ``_ckernels`` is used when it was built; otherwise (or
when ``SHAPLAB_PURE=1`` is set) the numpy implementations in ``_pykernels`` are
used.  ``BACKEND`` names the active choice.
"""
import os

from . import _pykernels as python

compiled = None
if os.environ.get("SHAPLAB_PURE") != "1":
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

shift_weights = _impl.shift_weights
fwht = _impl.fwht
project_accept = _impl.project_accept
sampled_estimates = _impl.sampled_estimates

__all__ = ["BACKEND", "compiled", "python", "shift_weights", "fwht", "project_accept", "sampled_estimates"]
