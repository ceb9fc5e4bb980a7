"""Backend selection for the hot loops.

The compiled extension is preferred; set ``SPACETIMELAB_PURE=1`` to force
the numpy fallback.
"""

import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("SPACETIMELAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

verlet_run = _impl.verlet_run
ca_run = _impl.ca_run

__all__ = ["BACKEND", "verlet_run", "ca_run"]
