"""Kernel backend selection.

The compiled extension is preferred; the pure-Python module is the
fallback. Set GRAPHMOTION_BACKEND=python (or =c) to force one.
"""

import os

from . import _pykernels

_forced = os.environ.get("GRAPHMOTION_BACKEND", "").lower()

if _forced == "python":
    kernels = _pykernels
elif _forced == "c":
    from . import _ckernels as kernels  # noqa: F401  (raises if not built)
else:
    try:
        from . import _ckernels as kernels
    except ImportError:
        kernels = _pykernels


def backend_name():
    return kernels.BACKEND


def get_backend(name):
    """Return a specific kernel module by name ("c" or "python")."""
    if name == "python":
        return _pykernels
    if name == "c":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
