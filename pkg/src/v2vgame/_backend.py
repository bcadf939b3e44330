"""Selects the active scalar kernel at import time.

The compiled Cython kernel is preferred when present; the pure-Python
reference kernel is the fallback.  Selection can be forced through the
``V2VGAME_BACKEND`` environment variable:

* ``auto`` (default): compiled if importable, else pure Python
* ``cython``: compiled, raising if the extension was not built
* ``python``: pure Python, even when the extension exists

Both kernels implement identical semantics, so results do not depend on
which one is active.
"""

from __future__ import annotations

import os
import warnings

from . import _kernel_py

_CHOICES = ("auto", "cython", "python")


def _select():
    forced = os.environ.get("V2VGAME_BACKEND", "auto").strip().lower()
    if forced not in _CHOICES:
        warnings.warn(
            "unknown V2VGAME_BACKEND=%r; falling back to auto" % forced,
            stacklevel=2,
        )
        forced = "auto"
    if forced == "python":
        return _kernel_py
    try:
        from . import _kernel  # compiled extension, absent in pure installs
    except ImportError:
        if forced == "cython":
            raise ImportError(
                "V2VGAME_BACKEND=cython but the compiled kernel is not built; "
                "reinstall with Cython available or unset the variable"
            )
        return _kernel_py
    return _kernel


kernel = _select()
BACKEND_NAME = "cython" if kernel.COMPILED else "python"
