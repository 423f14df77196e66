"""Kernel dispatch: the compiled extension when importable, else pure Python.

Set ``VARIETYDVFS_PURE=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
select_frequencies = _kernels_py.select_frequencies
run_timeline = _kernels_py.run_timeline

if os.environ.get("VARIETYDVFS_PURE") != "1":
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        select_frequencies = _compiled.select_frequencies
        run_timeline = _compiled.run_timeline
