"""Pick the compiled Newton kernel when present, else the numpy one.

Set ``SPECTRAL_CAT_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _newton_py

NAME = "python"
newton_solve = _newton_py.newton_solve
newton_batch = _newton_py.newton_batch

if os.environ.get("SPECTRAL_CAT_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _newton
    except ImportError:
        pass
    else:
        NAME = "cython"
        newton_solve = _newton.newton_solve
        newton_batch = _newton.newton_batch

OK = _newton_py.OK
NO_CONVERGENCE = _newton_py.NO_CONVERGENCE
SINGULAR = _newton_py.SINGULAR
