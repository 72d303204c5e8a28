"""Select the compiled commutator sweep when available.

Set ``CHARGEHUNT_PURE_PYTHON=1`` to force the pure-Python implementation.
"""

import os

from . import _kernels_py

BACKEND = "python"
pair_commutators = _kernels_py.pair_commutators

if os.environ.get("CHARGEHUNT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        pair_commutators = _kernels.pair_commutators
        BACKEND = "cython"
