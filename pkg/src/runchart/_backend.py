"""Kernel selection: compiled extension when built, NumPy fallback otherwise.

Set RUNCHART_PURE=1 in the environment to force the fallback (the benchmark
and the backend-equivalence tests use this).
"""

import os

if os.environ.get("RUNCHART_PURE"):
    from . import _kernel_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernel as _impl  # compiled extension, built by setup.py

        BACKEND = "compiled"
    except ImportError:
        from . import _kernel_py as _impl

        BACKEND = "python"

survival = _impl.survival
extend = _impl.extend
