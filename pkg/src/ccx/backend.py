"""Kernel backend selection.

The compiled extension (ccx._ckernel) is preferred when importable; the
numpy fallback (ccx._kernel_py) is always available.  CCX_FORCE_PY=1 forces
the fallback.  Both expose the same functions with bit-identical outputs.
"""

from __future__ import annotations

import os

from . import _kernel_py

_impl = _kernel_py
if not os.environ.get("CCX_FORCE_PY"):
    try:
        from . import _ckernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernel_py

BACKEND_NAME = _impl.BACKEND_NAME
HAS_CKERNEL = _impl is not _kernel_py

P61 = _kernel_py.P61

rank_mod_p = _impl.rank_mod_p
setinc_trial_batch = _impl.setinc_trial_batch
sample_diff_batch = _impl.sample_diff_batch

# Always-available references for cross-backend tests and benchmarks.
py_impl = _kernel_py


def compiled_impl():
    """The compiled module, or None when running on the fallback."""
    return _impl if HAS_CKERNEL else None
