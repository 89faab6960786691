"""ccx: protocols and complexity measures for permutation-invariant functions.

Subpackages: pif (joint-type tables, slices, jumps, the measure), sim
(two-party execution, Monte Carlo harness, TCP transport), protocols
(classical and quantum SetInc, the jump binary search, the deterministic
total protocol), bounds (reduction certificates, degree/pattern/rank
witnesses), cli (the ccx command).  The hot kernels run on a compiled
extension when available; see ccx.backend.
"""

from . import backend
from .pif import (
    PIFunctionTable,
    SetIncParams,
    derive_slice,
    disj_table,
    eq_table,
    eval_pif,
    intervals,
    jumps,
    make_setinc,
    measure_m,
    setinc_ghd_convert,
    smallest_two,
)

__version__ = "0.1.0"

__all__ = [
    "backend",
    "PIFunctionTable",
    "SetIncParams",
    "derive_slice",
    "disj_table",
    "eq_table",
    "eval_pif",
    "intervals",
    "jumps",
    "make_setinc",
    "measure_m",
    "setinc_ghd_convert",
    "smallest_two",
    "__version__",
]
