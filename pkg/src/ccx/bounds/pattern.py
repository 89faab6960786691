"""Pattern matrices and the complement-row SetInc embedding.

The (n, t, f)-pattern matrix has rows indexed by x in {0,1}^n and columns
by (V, w) where V picks one offset per size-(n/t) block and w is a t-bit
mask; entries are f(x|_V xor w).  Block j covers coordinates
[j*(n/t), (j+1)*(n/t)); the column index is mixed-radix in the offsets
(least-significant block first) times 2^t plus w.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from ..pif import SetIncParams, make_setinc
from .paturi import fkl_vector

SIZE_CAP = 1 << 20


def pattern_dimensions(n: int, t: int) -> tuple[int, int]:
    if t <= 0 or n % t != 0:
        raise ParameterError("t must divide n")
    blk = n // t
    if blk < 2:
        raise ParameterError("block size n/t must be at least 2")
    return 1 << n, (blk**t) * (1 << t)


def pattern_matrix(n: int, t: int, fvec) -> np.ndarray:
    """Dense int8 pattern matrix with 0 marking undefined entries."""
    rows, cols = pattern_dimensions(n, t)
    if rows * cols > SIZE_CAP:
        raise ParameterError(f"pattern matrix would exceed {SIZE_CAP} entries")
    fvec = np.asarray(fvec, dtype=np.int8)
    if fvec.shape != (1 << t,):
        raise ParameterError(f"fvec must have length 2^{t}")
    blk = n // t
    out = np.empty((rows, cols), dtype=np.int8)
    offsets = np.empty((cols, t), dtype=np.int64)
    masks = np.empty(cols, dtype=np.int64)
    for col in range(cols):
        v, w = divmod(col, 1 << t)
        masks[col] = w
        for j in range(t):
            offsets[col, j] = v % blk
            v //= blk
    xs = np.arange(rows, dtype=np.int64)
    for col in range(cols):
        proj = np.zeros(rows, dtype=np.int64)
        for j in range(t):
            bitpos = j * blk + offsets[col, j]
            proj |= ((xs >> bitpos) & 1) << j
        out[:, col] = fvec[proj ^ masks[col]]
    return out


def interleave_complement(x: int, k: int) -> int:
    """x_0 ~x_0 x_1 ~x_1 ... over 2k coordinates -> a 4k-bit string of weight 2k."""
    z = 0
    for i in range(2 * k):
        bit = (x >> i) & 1
        z |= bit << (2 * i)
        z |= (bit ^ 1) << (2 * i + 1)
    return z


def esetinc_proof_table(k: int, l2: int):
    """ESetInc^{4k}_{2k,k,l,1/2} oriented as in the pattern-matrix embedding.

    The embedding identifies pattern entries with f_{k,l} values, which put
    -1 at |x&y| = l-1/2; that is the barred form of the base orientation
    (which maps c-g to +1), hence bar=True here.
    """
    return make_setinc(SetIncParams(4 * k, 2 * k, k, c2=l2, g2=1, variant="esetinc", bar=True))


def check_pattern_submatrix(k: int, l2: int) -> dict:
    """Exhaustively verify the complement-row pattern matrix embedding.

    Builds the (2k, k, f_{k,l})-pattern matrix and checks every defined
    entry equals ESetInc^{4k}_{2k,k,l,1/2} at (z, y) where z interleaves x
    with its complement and y is the indicator of the selected coordinates.
    Returns counters; raises nothing on mismatch, reports it.
    """
    n, t = 2 * k, k
    blk = n // t  # == 2
    P = pattern_matrix(n, t, fkl_vector(k, l2))
    table = esetinc_proof_table(k, l2)
    rows, cols = P.shape
    checked = mismatched = defined = 0
    for x in range(rows):
        z = interleave_complement(x, k)
        for col in range(cols):
            v, w = divmod(col, 1 << t)
            y = 0
            vv = v
            for j in range(t):
                off = vv % blk
                vv //= blk
                y |= 1 << (4 * j + 2 * off + ((w >> j) & 1))
            val = table.eval(z, y, 4 * k, 4 * k)
            checked += 1
            if P[x, col] != 0:
                defined += 1
                if val != P[x, col]:
                    mismatched += 1
            elif val != 0:
                mismatched += 1
    return {"checked": checked, "defined": defined, "mismatched": mismatched}
