"""Dense matrices over a prime field and exact rank computation.

The default field is F_p with p = 2^61 - 1; rank over F_p lower-bounds the
rational rank, which is the direction every consumer needs.  A slow exact
rational elimination is provided for small cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .. import backend
from ..errors import ParameterError
from ..pif import PIFunctionTable

P61 = (1 << 61) - 1

FULL_MATRIX_CAP = 12  # 2^12 x 2^12 at most


@dataclass(frozen=True)
class FieldMatrix:
    data: np.ndarray  # uint64, entries already reduced mod p
    p: int
    provenance: str = ""

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def rank(self) -> int:
        return backend.rank_mod_p(self.data, self.p)


def _encode(values: np.ndarray, encoding: str, p: int) -> np.ndarray:
    if encoding == "pm1":
        if np.any(values == 0):
            raise ParameterError("pm1 encoding requires a total function")
        return np.where(values == 1, np.uint64(1), np.uint64(p - 1))
    if encoding == "zero_one":
        # indicator of the -1 outputs, matching the primed 0/1 variants
        return np.where(values == -1, np.uint64(1), np.uint64(0))
    raise ParameterError(f"unknown encoding {encoding!r}")


def _value_cube(f: PIFunctionTable) -> np.ndarray:
    n = f.n
    cube = np.zeros((n + 1, n + 1, n + 1), dtype=np.int8)
    for (a, b, c), v in f.entries.items():
        cube[a, b, c] = v
    return cube


def pif_matrix(f: PIFunctionTable, encoding: str = "pm1", p: int = P61) -> FieldMatrix:
    """The full 2^n x 2^n input matrix of a PI function over F_p."""
    n = f.n
    if n > FULL_MATRIX_CAP:
        raise ParameterError(f"full matrix capped at n <= {FULL_MATRIX_CAP}")
    xs = np.arange(1 << n, dtype=np.uint64)
    w = np.bitwise_count(xs).astype(np.int64)
    inter = np.bitwise_count(xs[:, None] & xs[None, :]).astype(np.int64)
    cube = _value_cube(f)
    vals = cube[w[:, None], w[None, :], inter]
    if encoding == "pm1" and np.any(vals == 0):
        raise ParameterError("pm1 encoding requires a total function")
    return FieldMatrix(_encode(vals, encoding, p), p, f"pif:{f.name}:{encoding}")


def weight_slice_matrix(
    f: PIFunctionTable, a: int, b: int, encoding: str = "pm1", p: int = P61
) -> FieldMatrix:
    """The C(n,a) x C(n,b) block of the input matrix at fixed weights."""
    n = f.n
    rows = [_from_support(s) for s in combinations(range(n), a)]
    cols = [_from_support(s) for s in combinations(range(n), b)]
    vals = np.empty((len(rows), len(cols)), dtype=np.int8)
    for i, x in enumerate(rows):
        for j, y in enumerate(cols):
            vals[i, j] = f.value_at(a, b, (x & y).bit_count())
    return FieldMatrix(_encode(vals, encoding, p), p, f"slice:{f.name}:{a},{b}:{encoding}")


def _from_support(s) -> int:
    v = 0
    for i in s:
        v |= 1 << i
    return v


def disj_slice_values(n: int, k: int) -> np.ndarray:
    """+-1 weight-k Set-Disjointness block: -1 iff disjoint."""
    rows = [_from_support(s) for s in combinations(range(n), k)]
    vals = np.empty((len(rows), len(rows)), dtype=np.int8)
    for i, x in enumerate(rows):
        for j, y in enumerate(rows):
            vals[i, j] = -1 if (x & y) == 0 else 1
    return vals

def eq_slice_values(n: int, k: int) -> np.ndarray:
    """+-1 weight-k Equality block: -1 iff equal."""
    m = math.comb(n, k)
    vals = np.ones((m, m), dtype=np.int8)
    np.fill_diagonal(vals, -1)
    return vals


def matrix_from_values(vals: np.ndarray, encoding: str, p: int = P61, provenance: str = "") -> FieldMatrix:
    return FieldMatrix(_encode(np.asarray(vals, dtype=np.int8), encoding, p), p, provenance)


def rank_mod_p(m: FieldMatrix) -> int:
    return m.rank()


def rank_rational(mat) -> int:
    """Exact fraction-free rank; slow, for cross-checks at small sizes."""
    rowsl = [[Fraction(int(v)) for v in row] for row in np.asarray(mat)]
    if not rowsl:
        return 0
    rank = 0
    cols = len(rowsl[0])
    for col in range(cols):
        piv = next((r for r in range(rank, len(rowsl)) if rowsl[r][col] != 0), None)
        if piv is None:
            continue
        rowsl[rank], rowsl[piv] = rowsl[piv], rowsl[rank]
        inv = 1 / rowsl[rank][col]
        for r in range(rank + 1, len(rowsl)):
            f = rowsl[r][col] * inv
            if f:
                rowsl[r] = [x - f * y for x, y in zip(rowsl[r], rowsl[rank])]
        rank += 1
        if rank == len(rowsl):
            break
    return rank
