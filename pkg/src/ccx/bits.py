"""Bit-vector helpers.

Inputs are stored as Python ints in coordinate order: bit i of the int is
coordinate i of the string, and coordinate 0 is the leftmost character of
the textual form.  So parse_bits("1100") == 0b0011.
"""

from __future__ import annotations

from .errors import ParameterError
from .rng import Stream


def parse_bits(s: str) -> tuple[int, int]:
    """Parse a 0/1 string into (value, length)."""
    if not s or any(ch not in "01" for ch in s):
        raise ParameterError(f"not a bitstring: {s!r}")
    v = 0
    for i, ch in enumerate(s):
        if ch == "1":
            v |= 1 << i
    return v, len(s)


def format_bits(x: int, n: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def popcount(x: int) -> int:
    return x.bit_count()


def full_mask(n: int) -> int:
    return (1 << n) - 1


def complement(x: int, n: int) -> int:
    return ~x & full_mask(n)


def support(x: int, n: int) -> list[int]:
    return [i for i in range(n) if (x >> i) & 1]


def from_support(idxs, n: int) -> int:
    v = 0
    for i in idxs:
        if not 0 <= i < n:
            raise ParameterError(f"index {i} out of range for n={n}")
        v |= 1 << i
    return v


def random_weight(n: int, w: int, stream: Stream) -> int:
    """Uniform string of Hamming weight w (partial Fisher-Yates on indices)."""
    if not 0 <= w <= n:
        raise ParameterError(f"weight {w} not achievable at n={n}")
    idx = list(range(n))
    v = 0
    for j in range(w):
        k = j + stream.below(n - j)
        idx[j], idx[k] = idx[k], idx[j]
        v |= 1 << idx[j]
    return v


def plant_pair(n: int, a: int, b: int, inter: int, stream: Stream) -> tuple[int, int]:
    """Random (x, y) with |x| = a, |y| = b, |x & y| = inter."""
    if inter < max(0, a + b - n) or inter > min(a, b):
        raise ParameterError(f"|x&y|={inter} unachievable for n={n}, a={a}, b={b}")
    idx = list(range(n))
    for j in range(n - 1, 0, -1):
        k = stream.below(j + 1)
        idx[j], idx[k] = idx[k], idx[j]
    shared = idx[:inter]
    x_only = idx[inter : inter + (a - inter)]
    y_only = idx[inter + (a - inter) : inter + (a - inter) + (b - inter)]
    return from_support(shared + x_only, n), from_support(shared + y_only, n)
