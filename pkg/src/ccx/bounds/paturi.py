"""Approximate-degree witnesses for symmetric predicates.

A predicate is an int8 array over weights {0..n} with values in {-1, +1}
and 0 for undefined.  gamma(D) = min |2k - n + 1| over defined adjacent
transitions D(k) != D(k+1); the associated degree value is
sqrt(n * (n - gamma)).
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import NoTransition, ParameterError


def predicate(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int8)
    if arr.ndim != 1 or arr.size < 2:
        raise ParameterError("predicate needs at least two weight classes")
    if not np.all(np.isin(arr, (-1, 0, 1))):
        raise ParameterError("predicate values must be -1, +1 or 0 (undefined)")
    return arr


def transitions(pred: np.ndarray) -> list[int]:
    pred = predicate(pred)
    out = []
    for k in range(len(pred) - 1):
        if pred[k] != 0 and pred[k + 1] != 0 and pred[k] != pred[k + 1]:
            out.append(k)
    return out


def paturi_gamma(pred) -> tuple[int, float]:
    """(gamma, sqrt(n*(n-gamma))) for a predicate over {0..n}."""
    pred = predicate(pred)
    n = len(pred) - 1
    ts = transitions(pred)
    if not ts:
        raise NoTransition("predicate has no defined adjacent transition")
    gamma = min(abs(2 * k - n + 1) for k in ts)
    return gamma, math.sqrt(n * (n - gamma))


def fkl_predicate(k: int, l2: int) -> np.ndarray:
    """The partial symmetric function with -1 at weight l-1/2, +1 at l+1/2.

    l is the half-integer l2/2; requires 0 < l <= k/2 (l2 odd, 0 < l2 <= k).
    """
    if l2 <= 0 or l2 % 2 == 0 or l2 > k:
        raise ParameterError("l must be a half-integer in (0, k/2]")
    pred = np.zeros(k + 1, dtype=np.int8)
    pred[(l2 - 1) // 2] = -1
    pred[(l2 + 1) // 2] = 1
    return pred


def fkl_vector(k: int, l2: int) -> np.ndarray:
    """f_{k,l} on all 2^k inputs (by weight), as an int8 vector."""
    pred = fkl_predicate(k, l2)
    xs = np.arange(1 << k, dtype=np.uint64)
    weights = np.bitwise_count(xs).astype(np.int64)
    return pred[weights]
