"""Uniformity of the difference sampler and its cost accounting."""

from collections import Counter

import numpy as np
from scipy.stats import chisquare

from ccx import backend
from ccx.bits import parse_bits, popcount
from ccx.protocols.classical import uniform_sample_pure
from ccx.rng import TAG_SAMPLE, derive_seed


def bits(s):
    return parse_bits(s)[0]


def test_singleton_difference_always_found():
    x, y = bits("11011"), bits("11010")
    idx, _ = backend.sample_diff_batch(x, y, 5, 123, 50)
    assert set(idx.tolist()) == {4}


def test_uniform_on_cancelling_instance():
    # x=1100, y=0010 has differences of both orientations; the permuted
    # search alone is provably biased here, the complement mask fixes it.
    x, y = bits("1100"), bits("0010")
    idx, _ = backend.sample_diff_batch(x, y, 4, 5151, 30000)
    cnt = Counter(idx.tolist())
    assert set(cnt) == {0, 1, 2}
    _, p = chisquare([cnt[i] for i in (0, 1, 2)])
    assert p > 0.001


def test_uniform_random_instances_chisquare():
    rng = np.random.default_rng(202)
    pvals = []
    for trial in range(20):
        n = int(rng.integers(4, 33))
        x = int(rng.integers(0, 1 << n))
        y = int(rng.integers(0, 1 << n))
        if popcount(x) == popcount(y):
            y ^= 1 << int(rng.integers(0, n))
            if popcount(x) == popcount(y):
                continue
        S = [i for i in range(n) if ((x >> i) ^ (y >> i)) & 1]
        idx, _ = backend.sample_diff_batch(x, y, n, 1000 + trial, 4000)
        cnt = Counter(idx.tolist())
        assert set(cnt) <= set(S)
        _, p = chisquare([cnt.get(i, 0) for i in S])
        pvals.append(p)
    # Bonferroni at overall significance 0.01
    assert min(pvals) > 0.01 / len(pvals)


def test_pure_sampler_matches_backend():
    x, y = bits("110101110010"), bits("010011010011")
    n = 12
    idx, mbits = backend.sample_diff_batch(x, y, n, 777, 40)
    for s in range(40):
        i, b = uniform_sample_pure(x, y, n, derive_seed(777, s, TAG_SAMPLE))
        assert i == int(idx[s]) and b == int(mbits[s])


def test_measured_bits_are_positive_and_bounded():
    x, y = bits("1111000010"), bits("0000111110")
    idx, mbits = backend.sample_diff_batch(x, y, 10, 9, 500)
    assert (mbits > 0).all()
    # one attempt costs the weight exchange plus at most ceil(log2 n) levels
    per_attempt = (4 + 1) + sum((k.bit_length()) + 1 for k in (5, 2, 1))
    assert (mbits <= 40 * per_attempt).all()  # generous retry allowance
