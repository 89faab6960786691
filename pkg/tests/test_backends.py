"""Cross-backend equality: the compiled kernel against the numpy fallback."""

import numpy as np
import pytest

from ccx import backend
from ccx._kernel_py import (
    P61,
    pack_bits,
    rank_mod_p as py_rank,
    sample_diff_batch as py_sample,
    setinc_trial_batch as py_trials,
)

needs_ckernel = pytest.mark.skipif(not backend.HAS_CKERNEL, reason="compiled kernel absent")


@needs_ckernel
def test_rank_agrees():
    ck = backend.compiled_impl()
    rng = np.random.default_rng(1)
    m = rng.integers(0, P61, size=(80, 60)).astype(np.uint64)
    assert ck.rank_mod_p(m) == py_rank(m)
    mm = np.vstack([m, (2 * m) % np.uint64(P61)])
    assert ck.rank_mod_p(mm) == py_rank(mm) == 60
    # non-Mersenne prime path
    q = 1_000_000_007
    small = rng.integers(0, q, size=(20, 20)).astype(np.uint64)
    assert ck.rank_mod_p(small, q) == py_rank(small, q)


@needs_ckernel
def test_sample_diff_agrees():
    ck = backend.compiled_impl()
    x, y, n = 0b101101110011001, 0b000011010011010, 15
    a = py_sample(x, y, n, 777, 300)
    b = ck.sample_diff_batch(x, y, n, 777, 300)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


@needs_ckernel
def test_setinc_trials_agree():
    ck = backend.compiled_impl()
    rng = np.random.default_rng(5)
    n = 19
    for case in (1, 2, 3):
        xs = np.array([pack_bits(int(v), n) for v in rng.integers(1, 2**n - 1, size=10)])
        ys = np.array([pack_bits(int(v), n) for v in rng.integers(1, 2**n - 1, size=10)])
        seeds = rng.integers(0, 2**63, size=10).astype(np.uint64)
        a = py_trials(case, n, 2, 5, 7, 3, xs, ys, seeds)
        b = ck.setinc_trial_batch(case, n, 2, 5, 7, 3, xs, ys, seeds)
        assert np.array_equal(a[0], b[0])
        assert np.array_equal(a[1], b[1])


def test_rank_known_values_fallback():
    eye = np.eye(7, dtype=np.uint64)
    assert py_rank(eye) == 7
    ones = np.ones((5, 5), dtype=np.uint64)
    assert py_rank(ones) == 1
    # J - I over F_p has full rank for p not dividing n-1
    m = (np.ones((6, 6)) - np.eye(6)).astype(np.uint64)
    assert py_rank(m) == 6


def test_scalar_and_vectorized_sampler_agree():
    import numpy as np

    from ccx._kernel_py import _sample_many, sample_one_difference, sample_seeds_vec

    xb = np.array([1, 0, 1, 1, 0, 1, 0, 0, 1, 1, 0], dtype=np.uint8)
    yb = np.array([0, 0, 1, 0, 1, 1, 0, 1, 1, 0, 0], dtype=np.uint8)
    seeds = sample_seeds_vec(4242, np.arange(64))
    idx_v, bits_v = _sample_many(xb, yb, seeds)
    for s in range(64):
        i, b, _ = sample_one_difference(xb, yb, int(seeds[s]))
        assert i == idx_v[s] and b == bits_v[s]


def test_mersenne_mulmod_against_python():
    from ccx._kernel_py import _mulmod61_vec

    rng = np.random.default_rng(9)
    a = rng.integers(0, P61, size=200).astype(np.uint64)
    b = rng.integers(0, P61, size=200).astype(np.uint64)
    got = _mulmod61_vec(a, b)
    want = [(int(x) * int(y)) % P61 for x, y in zip(a, b)]
    assert got.tolist() == want
