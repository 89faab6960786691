# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: F_p rank, sampling-tester trials, difference sampler.

Mirrors ccx._kernel_py exactly (same draw discipline, same outputs); the
cross-backend test suite asserts bit equality.
"""

from libc.stdlib cimport malloc, free

import numpy as np

BACKEND_NAME = "ckernel"

cdef extern from *:
    """
    typedef unsigned long long ccx_u64;
    """
    ctypedef unsigned long long u64 "ccx_u64"
    ctypedef unsigned long long u128 "unsigned __int128"

DEF GOLDEN = 0x9E3779B97F4A7C15
DEF TAG_SAMPLE = 0x73616D70

cdef inline u64 mix64(u64 z) nogil:
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EB
    return z ^ (z >> 31)

cdef inline u64 stream_word(u64 seed, u64 counter) nogil:
    return mix64(seed + (counter + 1) * <u64>GOLDEN)

cdef inline u64 sample_seed(u64 trial_seed, u64 s) nogil:
    return stream_word(mix64(trial_seed ^ <u64>TAG_SAMPLE), s)

cdef inline int ceil_log2(long k) nogil:
    # bits needed for values 0..k-1
    cdef int w = 0
    cdef long v = k - 1
    while v > 0:
        w += 1
        v >>= 1
    return w


# ---------------------------------------------------------------------------
# Rank over F_p (p < 2^62; Mersenne fast path for p = 2^61 - 1)

DEF P61 = 0x1FFFFFFFFFFFFFFF  # 2^61 - 1

cdef inline u64 mulmod(u64 a, u64 b, u64 p) nogil:
    return <u64>((<u128>a * b) % p)

cdef inline u64 mulmod61(u64 a, u64 b) nogil:
    cdef u128 x = <u128>a * b
    cdef u64 r = (<u64>x & <u64>P61) + <u64>(x >> 61)
    r = (r & <u64>P61) + (r >> 61)
    return r - <u64>P61 if r >= <u64>P61 else r

cdef u64 powmod(u64 a, u64 e, u64 p) nogil:
    cdef u64 r = 1
    a %= p
    while e:
        if e & 1:
            r = mulmod(r, a, p)
        a = mulmod(a, a, p)
        e >>= 1
    return r


def rank_mod_p(mat, p=(1 << 61) - 1):
    cdef u64 pp = <u64>p
    m = np.ascontiguousarray(np.asarray(mat, dtype=np.uint64) % np.uint64(p))
    cdef u64[:, ::1] M = m
    cdef long rows = M.shape[0], cols = M.shape[1]
    cdef long rank = 0, col, r, piv, j
    cdef u64 inv, f, tmp, v
    cdef bint mersenne = pp == <u64>P61
    with nogil:
        for col in range(cols):
            if rank == rows:
                break
            piv = -1
            for r in range(rank, rows):
                if M[r, col] != 0:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(col, cols):
                    tmp = M[rank, j]
                    M[rank, j] = M[piv, j]
                    M[piv, j] = tmp
            inv = powmod(M[rank, col], pp - 2, pp)
            for r in range(rank + 1, rows):
                if M[r, col] == 0:
                    continue
                if mersenne:
                    f = mulmod61(M[r, col], inv)
                    for j in range(col, cols):
                        v = M[r, j] + pp - mulmod61(f, M[rank, j])
                        M[r, j] = v - pp if v >= pp else v
                else:
                    f = mulmod(M[r, col], inv, pp)
                    for j in range(col, cols):
                        v = M[r, j] + pp - mulmod(f, M[rank, j], pp)
                        M[r, j] = v - pp if v >= pp else v
            rank += 1
    return int(rank)


# ---------------------------------------------------------------------------
# Difference sampler

cdef struct Sampled:
    long index
    long bits
    long attempts

cdef Sampled _sample_one(unsigned char* xb, unsigned char* yb, long n,
                         u64 seed, long* perm, unsigned char* xa,
                         unsigned char* ya, long* px, long* py) nogil:
    cdef Sampled out
    cdef long stride = (n - 1) + ((n + 63) >> 6)
    cdef long attempt = 0, bits = 0
    cdef long i, j, step, wx, wy, lo, hi, left, mid
    cdef int wfull = ceil_log2(n + 1) + 1   # weight in 0..n, plus the reply bit
    cdef u64 base, w
    cdef long sigw
    while True:
        base = <u64>(attempt * stride)
        for i in range(n):
            perm[i] = i
        step = 0
        for i in range(n - 1, 0, -1):
            w = stream_word(seed, base + step)
            j = <long>(w % <u64>(i + 1))
            perm[i], perm[j] = perm[j], perm[i]
            step += 1
        wx = 0
        wy = 0
        sigw = 0
        for i in range(n):
            if (i & 63) == 0:
                w = stream_word(seed, base + (n - 1) + sigw)
                sigw += 1
            xa[i] = xb[perm[i]] ^ <unsigned char>((w >> (i & 63)) & 1)
            ya[i] = yb[perm[i]] ^ <unsigned char>((w >> (i & 63)) & 1)
            wx += xa[i]
            wy += ya[i]
        bits += wfull
        attempt += 1
        if wx == wy:
            continue
        px[0] = 0
        py[0] = 0
        for i in range(n):
            px[i + 1] = px[i] + xa[i]
            py[i + 1] = py[i] + ya[i]
        lo = 0
        hi = n
        while hi - lo > 1:
            left = (hi - lo) >> 1
            mid = lo + left
            bits += ceil_log2(left + 1) + 1
            if (px[mid] - px[lo]) != (py[mid] - py[lo]):
                hi = mid
            else:
                lo = mid
        out.index = perm[lo]
        out.bits = bits
        out.attempts = attempt
        return out


cdef void _unpack(u64[::1] words, long n, unsigned char* out) nogil:
    cdef long i
    for i in range(n):
        out[i] = <unsigned char>((words[i >> 6] >> (i & 63)) & 1)


def sample_diff_batch(object x, object y, long n, object trial_seed, long count):
    """Batched uniform difference samples; returns (indices, measured bits)."""
    xw = _pack(x, n)
    yw = _pack(y, n)
    cdef u64[::1] xwv = xw
    cdef u64[::1] ywv = yw
    idx = np.empty(count, dtype=np.int64)
    bits = np.empty(count, dtype=np.int64)
    cdef long[::1] idxv = idx
    cdef long[::1] bitsv = bits
    cdef u64 tseed = <u64>(int(trial_seed) & ((1 << 64) - 1))
    cdef long s
    cdef unsigned char* xb = <unsigned char*>malloc(n)
    cdef unsigned char* yb = <unsigned char*>malloc(n)
    cdef unsigned char* xa = <unsigned char*>malloc(n)
    cdef unsigned char* ya = <unsigned char*>malloc(n)
    cdef long* perm = <long*>malloc(n * sizeof(long))
    cdef long* px = <long*>malloc((n + 1) * sizeof(long))
    cdef long* py = <long*>malloc((n + 1) * sizeof(long))
    cdef Sampled got
    try:
        with nogil:
            _unpack(xwv, n, xb)
            _unpack(ywv, n, yb)
            for s in range(count):
                got = _sample_one(xb, yb, n, sample_seed(tseed, <u64>s),
                                  perm, xa, ya, px, py)
                idxv[s] = got.index
                bitsv[s] = got.bits
    finally:
        free(xb); free(yb); free(xa); free(ya); free(perm); free(px); free(py)
    return idx, bits


def _pack(x, long n):
    words = (n + 63) // 64
    xi = int(x)
    return np.array([(xi >> (64 * w)) & ((1 << 64) - 1) for w in range(words)],
                    dtype=np.uint64)


# ---------------------------------------------------------------------------
# SetInc trials


def setinc_trial_batch(int case, long n_run, object beta_num, object beta_den,
                       long m_samples, long reps, xs, ys, trial_seeds):
    cdef u64 bnum = <u64>(int(beta_num))
    cdef u64 bden = <u64>(int(beta_den))
    xs_a = np.ascontiguousarray(np.asarray(xs, dtype=np.uint64))
    ys_a = np.ascontiguousarray(np.asarray(ys, dtype=np.uint64))
    seeds_a = np.ascontiguousarray(np.asarray(trial_seeds, dtype=np.uint64))
    cdef u64[:, ::1] XS = xs_a
    cdef u64[:, ::1] YS = ys_a
    cdef u64[::1] SEEDS = seeds_a
    cdef long trials = SEEDS.shape[0]
    high = np.zeros(trials, dtype=np.uint8)
    sbits = np.zeros(trials, dtype=np.int64)
    cdef unsigned char[::1] HIGH = high
    cdef long[::1] SBITS = sbits
    cdef long t, s, rep, hits, goodreps, idx, total
    cdef long need_maj = reps // 2 + 1
    cdef u128 thresh = <u128>bnum * <u128>m_samples
    cdef u64 sseed, w
    cdef long supn
    cdef Sampled got
    cdef unsigned char* xb = <unsigned char*>malloc(n_run)
    cdef unsigned char* yb = <unsigned char*>malloc(n_run)
    cdef unsigned char* xa = <unsigned char*>malloc(n_run)
    cdef unsigned char* ya = <unsigned char*>malloc(n_run)
    cdef long* perm = <long*>malloc(n_run * sizeof(long))
    cdef long* px = <long*>malloc((n_run + 1) * sizeof(long))
    cdef long* py = <long*>malloc((n_run + 1) * sizeof(long))
    cdef long* sup = <long*>malloc(n_run * sizeof(long))
    cdef long i, tb
    total = reps * m_samples
    try:
        with nogil:
            for t in range(trials):
                _unpack(XS[t], n_run, xb)
                _unpack(YS[t], n_run, yb)
                if case == 1 or case == 2:
                    supn = 0
                    for i in range(n_run):
                        if (xb[i] if case == 1 else yb[i]) != 0:
                            sup[supn] = i
                            supn += 1
                    goodreps = 0
                    s = 0
                    for rep in range(reps):
                        hits = 0
                        for i in range(m_samples):
                            sseed = sample_seed(SEEDS[t], <u64>s)
                            w = stream_word(sseed, 0)
                            idx = sup[<long>(w % <u64>supn)]
                            hits += (yb[idx] if case == 1 else xb[idx])
                            s += 1
                        if <u128>hits * <u128>bden >= thresh:
                            goodreps += 1
                    HIGH[t] = 1 if goodreps >= need_maj else 0
                else:
                    goodreps = 0
                    tb = 0
                    s = 0
                    for rep in range(reps):
                        hits = 0
                        for i in range(m_samples):
                            got = _sample_one(xb, yb, n_run,
                                              sample_seed(SEEDS[t], <u64>s),
                                              perm, xa, ya, px, py)
                            hits += yb[got.index]
                            tb += got.bits
                            s += 1
                        if <u128>hits * <u128>bden >= thresh:
                            goodreps += 1
                    HIGH[t] = 1 if goodreps >= need_maj else 0
                    SBITS[t] = tb
    finally:
        free(xb); free(yb); free(xa); free(ya); free(perm); free(px); free(py); free(sup)
    return high, sbits
