"""Numpy implementations of the hot kernels.

This module is the fallback selected when the compiled extension is absent
(or CCX_FORCE_PY=1).  The compiled kernel in ``_ckernel.pyx`` implements the
same functions with the same draw discipline; cross-backend tests assert
bit-identical outputs.

Kernels:
  * rank_mod_p           - Gaussian elimination rank over F_p (fast path for
                           p = 2^61 - 1 via split multiplication, generic
                           path in exact Python ints otherwise)
  * setinc_trial_batch   - seeded Monte Carlo trials of the sampling tester
  * sample_diff_batch    - batched uniform difference sampler (the permuted
                           prefix-weight search with complement masks)

Draw discipline (see rng.py): every logical sample s of a trial uses its own
substream derive_seed(trial_seed, s, TAG_SAMPLE); within a sample, attempt k
occupies words [k*(n-1+W), (k+1)*(n-1+W)) with the Fisher-Yates draws first
(i = n-1 .. 1) and then W = ceil(n/64) complement-mask words.
"""

from __future__ import annotations

import numpy as np

from .rng import GOLDEN, MASK64, derive_seed, stream_word

BACKEND_NAME = "numpy-fallback"

TAG_SAMPLE = 0x73616D70

P61 = (1 << 61) - 1


# ---------------------------------------------------------------------------
# Vectorized splitmix64


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


def stream_words_vec(seeds: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """stream_word applied elementwise (seeds broadcast against counters)."""
    s = np.asarray(seeds, dtype=np.uint64)
    k = np.asarray(counters, dtype=np.uint64)
    return _mix64_vec(s + (k + np.uint64(1)) * np.uint64(GOLDEN))


def sample_seeds_vec(trial_seed: int, sample_indices: np.ndarray) -> np.ndarray:
    from .rng import TAG_SAMPLE as _tag  # same constant, single source

    base = np.uint64(_mix64_int(trial_seed ^ _tag))
    return stream_words_vec(base, np.asarray(sample_indices, dtype=np.uint64))


def _mix64_int(z: int) -> int:
    from .rng import mix64

    return mix64(z)


# ---------------------------------------------------------------------------
# Rank over F_p


def _mulmod61_vec(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a * b) mod (2^61 - 1) without 128-bit arithmetic."""
    p = np.uint64(P61)
    lo31 = np.uint64((1 << 31) - 1)
    a1, a0 = a >> np.uint64(31), a & lo31
    b1, b0 = b >> np.uint64(31), b & lo31
    hi = a1 * b1  # < 2^60
    mid = a1 * b0 + a0 * b1  # < 2^63
    low = a0 * b0  # < 2^62
    # 2^62 == 2, mid*2^31 == (mid >> 30) + ((mid & (2^30-1)) << 31) mod p
    acc = (hi << np.uint64(1)) % p
    acc += (mid >> np.uint64(30)) + ((mid & np.uint64((1 << 30) - 1)) << np.uint64(31))
    acc += (low >> np.uint64(61)) + (low & p)
    acc = (acc >> np.uint64(61)) + (acc & p)
    acc = (acc >> np.uint64(61)) + (acc & p)
    return np.where(acc >= p, acc - p, acc)


def rank_mod_p(mat: np.ndarray, p: int = P61) -> int:
    """Rank of an integer matrix over F_p by forward elimination."""
    m = np.ascontiguousarray(np.asarray(mat, dtype=np.uint64) % np.uint64(p))
    rows, cols = m.shape
    if p == P61:
        return _rank61(m)
    return _rank_generic(m, p)


def _rank61(m: np.ndarray) -> int:
    p = P61
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        colv = m[rank:, col]
        nz = np.nonzero(colv)[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, col]), p - 2, p)
        below = m[rank + 1 :, col]
        act = np.nonzero(below)[0]
        if act.size:
            factors = _mulmod61_vec(below[act], np.uint64(inv))
            prod = _mulmod61_vec(factors[:, None], m[rank, col:][None, :])
            seg = m[rank + 1 :, col:]
            seg[act] = (seg[act] + (np.uint64(p) - prod)) % np.uint64(p)
        rank += 1
    return rank


def _rank_generic(m: np.ndarray, p: int) -> int:
    rowsl = [[int(v) for v in r] for r in m]
    rows, cols = len(rowsl), len(rowsl[0]) if len(rowsl) else 0
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if rowsl[r][col] % p), None)
        if piv is None:
            continue
        rowsl[rank], rowsl[piv] = rowsl[piv], rowsl[rank]
        inv = pow(rowsl[rank][col], p - 2, p)
        for r in range(rank + 1, rows):
            f = rowsl[r][col] * inv % p
            if f:
                rowsl[r] = [(x - f * y) % p for x, y in zip(rowsl[r], rowsl[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


# ---------------------------------------------------------------------------
# Bit helpers on packed uint64 words


def pack_bits(x: int, n: int) -> np.ndarray:
    words = (n + 63) // 64
    return np.array([(x >> (64 * w)) & MASK64 for w in range(words)], dtype=np.uint64)


def _unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")
    return bits[:n].astype(np.uint8)


# ---------------------------------------------------------------------------
# The uniform difference sampler core

_WIDTH_CACHE: dict[int, int] = {}


def ceil_log2(k: int) -> int:
    """Bits needed to carry values 0..k-1 (0 for k <= 1)."""
    w = _WIDTH_CACHE.get(k)
    if w is None:
        w = max(0, (k - 1).bit_length())
        _WIDTH_CACHE[k] = w
    return w


def _search_bits_and_slot(xa: np.ndarray, ya: np.ndarray) -> tuple[int, int]:
    """Prefix-weight segment search on 0/1 arrays; returns (slot, bits)."""
    px = np.concatenate(([0], np.cumsum(xa, dtype=np.int64)))
    py = np.concatenate(([0], np.cumsum(ya, dtype=np.int64)))
    lo, hi = 0, len(xa)
    bits = 0
    while hi - lo > 1:
        left = (hi - lo) // 2
        mid = lo + left
        bits += ceil_log2(left + 1) + 1  # weight in 0..left plus reply bit
        if px[mid] - px[lo] != py[mid] - py[lo]:
            hi = mid
        else:
            lo = mid
    return lo, bits


def sample_one_difference(xbits: np.ndarray, ybits: np.ndarray, sample_seed: int):
    """One uniform sample from {i : x_i != y_i}.

    Returns (original_index, measured_bits, attempts).  Inputs are 0/1 uint8
    arrays of equal length with differing total weight.  This scalar form is
    the reference statement of the draw discipline; _sample_many is its
    vectorization and the two are kept interchangeable.
    """
    n = len(xbits)
    wfull = ceil_log2(n + 1) + 1
    nwords = (n + 63) // 64
    attempt = 0
    bits = 0
    stride = (n - 1) + nwords
    while True:
        base = attempt * stride
        counters = np.arange(base, base + stride, dtype=np.uint64)
        words = stream_words_vec(np.uint64(sample_seed), counters)
        perm = np.arange(n, dtype=np.int64)
        for step, i in enumerate(range(n - 1, 0, -1)):
            j = int(words[step] % np.uint64(i + 1))
            perm[i], perm[j] = perm[j], perm[i]
        sigma = _unpack_bits(words[n - 1 :], n)
        xa = xbits[perm] ^ sigma
        ya = ybits[perm] ^ sigma
        bits += wfull
        attempt += 1
        if int(xa.sum()) == int(ya.sum()):
            continue
        slot, sbits = _search_bits_and_slot(xa, ya)
        return int(perm[slot]), bits + sbits, attempt


def _width_table(n: int) -> np.ndarray:
    return np.array([ceil_log2(k) for k in range(n + 2)], dtype=np.int64)


def _sample_many(xbits: np.ndarray, ybits: np.ndarray, seeds: np.ndarray):
    """Vectorized form of sample_one_difference over independent sample seeds.

    Bit-identical to the scalar routine: each sample consumes its own
    substream, so vectorizing across the sample axis changes nothing.
    """
    n = len(xbits)
    count = len(seeds)
    wfull = ceil_log2(n + 1) + 1
    nwords = (n + 63) // 64
    stride = (n - 1) + nwords
    widths = _width_table(n)
    idx_out = np.empty(count, dtype=np.int64)
    bits_out = np.zeros(count, dtype=np.int64)
    active = np.arange(count)
    attempt = np.zeros(count, dtype=np.uint64)
    while active.size:
        k = active.size
        seeds_a = seeds[active]
        base = attempt[active] * np.uint64(stride)
        perm = np.tile(np.arange(n, dtype=np.int64), (k, 1))
        rows = np.arange(k)
        for step, i in enumerate(range(n - 1, 0, -1)):
            w = stream_words_vec(seeds_a, base + np.uint64(step))
            j = (w % np.uint64(i + 1)).astype(np.int64)
            pi = perm[rows, i].copy()
            perm[rows, i] = perm[rows, j]
            perm[rows, j] = pi
        word_ix = base[:, None] + np.uint64(n - 1) + np.arange(nwords, dtype=np.uint64)[None, :]
        words = stream_words_vec(seeds_a[:, None], word_ix)
        sigma = np.unpackbits(
            np.ascontiguousarray(words).view(np.uint8).reshape(k, 8 * nwords),
            axis=1,
            bitorder="little",
        )[:, :n]
        xa = xbits[perm] ^ sigma
        ya = ybits[perm] ^ sigma
        bits_out[active] += wfull
        attempt[active] += np.uint64(1)
        found = xa.sum(axis=1) != ya.sum(axis=1)
        if found.any():
            sel = np.nonzero(found)[0]
            px = np.concatenate([np.zeros((len(sel), 1), np.int64), xa[sel].cumsum(1)], axis=1)
            py = np.concatenate([np.zeros((len(sel), 1), np.int64), ya[sel].cumsum(1)], axis=1)
            lo = np.zeros(len(sel), dtype=np.int64)
            hi = np.full(len(sel), n, dtype=np.int64)
            srows = np.arange(len(sel))
            sbits = np.zeros(len(sel), dtype=np.int64)
            while True:
                open_ = hi - lo > 1
                if not open_.any():
                    break
                left = np.where(open_, (hi - lo) // 2, 0)
                mid = lo + left
                sbits += np.where(open_, widths[left + 1] + 1, 0)
                differ = (px[srows, mid] - px[srows, lo]) != (py[srows, mid] - py[srows, lo])
                hi = np.where(open_ & differ, mid, hi)
                lo = np.where(open_ & ~differ, mid, lo)
            aidx = active[sel]
            idx_out[aidx] = perm[sel, :][srows, lo]
            bits_out[aidx] += sbits
        active = active[~found]
    return idx_out, bits_out


def sample_diff_batch(x: int, y: int, n: int, trial_seed: int, count: int):
    """`count` independent uniform difference samples (indices, measured bits)."""
    xbits = _unpack_bits(pack_bits(x, n), n)
    ybits = _unpack_bits(pack_bits(y, n), n)
    seeds = sample_seeds_vec(trial_seed, np.arange(count))
    return _sample_many(xbits, ybits, seeds)


# ---------------------------------------------------------------------------
# SetInc trial batches


def setinc_trial_batch(
    case: int,
    n_run: int,
    beta_num: int,
    beta_den: int,
    m_samples: int,
    reps: int,
    xs: np.ndarray,
    ys: np.ndarray,
    trial_seeds: np.ndarray,
):
    """Run the amplified sampling tester for a batch of trials.

    case 1/2: per sample one draw picks a uniform support element of x (resp.
    y); a hit is the other input's bit there.  case 3: per sample the
    difference-sampler runs on (xs, ys) = (complement of padded x, padded y)
    and a hit is ys at the sampled index.

    Returns (high: uint8[T], sampler_bits: int64[T]); sampler_bits is zero
    for cases 1/2 (their message sizes are input-independent).
    """
    trials = len(trial_seeds)
    high = np.zeros(trials, dtype=np.uint8)
    sampler_bits = np.zeros(trials, dtype=np.int64)
    total = reps * m_samples
    need_maj = reps // 2 + 1
    thresh = beta_num * m_samples  # compare hits*beta_den >= beta_num*m_samples

    if case in (1, 2):
        for t in range(trials):
            src = xs[t] if case == 1 else ys[t]
            other = ys[t] if case == 1 else xs[t]
            sup = np.nonzero(_unpack_bits(src, n_run))[0]
            obits = _unpack_bits(other, n_run)
            seeds = sample_seeds_vec(int(trial_seeds[t]), np.arange(total))
            draws = stream_words_vec(seeds, np.zeros(total, dtype=np.uint64))
            hits = obits[sup[draws % np.uint64(len(sup))]]
            per_rep = hits.reshape(reps, m_samples).sum(axis=1, dtype=np.int64)
            high[t] = 1 if int((per_rep * beta_den >= thresh).sum()) >= need_maj else 0
        return high, sampler_bits

    if case != 3:
        raise ValueError(f"unknown case {case}")

    for t in range(trials):
        xbits = _unpack_bits(xs[t], n_run)
        ybits = _unpack_bits(ys[t], n_run)
        seeds = sample_seeds_vec(int(trial_seeds[t]), np.arange(total))
        idx, sb = _sample_many(xbits, ybits, seeds)
        hits = ybits[idx].astype(np.int64)
        per_rep = hits.reshape(reps, m_samples).sum(axis=1)
        high[t] = 1 if int((per_rep * beta_den >= thresh).sum()) >= need_maj else 0
        sampler_bits[t] = int(sb.sum())
    return high, sampler_bits
