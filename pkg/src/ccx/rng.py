"""Seedable counter-based random stream used by every randomized component.

Algorithm id: ``splitmix64ctr-v1``.  Word k of a stream with seed s is
``mix64(s + (k+1) * GOLDEN)`` where mix64 is the SplitMix64 finalizer.  The
stream is a pure function of (seed, counter), which keeps the compiled
kernel, the numpy fallback and the reference protocol code bit-identical and
lets batch runners vectorize draws without replaying state.

Draw disciplines (stable; recorded in run results via RNG_ALGO):
  * below(k)   = next_u64() % k          (modulo; k <= 2**32 here, bias < 2**-32)
  * float53()  = (next_u64() >> 11) * 2**-53
  * mask(n)    = ceil(n/64) words, word w bit j covering index 64*w + j
  * permutation(n): identity array, then Fisher-Yates i = n-1..1 with
    j = below(i+1), swap(perm[i], perm[j]); one draw per step.

Per-trial seeds are derived with ``derive_seed(master, index, tag)`` so that
independent subsystems (protocol runs, instance generators) never share a
stream.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

RNG_ALGO = "splitmix64ctr-v1"

# Stream-domain tags for derive_seed.
TAG_TRIAL = 0x74726961
TAG_INSTANCE = 0x696E7374
TAG_CELL = 0x63656C6C
TAG_SAMPLE = 0x73616D70


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def stream_word(seed: int, counter: int) -> int:
    """Word `counter` of the stream with the given seed."""
    return mix64((seed + ((counter + 1) * GOLDEN)) & MASK64)


def derive_seed(master: int, index: int, tag: int = TAG_TRIAL) -> int:
    return stream_word(mix64(master ^ tag), index)


class Stream:
    """Stateful view over the counter-based stream."""

    __slots__ = ("seed", "counter")

    def __init__(self, seed: int, counter: int = 0):
        self.seed = seed & MASK64
        self.counter = counter

    def next_u64(self) -> int:
        w = stream_word(self.seed, self.counter)
        self.counter += 1
        return w

    def below(self, k: int) -> int:
        if k <= 0:
            raise ValueError("below() requires k >= 1")
        return self.next_u64() % k

    def float53(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def bit(self) -> int:
        return self.next_u64() & 1

    def mask_words(self, n: int) -> list[int]:
        return [self.next_u64() for _ in range((n + 63) // 64)]

    def permutation(self, n: int) -> list[int]:
        perm = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return perm

    def fork(self, index: int, tag: int) -> "Stream":
        return Stream(derive_seed(self.seed, index, tag))
