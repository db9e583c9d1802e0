"""Counter-based deterministic random generator for reproducible sampling.

SplitMix64 run in counter mode: output i is the SplitMix64 finalizer applied
to seed + (i+1) * GOLDEN, all in 64-bit wrapping arithmetic.  The algorithm is
written out here (not imported) so the exact bit stream is pinned by this
file; fixtures depend on it and it must never change.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class CounterRng:
    """Stream of 64-bit words, fully determined by (seed, draw index)."""

    def __init__(self, seed: int):
        if not 0 <= seed < 1 << 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self.counter = 0

    def next_u64(self) -> int:
        self.counter += 1
        return _mix((self.seed + self.counter * _GOLDEN) & _MASK)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by top-bits rejection.

        Draws the top b bits of successive words, where b is the bit length
        of bound, rejecting values >= bound; acceptance probability > 1/2.
        """
        if not 1 <= bound <= 1 << 64:
            raise ValueError("bound must be in [1, 2^64]")
        if bound == 1:
            return 0
        b = (bound - 1).bit_length()
        while True:
            r = self.next_u64() >> (64 - b)
            if r < bound:
                return r
