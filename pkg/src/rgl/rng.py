"""SplitMix64 stream used for every seeded draw in the package.

The scalar generator and the vectorized block draw produce the same
sequence, so a subset sampled with numpy is bit-identical to one sampled
one vertex at a time.
"""

from __future__ import annotations

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_TWO53 = float(1 << 53)


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def trial_seed(base_seed: int, index: int) -> int:
    """Seed of the ``index``-th trial in a batch fanned out from ``base_seed``.

    The xor-spaced value is passed through the finalizer: seeding the raw
    ``base ^ i*GAMMA`` would make trial i replay trial i-1 shifted by one draw.
    """
    return mix64((base_seed ^ ((index * GAMMA) & MASK64)) & MASK64)


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) / _TWO53

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound), rejection sampling on the high bits."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        if bound == 1:
            return 0
        shift = 64 - (bound - 1).bit_length()
        while True:
            x = self.next_u64() >> shift
            if x < bound:
                return x

    def block_u64(self, count: int) -> np.ndarray:
        """Next ``count`` outputs as a uint64 array; advances the state."""
        steps = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.state) + steps * np.uint64(GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
            z = z ^ (z >> np.uint64(31))
        self.state = (self.state + count * GAMMA) & MASK64
        return z

    def block_random(self, count: int) -> np.ndarray:
        return (self.block_u64(count) >> np.uint64(11)).astype(np.float64) / _TWO53
