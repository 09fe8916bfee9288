"""Portable seeded random streams for reproducible runs.

The generator is xoshiro256** with splitmix64 seed expansion, both
published algorithms defined purely on 64-bit unsigned integers, so a
given seed produces bit-identical draw sequences on every platform and
Python version.  Every stochastic choice in the simulator (deployment,
application types, election draws) consumes one stream in a documented
fixed order; the algorithm name is recorded in run provenance.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_DOUBLE_UNIT = 1.0 / (1 << 53)

RNG_ALGORITHM = "xoshiro256** seeded via splitmix64"


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (next_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, (z ^ (z >> 31)) & _MASK


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


class Xoshiro256StarStar:
    """xoshiro256** stream of 64-bit words and doubles in [0, 1)."""

    def __init__(self, seed: int):
        if not 0 <= seed <= _MASK:
            raise ValueError("seed must be a 64-bit unsigned integer")
        state = seed
        s = []
        for _ in range(4):
            state, word = splitmix64(state)
            s.append(word)
        self._s = s

    @classmethod
    def from_raw_state(cls, words) -> "Xoshiro256StarStar":
        """Build a generator directly from four state words (testing hook)."""
        rng = cls(0)
        rng._s = [w & _MASK for w in words]
        return rng

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK, 7) * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits of one word."""
        return (self.next_u64() >> 11) * _DOUBLE_UNIT

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.random()
