"""Pinned deterministic random number generator.

Every stochastic step in the toolkit (weight init, batch shuffling, split
assignment, synthetic data) draws from this generator so that runs are
bit-reproducible from a seed alone, independent of platform or library
versions. The algorithm chain is fixed:

  seed -> splitmix64 stream -> xoshiro256** state -> u64 stream

Derived draws are defined on top of the u64 stream:

  - unit doubles: (u64 >> 11) * 2**-53, i.e. 53 uniform mantissa bits
  - normals: Box-Muller on (u1, u2) with u1 shifted into (0, 1] so the
    log never sees zero; no rejection, both outputs of a pair are used
  - bounded ints: (u64 * n) >> 64 (multiply-shift reduction)
  - shuffle: Fisher-Yates from the top using bounded ints
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_INV_2_53 = 2.0 ** -53


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31), state


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Rng:
    """xoshiro256** generator seeded via splitmix64."""

    def __init__(self, seed: int):
        state = seed & _MASK64
        s = []
        for _ in range(4):
            word, state = _splitmix64(state)
            s.append(word)
        self._s = s
        self._spare_normal: float | None = None

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * _INV_2_53

    def normal(self) -> float:
        """Standard normal via Box-Muller; pairs are generated, none rejected."""
        if self._spare_normal is not None:
            z = self._spare_normal
            self._spare_normal = None
            return z
        u1 = ((self.next_u64() >> 11) + 1) * _INV_2_53  # (0, 1]
        u2 = (self.next_u64() >> 11) * _INV_2_53        # [0, 1)
        r = math.sqrt(-2.0 * math.log(u1))
        theta = 2.0 * math.pi * u2
        self._spare_normal = r * math.sin(theta)
        return r * math.cos(theta)

    def normals(self, n: int) -> list[float]:
        return [self.normal() for _ in range(n)]

    def below(self, n: int) -> int:
        """Integer in [0, n) by multiply-shift; n must be positive."""
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return (self.next_u64() * n) >> 64

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
