"""SplitMix64 pseudo-random stream.

All randomness in the package flows through this generator so that splits,
tree training, and fixture generation reproduce bit-for-bit across platforms.
The stream is counter-based: output i is mix(seed + (i+1) * GAMMA), which lets
us draw scalars one at a time or whole blocks with identical results.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """The SplitMix64 finalizer on a single 64-bit value."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MUL1) & _MASK
    z = ((z ^ (z >> 27)) * _MUL2) & _MASK
    return (z ^ (z >> 31)) & _MASK


def _mix_block(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MUL1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MUL2)
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Deterministic 64-bit generator with scalar and block interfaces."""

    def __init__(self, seed: int):
        self._seed = seed & _MASK
        self._count = 0

    def next_u64(self) -> int:
        self._count += 1
        return mix64((self._seed + self._count * GAMMA) & _MASK)

    def next_below(self, bound: int) -> int:
        """Uniform-ish integer in [0, bound) via modulo reduction."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def next_float(self) -> float:
        """Uniform in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def block_u64(self, n: int) -> np.ndarray:
        """Next n outputs as a uint64 array; advances the stream by n."""
        idx = np.arange(self._count + 1, self._count + n + 1, dtype=np.uint64)
        self._count += n
        with np.errstate(over="ignore"):
            state = np.uint64(self._seed) + idx * np.uint64(GAMMA)
            return _mix_block(state)

    def block_floats(self, n: int) -> np.ndarray:
        return (self.block_u64(n) >> np.uint64(11)) * (1.0 / (1 << 53))

    def block_bytes(self, n: int) -> np.ndarray:
        words = self.block_u64((n + 7) // 8)
        return words.view(np.uint8)[:n].copy()

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]

    def spawn(self) -> "SplitMix64":
        """Child generator with a seed drawn from this stream."""
        return SplitMix64(self.next_u64())
