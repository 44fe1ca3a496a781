"""Deterministic xorshift64* streams for seeded, platform-independent randomness.

Every generator here is a pure function of (seed, shape): the same seed yields
bit-identical output on any platform, which the CLI suite relies on for
byte-identical reports.
"""

_MASK64 = (1 << 64) - 1


def _splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


class XorShift64Star:
    """64-bit xorshift* stream seeded through a splitmix64 scramble."""

    def __init__(self, seed: int):
        # state must be nonzero
        self._state = _splitmix64(seed & _MASK64) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK64
        x ^= x >> 27
        self._state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK64

    def uniform(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_open(self) -> float:
        """Uniform double in (0, 1]; never returns an exact zero."""
        return ((self.next_u64() >> 11) + 1) * 2.0**-53
