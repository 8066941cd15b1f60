"""Splittable 64-bit seeds and the draw procedures built on them.

Everything here is plain integer arithmetic mod 2**64 so a manifest depends
only on (global seed, ids, counts), never on platform or scheduling.
"""

from docsynth.models.errors import ParameterError

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(text: str) -> int:
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h ^= byte
        h = (h * _FNV_PRIME) & MASK64
    return h


def fmix64(z: int) -> int:
    """SplitMix64 output finalizer."""
    z &= MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & MASK64
    z ^= z >> 31
    return z


def mix64(a: int, b: int) -> int:
    return fmix64((a & MASK64) ^ fmix64((b + GOLDEN_GAMMA) & MASK64))


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return fmix64(self.state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection."""
        if n < 1:
            raise ParameterError(f"bound must be >= 1, got {n}")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next()
            if x < limit:
                return x % n


def partial_shuffle(n: int, k: int, stream: SplitMix64) -> list[int]:
    """First k positions of a forward Fisher-Yates shuffle of range(n)."""
    if not 0 <= k <= n:
        raise ParameterError(f"cannot draw {k} distinct items from {n}")
    items = list(range(n))
    for i in range(k):
        j = i + stream.below(n - i)
        items[i], items[j] = items[j], items[i]
    return items[:k]


def content_stream(global_seed: int, content_id: str) -> SplitMix64:
    return SplitMix64(mix64(global_seed, fnv1a64(content_id)))


def record_seed(global_seed: int, sample_id: int) -> int:
    return mix64(global_seed, sample_id)
