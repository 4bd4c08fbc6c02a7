"""SplitMix64 pseudo-random generator.

Chosen because it is tiny, fast, and its exact output sequence is widely
documented (Steele, Lea & Flood's SplittableRandom finalizer, reference C
implementation by Vigna), so generated streams are reproducible bit-for-bit
by any other implementation of the same recipe. Reference vector: seeding
with 0 yields 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F.

Doubles come from the top 53 bits: (x >> 11) * 2**-53, uniform on [0, 1).
"""

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
UNIT53 = 2.0**-53


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)

    def next_unit(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * UNIT53
