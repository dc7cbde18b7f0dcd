"""Portable 64-bit pseudo-random generator.

xorshift64* (Vigna, 2016) seeded through one splitmix64 step so that any
64-bit seed, including 0, gives a non-zero state.  The stream is fully
specified by the code below and does not depend on numpy's generators,
so fixtures can be regenerated bit-for-bit elsewhere.
"""

import math

_MASK = (1 << 64) - 1


def splitmix64(x):
    z = (x + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class XorShift64Star:
    def __init__(self, seed):
        state = splitmix64(int(seed) & _MASK)
        self.state = state or 0x9E3779B97F4A7C15

    def next_u64(self):
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _MASK
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK

    def uniform(self, low=0.0, high=1.0):
        """Double in ``[low, high)`` built from the top 53 bits."""
        u = (self.next_u64() >> 11) * (1.0 / (1 << 53))
        return low + (high - low) * u

    def complex_unit_box(self):
        """Complex number with real and imaginary parts uniform on [-1, 1)."""
        re = self.uniform(-1.0, 1.0)
        im = self.uniform(-1.0, 1.0)
        return complex(re, im)

    def annulus_point(self, r_min, r_max):
        r = self.uniform(r_min, r_max)
        angle = self.uniform(0.0, 2.0 * math.pi)
        return complex(r * math.cos(angle), r * math.sin(angle))
