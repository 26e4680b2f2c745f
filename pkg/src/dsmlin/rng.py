"""SplitMix64 random streams.

The generator is Steele, Lea & Flood's SplitMix64: the state advances by the
odd constant ``0x9E3779B97F4A7C15`` and each output is the state passed
through the ``mix64`` finalizer (shifts 30/27/31, multipliers
``0xBF58476D1CE4E5B9`` and ``0x94D049BB133111EB``).  Derived values:

* uniform doubles: ``(x >> 11) * 2**-53`` in [0, 1)
* normals: Box-Muller on pairs ``(1 - u1, u2)``, emitting
  ``r*cos(2*pi*u2)`` then ``r*sin(2*pi*u2)``
* ``split()``: a child stream seeded with the parent's next raw output

Everything is vectorized over numpy ``uint64`` arithmetic (which wraps mod
2**64), so streams are cheap to draw and identical in any language that
implements the same recipe.
"""

import numpy as np

GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def mix64(z):
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    def __init__(self, seed):
        self.state = int(seed) & _MASK

    def next_u64(self, k):
        """Return the next ``k`` raw 64-bit outputs as a uint64 array."""
        steps = np.arange(1, k + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.state) + steps * GOLDEN_GAMMA
        self.state = (self.state + k * int(GOLDEN_GAMMA)) & _MASK
        return mix64(z)

    def uniform(self, k):
        return (self.next_u64(k) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def normal(self, k):
        pairs = (k + 1) // 2
        u = self.uniform(2 * pairs)
        r = np.sqrt(-2.0 * np.log(1.0 - u[0::2]))
        theta = 2.0 * np.pi * u[1::2]
        out = np.empty(2 * pairs)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return out[:k]

    def split(self):
        return SplitMix64(int(self.next_u64(1)[0]))
