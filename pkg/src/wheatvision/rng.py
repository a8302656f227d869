"""Project random number generator.

Everything stochastic in this package (shuffles, bootstraps, feature
subsampling, synthetic data) draws from one pinned algorithm so that a given
seed reproduces byte-identical results anywhere: splitmix64
(Steele, Lea & Flood 2014). The generator is a counter-based stream,

    u64(i) = mix64((seed + (i+1) * GOLDEN) mod 2^64)

where mix64 is the splitmix64 finalizer. Because the stream is a pure
function of (seed, i) it vectorizes trivially and never depends on call
interleaving. Independent substreams come from `derive_seed`, which hashes a
parent seed with integer keys; substreams for (seed, k1) and (seed, k2) are
uncorrelated for k1 != k2, which is what makes per-tree / per-fold work
schedule-independent.

Pinned derived conventions:
  uniform()    = (u64 >> 11) * 2^-53                    in [0, 1)
  randint(n)   = ((u64 >> 11) * n) >> 53                in [0, n)
  shuffle      = Fisher-Yates, descending index, using randint
"""

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _key_to_int(key):
    """Map a key to a u64; strings fold their UTF-8 bytes through the mixer
    (process-salted builtin hash() would break reproducibility)."""
    if isinstance(key, str):
        h = 0x243F6A8885A308D3
        for b in key.encode("utf-8"):
            h = _mix64(h ^ b)
        return h
    return key & _MASK


def derive_seed(seed, *keys):
    """Derive a child seed from `seed` and integer/string keys, order-sensitively."""
    s = _mix64((seed & _MASK) ^ 0xA0761D6478BD642F)
    for k in keys:
        s = _mix64((s ^ _mix64(_key_to_int(k))) & _MASK)
    return s


class Rng:
    """Seedable splitmix64 stream. Not thread-safe; split instead of sharing."""

    def __init__(self, seed):
        self.seed = seed & _MASK
        self._i = 0

    def split(self, *keys):
        """Independent child stream; depends on the seed only, not on position."""
        return Rng(derive_seed(self.seed, *keys))

    def next_u64(self):
        self._i += 1
        return _mix64((self.seed + self._i * _GOLDEN) & _MASK)

    def uniform(self):
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def randint(self, n):
        """Integer in [0, n). Exact integer arithmetic, no float rounding."""
        if n <= 0:
            raise ValueError("randint bound must be positive")
        return ((self.next_u64() >> 11) * n) >> 53

    def shuffle(self, items):
        """In-place Fisher-Yates shuffle of a mutable sequence."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_without_replacement(self, n, k):
        """k distinct integers from [0, n), in shuffled order."""
        if k > n:
            raise ValueError("cannot sample more items than available")
        pool = list(range(n))
        self.shuffle(pool)
        return pool[:k]

    # Vectorized draws advance the same stream: a block of m draws consumes
    # stream positions i+1 .. i+m, identical to m scalar next_u64 calls.
    def _next_block(self, m):
        idx = np.arange(self._i + 1, self._i + m + 1, dtype=np.uint64)
        self._i += m
        z = (np.uint64(self.seed) + idx * np.uint64(_GOLDEN))
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))

    def uniform_array(self, shape):
        """Array of floats in [0, 1), same stream as scalar uniform()."""
        shape = (shape,) if np.isscalar(shape) else tuple(shape)
        m = int(np.prod(shape)) if shape else 1
        u = self._next_block(m) >> np.uint64(11)
        return (u * 2.0 ** -53).reshape(shape)
