"""Counter-based random numbers keyed by (seed, purpose, index).

Every draw is a pure function of its key, so vertex ``i`` or pair ``(i, j)``
gets the same variate no matter which order (or which backend) evaluates it.
The mixing function is the SplitMix64 finalizer; stream ``k`` of a key is the
``k``-th SplitMix64 output started from that key.  The compiled core repeats
the exact same arithmetic.
"""

from __future__ import annotations

import numpy as np

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_TWO_M53 = 1.0 / 9007199254740992.0

# purpose tags; fixed forever so that stored seeds stay reproducible
TAG_VERTEX = 1
TAG_EDGE = 2
TAG_PAIR_TEST = 3
TAG_BOOTSTRAP = 4


def mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer on a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _as_u64(x) -> np.ndarray:
    # negative seeds are folded into the 64-bit ring instead of rejected
    return np.atleast_1d(np.asarray(np.array(x, dtype=object) % (1 << 64), dtype=np.uint64))


def base_key(seed: int, tag: int) -> np.uint64:
    k = mix64(_as_u64(seed) ^ mix64(_as_u64(tag)))
    return k[0]


def row_keys(seed: int, tag: int, index) -> np.ndarray:
    """Keys of the substreams for ``index`` (array of non-negative ints)."""
    idx = np.asarray(index, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(base_key(seed, tag) + (idx + np.uint64(1)) * GAMMA)


def stream_bits(keys: np.ndarray, k) -> np.ndarray:
    """Raw 64-bit output number ``k`` of each substream."""
    k = np.asarray(k, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(np.asarray(keys, dtype=np.uint64) + (k + np.uint64(1)) * GAMMA)


def to_unit(bits: np.ndarray) -> np.ndarray:
    """Map uint64 bits to doubles in [0, 1) using the top 53 bits."""
    return (np.asarray(bits, dtype=np.uint64) >> _S11).astype(np.float64) * _TWO_M53


def uniforms(seed: int, tag: int, index, k=0) -> np.ndarray:
    """U[0,1) variates for (seed, tag, index, k), broadcasting index against k."""
    return to_unit(stream_bits(row_keys(seed, tag, index), k))


def pair_uniform(seed: int, i, j) -> np.ndarray:
    """The Bernoulli coin variate of unordered pair (i, j), i < j."""
    return uniforms(seed, TAG_EDGE, i, j)
