"""Counter-based random stream primitives shared by the simulation backends.

Every uniform variate is a pure function of a 64-bit stream key and a 64-bit
counter: ``u01(key, c) = mix64(key + (c + 1) * GOLDEN) >> 11`` scaled to
[0, 1), where mix64 is the splitmix64 finalizer.  Replication r of a run with
master seed s draws from key ``mix64(s + (r + 1) * GOLDEN)``, so its variates
depend only on (s, r) and never on scheduling, chunking, or thread count.
The numba and numpy backends implement the identical layout and therefore
consume the identical stream; the only cross-backend differences are at most
one ulp, introduced by differing log() implementations inside the polar
transform, never by the uniforms themselves.
"""

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


def mix64(x):
    """splitmix64 finalizer: a 64-bit bijection with strong avalanche."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * _MIX_A) & MASK64
    x = ((x ^ (x >> 27)) * _MIX_B) & MASK64
    return x ^ (x >> 31)


def derive_key(seed, *words):
    """Fold integers into a stream key, one mix per word.

    ``derive_key(seed, r)`` equals the per-replication key the kernels build
    internally; extra words give nested substreams (cells, chunks, ...).
    """
    key = seed & MASK64
    for w in words:
        key = mix64(key + (int(w) + 1) * GOLDEN)
    return key


def float_key_word(x):
    """Bit pattern of a float as an unsigned 64-bit word, for keying on rho."""
    return int(np.float64(x).view(np.uint64))


# --- vectorized uint64 forms used by the numpy backend ---

_U64 = np.uint64
_GOLDEN_V = _U64(GOLDEN)
_MIX_A_V = _U64(_MIX_A)
_MIX_B_V = _U64(_MIX_B)
_S30 = _U64(30)
_S27 = _U64(27)
_S31 = _U64(31)
_S11 = _U64(11)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


def mix64_array(x):
    """mix64 over a uint64 ndarray (wrapping arithmetic, no warnings).

    numpy flags overflow on uint64 *scalar* arithmetic (array ops wrap
    silently), so the intended modular wraparound is declared via errstate
    to keep scalar inputs warning-free as well.
    """
    with np.errstate(over="ignore"):
        x = (x ^ (x >> _S30)) * _MIX_A_V
        x = (x ^ (x >> _S27)) * _MIX_B_V
        return x ^ (x >> _S31)


def uniform01_array(keys, counters):
    """u01 for broadcastable uint64 arrays of keys and counters."""
    with np.errstate(over="ignore"):
        bits = mix64_array(keys + (counters + _U64(1)) * _GOLDEN_V)
    return (bits >> _S11).astype(np.float64) * _INV53


def replication_keys(seed, start, count):
    """Stream keys for replications start .. start+count-1 as a uint64 array."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64_array(_U64(seed & MASK64) + idx * _GOLDEN_V)
