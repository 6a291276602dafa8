"""Pure-numpy twin of the numba kernels.

Consumes the identical (key, counter) variate stream as _kernels_numba (same
splitmix64 constants, same polar-method counter layout); rejection sampling is
done in vectorized rounds over the slots still pending.  Statistics computed
here match the numba backend to floating-point roundoff; each backend is
exactly reproducible on its own for a given seed.
"""

import numpy as np

from . import _rng

_U = np.uint64
_TWO = _U(2)
_ONE = _U(1)

# chunk size bound: keep one chunk's raw normals around this many doubles
_CHUNK_DOUBLES = 4_000_000
_MAX_POLAR_ROUNDS = 10_000


def _std_normal_block(keys, count):
    """(R,) uint64 keys -> (R, count) standard normals, kernel stream layout."""
    nreps = keys.shape[0]
    nslot = (count + 1) // 2
    z = np.empty((nreps, 2 * nslot))
    zf = z.reshape(-1)
    rep = np.repeat(np.arange(nreps), nslot)
    slot_of = np.tile(np.arange(nslot, dtype=np.uint64), nreps)
    pending = np.arange(nreps * nslot)
    k = 0
    while pending.size:
        if k > _MAX_POLAR_ROUNDS:
            raise ArithmeticError("polar sampler failed to accept")
        sl = slot_of[pending]
        c0 = _TWO * (_U(k) * _U(nslot) + sl)
        kk = keys[rep[pending]]
        u = 2.0 * _rng.uniform01_array(kk, c0) - 1.0
        v = 2.0 * _rng.uniform01_array(kk, c0 + _ONE) - 1.0
        s = u * u + v * v
        accept = (s > 0.0) & (s < 1.0)
        if accept.any():
            idx = pending[accept]
            f = np.sqrt(-2.0 * np.log(s[accept]) / s[accept])
            base = rep[idx] * (2 * nslot) + 2 * slot_of[idx].astype(np.int64)
            zf[base] = u[accept] * f
            zf[base + 1] = v[accept] * f
        pending = pending[~accept]
        k += 1
    return z[:, :count]


def simulate_tT(seed, reps, n, p, mode, rho, chol_lt):
    """Same contract as _kernels_numba.simulate_tT; see there for modes."""
    draw = n * (p + 1) if mode == 1 else n * p
    chunk = max(1, _CHUNK_DOUBLES // max(draw, 1))
    t_out = np.empty(reps)
    big_out = np.empty(reps)
    degen = np.zeros(reps, dtype=np.uint8)
    low, high = np.tril_indices(p, -1)

    for start in range(0, reps, chunk):
        stop = min(start + chunk, reps)
        nreps = stop - start
        keys = _rng.replication_keys(seed, start, nreps)
        z = _std_normal_block(keys, draw)
        if mode == 0:
            x = z.reshape(nreps, n, p)
        elif mode == 1:
            raw = z.reshape(nreps, n, p + 1)
            x = np.sqrt(rho) * raw[:, :, :1] + np.sqrt(1.0 - rho) * raw[:, :, 1:]
        else:
            x = z.reshape(nreps, n, p) @ chol_lt

        xc = x - x.mean(axis=1, keepdims=True)
        ss = (xc * xc).sum(axis=1)
        bad_col = (ss <= 0.0).any(axis=1)
        ss[ss <= 0.0] = 1.0
        w = xc / np.sqrt(ss)[:, None, :]
        gram = np.matmul(w.transpose(0, 2, 1), w)
        g2 = gram[:, low, high] ** 2
        t = g2.sum(axis=1)
        bad_pair = (g2 >= 1.0).any(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            big = (g2 / (1.0 - g2)).sum(axis=1)
        t[bad_col] = np.nan
        big[bad_pair | bad_col] = np.nan
        t_out[start:stop] = t
        big_out[start:stop] = big
        degen[start:stop] = np.where(bad_col, 2, np.where(bad_pair, 1, 0)).astype(np.uint8)
    return t_out, big_out, degen
