"""Numba implementations of the Monte Carlo hot loops.

Importing this module requires numba; backend.py guards the import and falls
back to _kernels_numpy.  The (key, counter) stream layout must stay in exact
lockstep with _kernels_numpy; see _rng.py for the contract.
"""

import numpy as np
from numba import njit, prange

from . import _rng

_U = np.uint64
_GOLDEN = _U(_rng.GOLDEN)
_MIX_A = _U(0xBF58476D1CE4E5B9)
_MIX_B = _U(0x94D049BB133111EB)
_S30 = _U(30)
_S27 = _U(27)
_S31 = _U(31)
_S11 = _U(11)
_INV53 = 1.0 / 9007199254740992.0
_ONE = _U(1)


@njit(inline="always", cache=True)
def _mix64(x):
    x = (x ^ (x >> _S30)) * _MIX_A
    x = (x ^ (x >> _S27)) * _MIX_B
    return x ^ (x >> _S31)


@njit(inline="always", cache=True)
def _u01(key, c):
    bits = _mix64(key + (c + _ONE) * _GOLDEN)
    return float(bits >> _S11) * _INV53


@njit(cache=True)
def _std_normals(key, count):
    # Marsaglia polar method.  Pair slot j owns counters 2*(k*nslot + j) + {0,1}
    # at attempt k, so each slot's accept/reject sequence is independent of
    # every other slot and the stream is reproducible in any evaluation order.
    nslot = (count + 1) // 2
    z = np.empty(2 * nslot)
    for j in range(nslot):
        k = 0
        while True:
            c0 = _U(2 * (k * nslot + j))
            u = 2.0 * _u01(key, c0) - 1.0
            v = 2.0 * _u01(key, c0 + _ONE) - 1.0
            s = u * u + v * v
            if 0.0 < s < 1.0:
                f = np.sqrt(-2.0 * np.log(s) / s)
                z[2 * j] = u * f
                z[2 * j + 1] = v * f
                break
            k += 1
    return z[:count]


@njit(cache=True, parallel=True)
def simulate_tT(seed, reps, n, p, mode, rho, chol_lt):
    """Per-replication plain and ratio statistics under the equicorrelated model.

    mode 0: iid N(0,1) columns (rho = 0)
    mode 1: one-factor construction for rho > 0
    mode 2: rows z @ chol_lt for general covariance (rho < 0)

    Returns (t, T, degen); degen is 2 for a zero-variance column (both
    statistics NaN), 1 when some |r| >= 1 (ratio statistic NaN), else 0.
    """
    t_out = np.empty(reps)
    big_out = np.empty(reps)
    degen = np.zeros(reps, dtype=np.uint8)
    r_pos = rho if rho > 0.0 else 0.0
    sq_common = np.sqrt(r_pos)
    sq_own = np.sqrt(1.0 - r_pos)
    for rix in prange(reps):
        key = _mix64(_U(seed) + (_U(rix) + _ONE) * _GOLDEN)
        if mode == 0:
            x = _std_normals(key, n * p).reshape(n, p)
        elif mode == 1:
            raw = _std_normals(key, n * (p + 1)).reshape(n, p + 1)
            x = np.empty((n, p))
            for i in range(n):
                shared = sq_common * raw[i, 0]
                for j in range(p):
                    x[i, j] = shared + sq_own * raw[i, j + 1]
        else:
            x = np.dot(_std_normals(key, n * p).reshape(n, p), chol_lt)

        # center each column and scale to unit length
        w = np.empty((n, p))
        bad_col = False
        for j in range(p):
            m = 0.0
            for i in range(n):
                m += x[i, j]
            m /= n
            ss = 0.0
            for i in range(n):
                d = x[i, j] - m
                w[i, j] = d
                ss += d * d
            if ss <= 0.0:
                bad_col = True
            else:
                inv = 1.0 / np.sqrt(ss)
                for i in range(n):
                    w[i, j] *= inv
        if bad_col:
            t_out[rix] = np.nan
            big_out[rix] = np.nan
            degen[rix] = 2
            continue

        gram = np.dot(w.T, w)
        t = 0.0
        big = 0.0
        bad_pair = False
        for i in range(1, p):
            for j in range(i):
                g2 = gram[i, j] * gram[i, j]
                t += g2
                if g2 >= 1.0:
                    bad_pair = True
                else:
                    big += g2 / (1.0 - g2)
        t_out[rix] = t
        if bad_pair:
            big_out[rix] = np.nan
            degen[rix] = 1
        else:
            big_out[rix] = big
    return t_out, big_out, degen
