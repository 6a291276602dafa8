"""Sample correlations and direct null sampling on the unit sphere.

The off-diagonal correlations of a p-column data matrix are stored flat in
the fixed order (2,1), (3,1), (3,2), (4,1), ... (1-based pairs, row index
outer), which is the order every downstream module indexes.

Under the null of complete independence the correlation r_ij equals the
inner product of two independent points uniform on the unit sphere in
R^(n-1).  ``sample_null_correlations`` exploits that to draw null
correlation summaries without synthesizing any data matrix: p vectors of
n-1 iid standard normals are normalized to unit length and all pairwise
inner products taken.  The distribution is exactly that of
``correlation_summary`` applied to an n x p matrix of iid normals.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateColumnError, DomainError, SampleSizeError


@dataclass(frozen=True)
class CorrelationSummary:
    """Off-diagonal sample correlations of an n x p data matrix.

    offdiag[k] is r_ij for the k-th pair in the order (2,1),(3,1),(3,2),...;
    the implied unit diagonal is not stored.
    """

    n: int
    p: int
    offdiag: np.ndarray = field(repr=False)

    def __post_init__(self):
        expected = self.p * (self.p - 1) // 2
        if self.offdiag.shape != (expected,):
            raise DomainError(
                "offdiag must have length p(p-1)/2 = %d, got %r"
                % (expected, self.offdiag.shape))

    @property
    def pair_count(self):
        return self.p * (self.p - 1) // 2


def pair_indices(p):
    """Row and column index arrays (0-based) matching the storage order."""
    return np.tril_indices(p, -1)


def _as_generator(rng):
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer)):
        return np.random.default_rng(int(rng))
    raise DomainError("rng must be a numpy Generator or an integer seed")


def _validate_shape(n, p):
    if n < 3:
        raise SampleSizeError("need n >= 3 observations, got %d" % n)
    if p < 2:
        raise DomainError("need p >= 2 columns, got %d" % p)


def correlation_summary(data):
    """Pairwise sample correlations of the columns of an n x p matrix.

    Two-pass computation: columns are centered by their means first, then
    cross products of the centered columns are normalized, which keeps the
    result stable for large common offsets.  A column with zero variance has
    no defined correlation and raises DegenerateColumnError naming the
    (0-based) column.
    """
    x = np.asarray(data, dtype=float)
    if x.ndim != 2:
        raise DomainError("data must be a 2-d matrix, got %d-d" % x.ndim)
    n, p = x.shape
    _validate_shape(n, p)
    if not np.isfinite(x).all():
        raise DomainError("data contains non-finite values")

    centered = x - x.mean(axis=0)
    ss = np.einsum("ij,ij->j", centered, centered)
    # exact-constant columns give ss == 0; near-constant ones can leave pure
    # rounding noise, which would turn into garbage correlations of +-1
    limit = (np.finfo(float).eps * np.abs(x).max(axis=0, initial=0.0)) ** 2 * n * 16.0
    for j in range(p):
        if ss[j] <= limit[j] or np.all(x[:, j] == x[0, j]):
            raise DegenerateColumnError(j)

    norm = np.sqrt(ss)
    corr = (centered.T @ centered) / np.outer(norm, norm)
    low, high = pair_indices(p)
    off = np.clip(corr[low, high], -1.0, 1.0)
    # linearly dependent columns have correlation exactly +-1, but rounding
    # in the cross products lands a few ulps short; snap those so the
    # degenerate-correlation handling downstream sees them (a genuine
    # correlation this close to 1 is indistinguishable from dependence)
    snap = 1.0 - 64.0 * n * np.finfo(float).eps
    off[off >= snap] = 1.0
    off[off <= -snap] = -1.0
    return CorrelationSummary(n=n, p=p, offdiag=off)


def _unit_rows(vectors):
    norms = np.sqrt(np.einsum("...ij,...ij->...i", vectors, vectors))
    return vectors / norms[..., None]


def sample_null_correlations(n, p, rng):
    """One draw of the null correlation summary via the sphere representation.

    rng is a numpy Generator (or an integer convenience seed); distinct
    Generators may be used concurrently and passed between threads.
    """
    _validate_shape(n, p)
    gen = _as_generator(rng)
    w = _unit_rows(gen.standard_normal((p, n - 1)))
    gram = w @ w.T
    low, high = pair_indices(p)
    off = np.clip(gram[low, high], -1.0, 1.0)
    return CorrelationSummary(n=n, p=p, offdiag=off)


def sample_null_correlations_batch(n, p, reps, rng):
    """Stacked null draws: a (reps, p(p-1)/2) array of correlations.

    Vectorized equivalent of ``reps`` calls to sample_null_correlations on
    the same stream; used by the moment-identity oracle and heavier tests.
    """
    _validate_shape(n, p)
    if reps < 1:
        raise DomainError("reps must be >= 1")
    gen = _as_generator(rng)
    w = _unit_rows(gen.standard_normal((reps, p, n - 1)))
    gram = np.matmul(w, w.transpose(0, 2, 1))
    low, high = pair_indices(p)
    return np.clip(gram[:, low, high], -1.0, 1.0)
