"""Monte Carlo size and power estimation for the four calibrated tests.

A simulation cell is (n, p, rho, alpha, replications, seed, tests): draw
``replications`` samples of size n from the p-variate normal law with unit
variances and constant correlation rho, compute the plain and ratio
statistics for each, and count how often each requested test rejects at
level alpha.  rho = 0 estimates size; rho != 0 estimates power.

Reproducibility contract: replication r of a cell uses the random substream
keyed by (seed, r) (see _rng.py), so results are byte-identical for a given
seed at any thread count and on both kernel backends' rejection counts.
Degenerate replications (a zero-variance column or a correlation of exactly
+-1, both probability zero under these models) are counted in
``degenerate_count`` and never counted as rejections; the rate denominator
stays ``replications``.

The equicorrelated covariance is positive definite iff -1/(p-1) < rho < 1.
Sampling uses the one-factor construction for rho >= 0 and a Cholesky factor
for rho < 0, where the factor trick has no real square root.
"""

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from . import backend as _backend
from ._rng import derive_key, float_key_word
from .decision import TEST_NAMES, threshold
from .errors import CorrIndepError, DomainError, SampleSizeError

CSV_HEADER = ("test", "n", "p", "rho", "alpha", "replications", "seed",
              "reject_rate", "mc_se")

TABLE_NS = (15, 30, 60, 100, 200)
TABLE_PS = (3, 10, 20, 50, 100, 200)


def _validate_rho(p, rho):
    if not -1.0 / (p - 1) < rho < 1.0:
        raise DomainError(
            "rho=%g is outside (-1/(p-1), 1) = (%g, 1); the equicorrelated "
            "covariance is not positive definite" % (rho, -1.0 / (p - 1)))


@dataclass(frozen=True)
class SimulationSpec:
    """One Monte Carlo cell."""

    n: int
    p: int
    rho: float = 0.0
    alpha: float = 0.05
    replications: int = 10_000
    seed: int = 0
    tests: tuple = TEST_NAMES

    def __post_init__(self):
        if self.n < 3:
            raise SampleSizeError("need n >= 3, got %d" % self.n)
        if self.p < 2:
            raise DomainError("need p >= 2, got %d" % self.p)
        _validate_rho(self.p, self.rho)
        if not 0.0 < self.alpha < 1.0:
            raise DomainError("alpha must lie strictly between 0 and 1")
        if self.replications < 1:
            raise DomainError("replications must be >= 1")
        object.__setattr__(self, "tests", tuple(self.tests))
        if not self.tests:
            raise DomainError("tests must not be empty")
        for name in self.tests:
            if name not in TEST_NAMES:
                raise DomainError(
                    "unknown test %r (choose from %s)" % (name, ", ".join(TEST_NAMES)))

    def cell_key(self):
        """Identity of the cell for resume bookkeeping (test names excluded)."""
        return (self.n, self.p, repr(float(self.rho)), repr(float(self.alpha)),
                self.replications, self.seed)


@dataclass
class RejectionOutcome:
    """Rejection summary for one test inside one cell."""

    test_name: str
    rejection_count: int
    rejection_rate: float
    mc_standard_error: float


@dataclass
class SimulationResult:
    """All requested tests of one cell plus the degenerate-replication count."""

    spec: SimulationSpec
    outcomes: dict
    degenerate_count: int


def sample_equicorrelated_normal(n, p, rho, rng):
    """One n x p draw with unit variances and constant correlation rho.

    rng is a numpy Generator or an integer seed.  For rho >= 0 column j is
    sqrt(rho) g0 + sqrt(1-rho) gj with iid standard normal g's, which has
    exactly the target covariance; negative rho goes through a Cholesky
    factor.
    """
    if n < 1:
        raise DomainError("need n >= 1, got %d" % n)
    if p < 2:
        raise DomainError("need p >= 2, got %d" % p)
    _validate_rho(p, rho)
    gen = np.random.default_rng(int(rng)) if isinstance(rng, (int, np.integer)) else rng
    if rho == 0.0:
        return gen.standard_normal((n, p))
    if rho > 0.0:
        g = gen.standard_normal((n, p + 1))
        return math.sqrt(rho) * g[:, :1] + math.sqrt(1.0 - rho) * g[:, 1:]
    return gen.standard_normal((n, p)) @ _cholesky_lt(p, rho)


def _cholesky_lt(p, rho):
    cov = np.full((p, p), rho)
    np.fill_diagonal(cov, 1.0)
    return np.ascontiguousarray(np.linalg.cholesky(cov).T)


def simulate_statistics(n, p, rho, replications, seed, backend=None, threads=None):
    """Per-replication (t, T, degen) arrays for one cell.

    t and T are the plain and ratio statistics of each replication; degen
    flags replications whose statistics are undefined (see module docstring).
    Entry r depends only on (seed, r).
    """
    if n < 3:
        raise SampleSizeError("need n >= 3, got %d" % n)
    if p < 2:
        raise DomainError("need p >= 2, got %d" % p)
    _validate_rho(p, rho)
    if replications < 1:
        raise DomainError("replications must be >= 1")
    if rho == 0.0:
        mode, lt = 0, np.empty((0, 0))
    elif rho > 0.0:
        mode, lt = 1, np.empty((0, 0))
    else:
        mode, lt = 2, _cholesky_lt(p, rho)
    _backend.thread_cap(threads)
    kern = _backend.kernels(backend)
    return kern.simulate_tT(int(seed), int(replications), int(n), int(p),
                            mode, float(rho), lt)


def estimate_rejection_rate(spec: SimulationSpec, backend=None, threads=None):
    """Monte Carlo rejection rate of each requested test for one cell."""
    thresholds = {name: threshold(name, spec.n, spec.p, spec.alpha)
                  for name in spec.tests}
    t_arr, big_arr, degen = simulate_statistics(
        spec.n, spec.p, spec.rho, spec.replications, spec.seed,
        backend=backend, threads=threads)
    outcomes = {}
    for name, thr in thresholds.items():
        values = t_arr if name in ("t_star", "t_c") else big_arr
        with np.errstate(invalid="ignore"):
            count = int(np.count_nonzero(values >= thr))  # NaN never rejects
        rate = count / spec.replications
        se = math.sqrt(rate * (1.0 - rate) / spec.replications)
        outcomes[name] = RejectionOutcome(name, count, rate, se)
    return SimulationResult(
        spec=spec,
        outcomes=outcomes,
        degenerate_count=int(np.count_nonzero(degen)),
    )


def table1_grid(replications=10_000, seed=0, alpha=0.05, tests=TEST_NAMES):
    """The 30-cell rho=0 size grid: n in {15..200} x p in {3..200}."""
    return _grid(0.0, replications, seed, alpha, tests)


def table2_grid(replications=10_000, seed=0, alpha=0.05, tests=TEST_NAMES):
    """The 30-cell rho=0.02 power grid over the same (n, p) values."""
    return _grid(0.02, replications, seed, alpha, tests)


def _grid(rho, replications, seed, alpha, tests):
    specs = []
    for n in TABLE_NS:
        for p in TABLE_PS:
            cell_seed = derive_key(seed, n, p, float_key_word(rho))
            specs.append(SimulationSpec(
                n=n, p=p, rho=rho, alpha=alpha, replications=replications,
                seed=cell_seed, tests=tuple(tests)))
    return specs


def run_table(grid, backend=None, threads=None, progress=None, skip_keys=frozenset()):
    """Evaluate a grid of cells into flat result rows.

    Rows follow the CSV schema; a cell that fails validation produces one row
    per requested test with reject_rate/mc_se set to None and an "error"
    entry carrying the reason.  ``skip_keys`` (cell_key() values) supports
    resuming: matching cells are skipped entirely.  ``progress`` is an
    optional callable fed one line per finished cell.
    """
    if not grid:
        raise DomainError("grid must not be empty")
    rows = []
    total = len(grid)
    for i, spec in enumerate(grid):
        if spec.cell_key() in skip_keys:
            if progress is not None:
                progress("cell %d/%d n=%d p=%d rho=%g: skipped (resume)"
                         % (i + 1, total, spec.n, spec.p, spec.rho))
            continue
        try:
            result = estimate_rejection_rate(spec, backend=backend, threads=threads)
        except CorrIndepError as exc:
            for name in spec.tests:
                rows.append(_row(spec, name, None, None, error=str(exc)))
            if progress is not None:
                progress("cell %d/%d n=%d p=%d rho=%g: error: %s"
                         % (i + 1, total, spec.n, spec.p, spec.rho, exc))
            continue
        for name in spec.tests:
            out = result.outcomes[name]
            rows.append(_row(spec, name, out.rejection_rate, out.mc_standard_error))
        if progress is not None:
            rates = " ".join("%s=%.4f" % (nm, result.outcomes[nm].rejection_rate)
                             for nm in spec.tests)
            progress("cell %d/%d n=%d p=%d rho=%g: %s"
                     % (i + 1, total, spec.n, spec.p, spec.rho, rates))
    return rows


def _row(spec, test_name, rate, se, error=None):
    row = {
        "test": test_name,
        "n": spec.n,
        "p": spec.p,
        "rho": float(spec.rho),
        "alpha": float(spec.alpha),
        "replications": spec.replications,
        "seed": spec.seed,
        "reject_rate": rate,
        "mc_se": se,
    }
    if error is not None:
        row["error"] = error
    return row


def rows_to_csv(rows):
    """Render result rows to the fixed 9-column CSV schema (full precision).

    Errored cells keep the schema with empty reject_rate/mc_se fields; their
    messages travel in the JSON/text renderings only.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([_csv_field(row[k]) for k in CSV_HEADER])
    return buf.getvalue()


def _csv_field(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_json(rows):
    """Render result rows as a JSON array (full float precision)."""
    return json.dumps(rows, indent=2) + "\n"


def parse_rows_csv(text):
    """Parse rows_to_csv output back into row dicts (resume support)."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        return []
    if tuple(header) != CSV_HEADER:
        raise DomainError("unexpected CSV header %r" % (header,))
    rows = []
    for rec in reader:
        if not rec:
            continue
        row = dict(zip(CSV_HEADER, rec))
        row["n"] = int(row["n"])
        row["p"] = int(row["p"])
        row["rho"] = float(row["rho"])
        row["alpha"] = float(row["alpha"])
        row["replications"] = int(row["replications"])
        row["seed"] = int(row["seed"])
        row["reject_rate"] = float(row["reject_rate"]) if row["reject_rate"] else None
        row["mc_se"] = float(row["mc_se"]) if row["mc_se"] else None
        rows.append(row)
    return rows


def row_cell_key(row):
    """cell_key() of the spec a result row came from."""
    return (row["n"], row["p"], repr(float(row["rho"])), repr(float(row["alpha"])),
            row["replications"], row["seed"])
