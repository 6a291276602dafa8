"""Backend selection for the Monte Carlo kernels.

Two interchangeable implementations exist: a numba-compiled one
(_kernels_numba) and a pure-numpy one (_kernels_numpy).  Both consume the
same counter-based random stream, so results agree to floating-point roundoff
and rejection counts agree exactly for every configuration in the test suite.

Selection order:

1. an explicit ``set_backend(...)`` call wins,
2. else the CORRINDEP_BACKEND environment variable ("numba", "numpy", "auto"),
3. else "auto": numba when importable, numpy otherwise.
"""

import os

from .errors import DomainError

ENV_VAR = "CORRINDEP_BACKEND"

_UNSET = object()
_numba_kernels = _UNSET
_forced = None


def _load_numba_kernels():
    global _numba_kernels
    if _numba_kernels is _UNSET:
        try:
            from . import _kernels_numba as mod
        except ImportError:
            mod = None
        _numba_kernels = mod
    return _numba_kernels


def available_backends():
    """Backends usable in this process, best first."""
    if _load_numba_kernels() is not None:
        return ("numba", "numpy")
    return ("numpy",)


def set_backend(name):
    """Force a backend ("numba" or "numpy"); None or "auto" restores defaults."""
    global _forced
    if name is None or name == "auto":
        _forced = None
        return
    if name not in ("numba", "numpy"):
        raise DomainError("unknown backend %r (choose numba, numpy or auto)" % (name,))
    if name == "numba" and _load_numba_kernels() is None:
        raise DomainError("numba backend requested but numba is not importable")
    _forced = name


def active_backend():
    """Resolve the backend name that kernels() will return."""
    if _forced is not None:
        return _forced
    env = os.environ.get(ENV_VAR, "auto").strip().lower()
    if env in ("", "auto"):
        return "numba" if _load_numba_kernels() is not None else "numpy"
    if env == "numpy":
        return "numpy"
    if env == "numba":
        if _load_numba_kernels() is None:
            raise DomainError(
                "%s=numba but numba is not importable" % ENV_VAR)
        return "numba"
    raise DomainError(
        "invalid %s=%r (choose numba, numpy or auto)" % (ENV_VAR, env))


def kernels(name=None):
    """Kernel module for the given (or active) backend."""
    name = name or active_backend()
    if name == "numba":
        mod = _load_numba_kernels()
        if mod is None:
            raise DomainError("numba backend requested but numba is not importable")
        return mod
    if name == "numpy":
        from . import _kernels_numpy
        return _kernels_numpy
    raise DomainError("unknown backend %r" % (name,))


def thread_cap(threads):
    """Cap numba's worker count; a no-op for the numpy backend.

    Results never depend on the cap (replication substreams are keyed by
    index), only wall-clock time does.
    """
    if threads is None:
        return
    threads = int(threads)
    if threads < 1:
        raise DomainError("threads must be >= 1")
    if _load_numba_kernels() is not None:
        import numba

        numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
