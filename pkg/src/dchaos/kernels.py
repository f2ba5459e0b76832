"""Kernel dispatch: compiled extension when built, NumPy fallback otherwise.

Set ``DCHAOS_PURE_PYTHON=1`` before import to force the fallback.
"""

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("DCHAOS_PURE_PYTHON"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def _prep(vals, idx, coef):
    return (
        np.ascontiguousarray(vals, dtype=np.float64),
        np.ascontiguousarray(idx, dtype=np.int64),
        np.ascontiguousarray(coef, dtype=np.float64),
    )


def shifted_sums(vals, base, idx, coef, n_max, step, impl=None):
    vals, idx, coef = _prep(vals, idx, coef)
    return (impl or _impl).shifted_sums(vals, int(base), idx, coef, int(n_max), int(step))


def log_shifted_sums(logvals, base, idx, logcoef, n_max, step, impl=None):
    logvals, idx, logcoef = _prep(logvals, idx, logcoef)
    return (impl or _impl).log_shifted_sums(logvals, int(base), idx, logcoef, int(n_max), int(step))


def below_prefix_counts(vals, threshold, impl=None):
    vals = np.ascontiguousarray(vals, dtype=np.float64)
    return (impl or _impl).below_prefix_counts(vals, float(threshold))


def implementations():
    """Available kernel implementations keyed by name (for tests and benchmarks)."""
    impls = {"python": _pykernels}
    try:
        from . import _kernels

        impls["cython"] = _kernels
    except ImportError:
        pass
    return impls
