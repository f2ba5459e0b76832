"""Reference implementations of the hot loops.

Every function here has a compiled twin in ``_kernels.pyx`` with identical
semantics. ``shifted_sums`` and ``below_prefix_counts`` agree bit for bit with
the compiled versions because each output entry is accumulated in the same
order; ``log_shifted_sums`` may differ in the last ulp (libm vs NumPy exp).
"""

import numpy as np


def shifted_sums(vals, base, idx, coef, n_max, step):
    """Return ``out[n-1] = sum_t coef[t] * vals[idx[t] + step*n - base]``.

    ``vals`` covers every index touched for ``1 <= n <= n_max``; ``step`` is
    -1 for the backward shift and +1 for the forward shift.
    """
    out = np.zeros(n_max, dtype=np.float64)
    ns = np.arange(1, n_max + 1, dtype=np.int64)
    for t in range(len(idx)):
        out += coef[t] * vals[idx[t] + step * ns - base]
    return out


def log_shifted_sums(logvals, base, idx, logcoef, n_max, step):
    """Log-domain version of :func:`shifted_sums` (inputs and output are logs)."""
    ns = np.arange(1, n_max + 1, dtype=np.int64)
    hi = np.full(n_max, -np.inf)
    for t in range(len(idx)):
        np.maximum(hi, logcoef[t] + logvals[idx[t] + step * ns - base], out=hi)
    finite = np.isfinite(hi)
    safe = np.where(finite, hi, 0.0)
    acc = np.zeros(n_max, dtype=np.float64)
    for t in range(len(idx)):
        acc += np.exp(logcoef[t] + logvals[idx[t] + step * ns - base] - safe)
    with np.errstate(divide="ignore"):
        out = safe + np.log(acc)
    out[~finite] = -np.inf
    return out


def below_prefix_counts(vals, threshold):
    """Running count of entries strictly below ``threshold``."""
    return np.cumsum(np.asarray(vals) < threshold, dtype=np.int64)
