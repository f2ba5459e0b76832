"""Orbit norms of finitely supported vectors under backward and forward shifts.

A shift on a weighted sequence space is the composition operator of
``i -> i + 1`` (backward) or ``i -> i - 1`` (forward) on the discrete measure
space with masses ``v_j``. Norms are handled as p-th powers throughout so the
rational backend stays exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import kernels
from .density import IndexSet
from .errors import BackendOverflow, DomainMismatch
from .weights import BACKWARD, BILATERAL, FORWARD, NEG_INF, UNILATERAL, Harmonic, WeightSequence

EXACT_MAX = 5000
CHUNK = 1 << 20
# float ratios within this distance of the threshold count as ties
TIE_TOL = 1e-9
# spread of log-weights beyond which float sums switch to the log domain
LOG_SPREAD = 600.0


@dataclass(frozen=True)
class SimpleFunction:
    """Finite linear combination of indicators of singletons ``{j}``."""

    coeffs: Mapping[int, complex | Fraction | int | float]

    def __post_init__(self):
        clean = {int(j): c for j, c in self.coeffs.items()}
        if any(c == 0 for c in clean.values()):
            raise ValueError("coefficients must be nonzero on the support")
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def indicator(cls, support: Sequence[int], coeff=1) -> "SimpleFunction":
        return cls({j: coeff for j in support})

    @property
    def support(self) -> list[int]:
        return list(self.coeffs)

    @property
    def rational(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.coeffs.values())

    def to_json(self) -> dict:
        return {
            "support": self.support,
            "coeffs": [[float(complex(c).real), float(complex(c).imag)] for c in self.coeffs.values()],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "SimpleFunction":
        sup, co = doc["support"], doc["coeffs"]
        if len(sup) != len(co):
            raise ValueError("support and coeffs differ in length")
        vals = {}
        for j, (re, im) in zip(sup, co):
            vals[j] = complex(re, im) if im else re
        return cls(vals)


@dataclass(frozen=True)
class ShiftOperator:
    kind: str
    weight: WeightSequence = field(compare=False)

    def __post_init__(self):
        if self.kind not in (BACKWARD, FORWARD):
            raise ValueError(f"kind must be backward or forward, got {self.kind!r}")

    @property
    def side(self) -> str:
        return self.weight.side

    @property
    def step(self) -> int:
        """Index offset per iterate: the mass of {j} after n steps sits at ``j + step*n``."""
        return -1 if self.kind == BACKWARD else 1


def _require_domain(op: ShiftOperator, support) -> None:
    bad = [j for j in support if not op.weight.in_domain(j)]
    if bad:
        raise DomainMismatch(f"indices {bad[:5]} outside the {op.side} domain")


def preimage_mass(op: ShiftOperator, j: int, n: int):
    """``mu(sigma^{-n}({j}))``: ``v_{j-n}`` (backward) or ``v_{j+n}`` (forward)."""
    _require_domain(op, [j])
    if n < 0:
        raise ValueError("n must be nonnegative")
    return op.weight.value(j + op.step * n)


def _abs_pow(c, p):
    if isinstance(c, (int, Fraction)) and isinstance(p, (int, Fraction)) and Fraction(p).denominator == 1:
        return abs(Fraction(c)) ** int(p)
    return abs(complex(c)) ** float(p)


def _exact_ok(op: ShiftOperator, f: SimpleFunction, p) -> bool:
    return op.weight.exact and f.rational and Fraction(p).denominator == 1


def orbit_norm_p(op: ShiftOperator, f: SimpleFunction, n: int, p=1, exact: bool | None = None):
    """``||T^n f||^p = sum_j |f_j|^p mu(sigma^{-n}({j}))``.

    Exact (a Fraction) when the weight and coefficients are rational and ``p``
    is an integer, unless ``exact=False``.
    """
    _require_domain(op, f.support)
    if exact is None:
        exact = _exact_ok(op, f, p)
    elif exact and not _exact_ok(op, f, p):
        raise ValueError("exact evaluation needs rational weight, rational coefficients and integer p")
    if exact:
        p = int(p)
        return sum(
            (_abs_pow(c, p) * Fraction(op.weight.value(j + op.step * n)) for j, c in f.coeffs.items()),
            Fraction(0),
        )
    return math.fsum(
        abs(complex(c)) ** float(p) * float(op.weight.value(j + op.step * n)) for j, c in f.coeffs.items()
    )


def log_orbit_norm_p(op: ShiftOperator, f: SimpleFunction, n: int, p=1) -> float:
    """Natural log of ``||T^n f||^p`` accumulated in the log domain (``-inf`` for 0)."""
    _require_domain(op, f.support)
    terms = [
        float(p) * math.log(abs(complex(c))) + op.weight.log_value(j + op.step * n)
        for j, c in f.coeffs.items()
    ]
    return logsumexp(terms)


def logsumexp(xs) -> float:
    xs = [x for x in xs if x != NEG_INF]
    if not xs:
        return NEG_INF
    hi = max(xs)
    return hi + math.log(math.fsum(math.exp(x - hi) for x in xs))


def shift_function(op: ShiftOperator, f: SimpleFunction, m: int) -> SimpleFunction | None:
    """``T^m f`` as a simple function; ``None`` when every coefficient left the domain."""
    moved = {}
    for j, c in f.coeffs.items():
        # (B^m x)_i = x_{i+m}, (F^m x)_i = x_{i-m}
        i = j + op.step * m
        if op.weight.in_domain(i):
            moved[i] = c
    return SimpleFunction(moved) if moved else None


# ---------------------------------------------------------------- ratio sequences


@dataclass(frozen=True)
class _Support:
    idx: np.ndarray  # sorted int64 indices
    mods: tuple | None  # |C_j| aligned with idx (Fraction when rational); None means all ones
    rational: bool
    uniform: bool  # all moduli equal

    def float_mods(self) -> np.ndarray:
        if self.mods is None:
            return np.ones(len(self.idx))
        return np.array([float(m) for m in self.mods])

    @property
    def interval(self) -> bool:
        return self.uniform and int(self.idx[-1] - self.idx[0]) == len(self.idx) - 1


def _support(S, C) -> _Support:
    if isinstance(S, IndexSet):
        S = list(S.members(S.intervals[-1][1] if S.kind == "intervals" else S.elements[-1]))
    ones = C is None or (isinstance(C, str) and C == "ones")
    if isinstance(S, range) and S.step == 1 and ones:
        if not len(S):
            raise ValueError("support must be nonempty")
        return _Support(np.arange(S.start, S.stop, dtype=np.int64), None, True, True)
    S = sorted(int(j) for j in S)
    if not S:
        raise ValueError("support must be nonempty")
    if len(set(S)) != len(S):
        raise ValueError("support has repeated indices")
    if ones:
        mods = None
    else:
        raw = [C[j] for j in S] if isinstance(C, Mapping) else list(C)
        if len(raw) != len(S):
            raise ValueError("coefficients and support differ in length")
        if any(c == 0 for c in raw):
            raise ValueError("coefficients must be nonzero")
        # phases are irrelevant to the ratio; only moduli enter
        mods = tuple(abs(Fraction(c)) if isinstance(c, (int, Fraction)) else abs(complex(c)) for c in raw)
    if mods is None:
        return _Support(np.array(S, dtype=np.int64), None, True, True)
    rational = all(isinstance(m, Fraction) for m in mods)
    return _Support(np.array(S, dtype=np.int64), mods, rational, len(set(mods)) == 1)


def resolve_backend(op: ShiftOperator, sup: _Support, N: int, backend: str, exact_max: int) -> str:
    if backend not in ("exact", "float", "auto"):
        raise ValueError(f"unknown backend {backend!r}")
    can_exact = op.weight.exact and sup.rational
    if backend == "auto":
        return "exact" if can_exact and N <= exact_max else "float"
    if backend == "exact":
        if not can_exact:
            raise ValueError("exact backend needs a rational weight and rational coefficients")
        if N > exact_max:
            raise BackendOverflow(f"exact backend refused: N = {N} exceeds cap {exact_max}")
    return backend


def _value_range(op: ShiftOperator, sup: _Support, N: int) -> tuple[int, int]:
    lo, hi = int(sup.idx[0]), int(sup.idx[-1])
    return (lo - N, hi) if op.kind == BACKWARD else (lo, hi + N)


def _exact_ratios(op: ShiftOperator, sup: _Support, N: int) -> tuple[list[int], int]:
    """Integer numerators (length N) and common denominator of the ratio sequence."""
    r0, r1 = _value_range(op, sup, N)
    vals = op.weight.exact_values(r0, r1)
    scale = math.lcm(*(v.denominator for v in vals))
    V = [v.numerator * (scale // v.denominator) for v in vals]
    s = op.step
    idx = [int(j) - r0 for j in sup.idx]
    if sup.uniform:
        P = [0]
        for x in V:
            P.append(P[-1] + x)
        lo, hi = idx[0], idx[-1]
        if sup.interval:
            den = P[hi + 1] - P[lo]
            nums = [P[hi + s * n + 1] - P[lo + s * n] for n in range(1, N + 1)]
            return nums, den
        den = sum(V[t] for t in idx)
        nums = [sum(V[t + s * n] for t in idx) for n in range(1, N + 1)]
        return nums, den
    cscale = math.lcm(*(m.denominator for m in sup.mods))
    A = [m.numerator * (cscale // m.denominator) for m in sup.mods]
    den = sum(a * V[t] for a, t in zip(A, idx))
    nums = [sum(a * V[t + s * n] for a, t in zip(A, idx)) for n in range(1, N + 1)]
    return nums, den


def _float_chunks(op: ShiftOperator, sup: _Support, N: int, chunk: int = CHUNK) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(n0, ratios[n0 .. n0+len-1])`` in increasing ``n`` order."""
    s = op.step
    lo, hi = int(sup.idx[0]), int(sup.idx[-1])
    gen = op.weight.generator
    if sup.interval and isinstance(gen, Harmonic) and op.side == UNILATERAL:
        H = gen.partial_sums
        den = float(H(np.array([hi]))[0] - H(np.array([lo - 1]))[0])
        for n0 in range(1, N + 1, chunk):
            ns = np.arange(n0, min(n0 + chunk, N + 1), dtype=np.int64)
            yield n0, (H(hi + s * ns) - H(lo - 1 + s * ns)) / den
        return

    r0, r1 = _value_range(op, sup, N)
    logs = op.weight.log_values(r0, r1)
    finite = logs[np.isfinite(logs)]
    spread = float(finite.max() - finite.min()) if finite.size else 0.0
    mods = sup.float_mods()
    if spread <= LOG_SPREAD and (not finite.size or abs(finite).max() < 700):
        vals = op.weight.float_values(r0, r1)
        if sup.interval:
            P = np.concatenate(([0.0], np.cumsum(vals, dtype=np.longdouble)))
            a, b = lo - r0, hi - r0
            den = P[b + 1] - P[a]
            for n0 in range(1, N + 1, chunk):
                ns = np.arange(n0, min(n0 + chunk, N + 1), dtype=np.int64)
                yield n0, np.asarray((P[b + s * ns + 1] - P[a + s * ns]) / den, dtype=np.float64)
            return
        den = math.fsum(m * vals[j - r0] for m, j in zip(mods, sup.idx))
        for n0 in range(1, N + 1, chunk):
            n1 = min(n0 + chunk, N + 1)
            # shift the base so the kernel's n runs from 1
            sums = kernels.shifted_sums(vals, r0 - s * (n0 - 1), sup.idx, mods, n1 - n0, s)
            yield n0, sums / den
        return

    logmods = np.log(mods)
    logden = logsumexp([lm + logs[j - r0] for lm, j in zip(logmods, sup.idx)])
    for n0 in range(1, N + 1, chunk):
        n1 = min(n0 + chunk, N + 1)
        lsums = kernels.log_shifted_sums(logs, r0 - s * (n0 - 1), sup.idx, logmods, n1 - n0, s)
        yield n0, np.exp(lsums - logden)


def ratio_sequence(
    op: ShiftOperator,
    S,
    C=None,
    N: int = 1,
    backend: str = "auto",
    exact_max: int = EXACT_MAX,
):
    """Entries ``n = 1..N`` of ``sum_j |C_j| v_{j-n} / sum_j |C_j| v_j`` (backward; ``j+n`` forward).

    Returns a list of Fractions on the exact backend and a float64 array
    otherwise. ``C=None`` means all coefficients are 1. The sequence does not
    depend on ``p``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    sup = _support(S, C)
    _require_domain(op, (int(sup.idx[0]), int(sup.idx[-1])))  # the domain is an interval
    be = resolve_backend(op, sup, N, backend, exact_max)
    if be == "exact":
        nums, den = _exact_ratios(op, sup, N)
        if den == 0:
            raise DomainMismatch("zero denominator: support carries no mass")
        return [Fraction(x, den) for x in nums]
    parts = [r for _, r in _float_chunks(op, sup, N)]
    return np.concatenate(parts)


@dataclass(frozen=True)
class ThresholdCount:
    count: int
    witness_ns: tuple[int, ...]
    near_ties: int
    backend: str


def count_at_least(
    op: ShiftOperator,
    S,
    C,
    N: int,
    threshold: int | Fraction,
    backend: str = "auto",
    exact_max: int = EXACT_MAX,
    max_witnesses: int = 10,
) -> ThresholdCount:
    """card{1 <= n <= N : ratio_n >= threshold}, streaming over ``n``.

    Exact comparison on the rational backend. On the float backend entries
    with ``ratio >= threshold - 1e-9`` count, and entries within 1e-9 of the
    threshold are reported as near ties.
    """
    sup = _support(S, C)
    _require_domain(op, (int(sup.idx[0]), int(sup.idx[-1])))  # the domain is an interval
    be = resolve_backend(op, sup, N, backend, exact_max)
    thr = Fraction(threshold)
    if be == "exact":
        nums, den = _exact_ratios(op, sup, N)
        if den == 0:
            raise DomainMismatch("zero denominator: support carries no mass")
        hits = [n for n, x in enumerate(nums, start=1) if x * thr.denominator >= thr.numerator * den]
        return ThresholdCount(len(hits), tuple(hits[:max_witnesses]), 0, be)
    t = float(thr)
    count, ties, wit = 0, 0, []
    for n0, r in _float_chunks(op, sup, N):
        ok = r >= t - TIE_TOL
        count += int(ok.sum())
        ties += int((np.abs(r - t) <= TIE_TOL).sum())
        if len(wit) < max_witnesses:
            wit.extend((np.flatnonzero(ok)[: max_witnesses - len(wit)] + n0).tolist())
    return ThresholdCount(count, tuple(wit), ties, be)


# ---------------------------------------------------------------- vanishing along density-one sets


@dataclass(frozen=True)
class NearZeroLevel:
    k: int
    horizon: int
    count_at_horizon: int
    achieved: bool
    best_N: int | None
    best_count: int | None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "horizon": self.horizon,
            "count_at_horizon": self.count_at_horizon,
            "achieved": self.achieved,
            "best_N": self.best_N,
            "best_count": self.best_count,
        }


def vanishing_values(op: ShiftOperator, N_max: int) -> np.ndarray:
    """``u_n = v_{-n}`` (backward) or ``v_n`` (forward) for ``n = 1..N_max``, as floats."""
    if op.kind == BACKWARD:
        if op.side != BILATERAL:
            raise DomainMismatch("the backward vanishing condition needs a bilateral weight")
        return op.weight.float_values(-N_max, -1)[::-1].copy()
    return op.weight.float_values(1, N_max)


def near_zero_profile(
    op: ShiftOperator,
    k_max: int,
    N_max: int,
    density_set: IndexSet | None = None,
    exact: bool | None = None,
) -> list[NearZeroLevel]:
    """For each ``k <= k_max``: count of ``n <= N`` with ``u_n < 1/k`` and whether it reaches ``N (1 - 1/k)``.

    ``u_n`` is ``v_{-n}`` for the backward shift and ``v_n`` for the forward
    shift. With ``density_set`` only ``n`` in that set are counted.
    ``best_N`` is the largest ``N <= N_max`` meeting the bound.
    """
    if exact is None:
        exact = op.weight.exact and N_max <= 100_000
    if exact:
        sgn = -1 if op.kind == BACKWARD else 1
        if op.kind == BACKWARD and op.side != BILATERAL:
            raise DomainMismatch("the backward vanishing condition needs a bilateral weight")
        u = [Fraction(op.weight.value(sgn * n)) for n in range(1, N_max + 1)]
    else:
        u = vanishing_values(op, N_max)
    mask = None
    if density_set is not None:
        mask = np.array([n in density_set for n in range(1, N_max + 1)], dtype=bool)
    Ns = np.arange(1, N_max + 1, dtype=np.int64)
    out = []
    for k in range(1, k_max + 1):
        if exact:
            thr = Fraction(1, k)
            below = np.array([x < thr for x in u], dtype=bool)
        else:
            below = np.asarray(u) < 1.0 / k
        if mask is not None:
            below &= mask
        counts = np.cumsum(below, dtype=np.int64)
        ok = counts * k >= Ns * (k - 1)
        hit = np.flatnonzero(ok)
        best = int(hit[-1]) + 1 if hit.size else None
        out.append(
            NearZeroLevel(
                k, N_max, int(counts[-1]), bool(hit.size), best,
                int(counts[best - 1]) if best else None,
            )
        )
    return out
