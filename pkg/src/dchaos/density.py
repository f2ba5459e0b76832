"""Finite-horizon density arithmetic on subsets of the positive integers.

Densities are only ever reported at explicit horizons. Ratios are exact
:class:`fractions.Fraction` values so they can be compared against bounds
such as ``N (1 - 1/k)`` without rounding.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .errors import HorizonExceeded, InfeasibleAtHorizon


@dataclass(frozen=True)
class IndexSet:
    """A subset of {1, 2, ...} in one of three representations.

    Use the constructors :meth:`explicit`, :meth:`from_intervals` and
    :meth:`predicate` rather than instantiating directly.
    """

    kind: str
    elements: tuple[int, ...] = ()
    intervals: tuple[tuple[int, int], ...] = ()
    test: Callable[[int], bool] | None = field(default=None, compare=False)
    horizon: int | None = None
    _starts: tuple[int, ...] = field(default=(), repr=False, compare=False)
    _cum: tuple[int, ...] = field(default=(), repr=False, compare=False)

    @classmethod
    def explicit(cls, elements: Iterable[int]) -> "IndexSet":
        elems = tuple(int(e) for e in elements)
        if any(e < 1 for e in elems):
            raise ValueError("explicit set entries must be >= 1")
        if any(b <= a for a, b in zip(elems, elems[1:])):
            raise ValueError("explicit set must be strictly increasing")
        return cls("explicit", elements=elems)

    @classmethod
    def from_intervals(cls, pairs: Iterable[Sequence[int]], drop_empty: bool = False) -> "IndexSet":
        """Closed integer intervals ``[lo, hi]``, pairwise disjoint.

        With ``drop_empty`` intervals having ``lo > hi`` are discarded, which is
        convenient for families like ``[k^k + 1, (k-1) k^k]`` that are empty
        for small ``k``.
        """
        ivs = []
        for pair in pairs:
            lo, hi = int(pair[0]), int(pair[1])
            if lo > hi:
                if drop_empty:
                    continue
                raise ValueError(f"empty interval [{lo}, {hi}]")
            if lo < 1:
                raise ValueError(f"interval [{lo}, {hi}] reaches below 1")
            ivs.append((lo, hi))
        ivs.sort()
        for (a0, a1), (b0, b1) in zip(ivs, ivs[1:]):
            if b0 <= a1:
                raise ValueError(f"intervals [{a0}, {a1}] and [{b0}, {b1}] overlap")
        cum = [0]
        for lo, hi in ivs:
            cum.append(cum[-1] + hi - lo + 1)
        return cls(
            "intervals",
            intervals=tuple(ivs),
            _starts=tuple(lo for lo, _ in ivs),
            _cum=tuple(cum),
        )

    @classmethod
    def predicate(cls, test: Callable[[int], bool], horizon: int) -> "IndexSet":
        if horizon < 1:
            raise ValueError("predicate horizon must be positive")
        return cls("predicate", test=test, horizon=int(horizon))

    @classmethod
    def empty(cls) -> "IndexSet":
        return cls.explicit(())

    def _check(self, n: int) -> None:
        if self.kind == "predicate" and n > self.horizon:
            raise HorizonExceeded(f"queried {n} beyond predicate horizon {self.horizon}")

    def __contains__(self, n: int) -> bool:
        if n < 1:
            return False
        if self.kind == "explicit":
            i = bisect.bisect_left(self.elements, n)
            return i < len(self.elements) and self.elements[i] == n
        if self.kind == "intervals":
            i = bisect.bisect_right(self._starts, n) - 1
            return i >= 0 and n <= self.intervals[i][1]
        self._check(n)
        return bool(self.test(n))

    def count_leq(self, N: int) -> int:
        """card(A ∩ [1, N])."""
        if N < 1:
            raise ValueError("N must be >= 1")
        if self.kind == "explicit":
            return bisect.bisect_right(self.elements, N)
        if self.kind == "intervals":
            i = bisect.bisect_right(self._starts, N)
            if i == 0:
                return 0
            lo, hi = self.intervals[i - 1]
            return self._cum[i - 1] + min(hi, N) - lo + 1
        self._check(N)
        return sum(1 for n in range(1, N + 1) if self.test(n))

    def members(self, N: int) -> Iterator[int]:
        """Elements of A ∩ [1, N] in increasing order."""
        if self.kind == "explicit":
            yield from self.elements[: bisect.bisect_right(self.elements, N)]
        elif self.kind == "intervals":
            for lo, hi in self.intervals:
                if lo > N:
                    break
                yield from range(lo, min(hi, N) + 1)
        else:
            self._check(N)
            yield from (n for n in range(1, N + 1) if self.test(n))

    def to_intervals(self, N: int | None = None) -> "IndexSet":
        """Interval-union form of A (truncated at ``N`` when given)."""
        if self.kind == "intervals" and N is None:
            return self
        if N is None:
            if self.kind == "predicate":
                N = self.horizon
            else:
                N = self.elements[-1] if self.elements else 1
        return IndexSet.from_intervals(_runs(self.members(N)))

    def complement(self, N: int) -> "IndexSet":
        """[1, N] minus A, in interval-union form."""
        gaps, prev = [], 0
        for lo, hi in self.to_intervals(N).intervals:
            if lo > prev + 1:
                gaps.append((prev + 1, lo - 1))
            prev = hi
        if prev < N:
            gaps.append((prev + 1, N))
        return IndexSet.from_intervals(gaps)

    def to_json(self, N: int | None = None) -> list[list[int]]:
        return [[lo, hi] for lo, hi in self.to_intervals(N).intervals]


def _runs(sorted_ints: Iterable[int]) -> list[tuple[int, int]]:
    runs: list[tuple[int, int]] = []
    for n in sorted_ints:
        if runs and n == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], n)
        else:
            runs.append((n, n))
    return runs


def count_leq(A: IndexSet, N: int) -> int:
    return A.count_leq(N)


@dataclass(frozen=True)
class DensityProfile:
    horizons: tuple[int, ...]
    counts: tuple[int, ...]
    ratios: tuple[Fraction, ...]

    @property
    def upper_estimate(self) -> Fraction:
        """Largest ratio over the supplied horizons (not a limit)."""
        return max(self.ratios)

    @property
    def lower_estimate(self) -> Fraction:
        """Smallest ratio over the supplied horizons (not a limit)."""
        return min(self.ratios)

    def to_json(self) -> dict:
        return {
            "horizons": list(self.horizons),
            "counts": list(self.counts),
            "ratios": [f"{r.numerator}/{r.denominator}" for r in self.ratios],
            "upper_density_estimate": str(self.upper_estimate),
            "lower_density_estimate": str(self.lower_estimate),
            "finite_horizon": True,
        }


def density_profile(A: IndexSet, horizons: Sequence[int]) -> DensityProfile:
    hs = tuple(int(h) for h in horizons)
    if not hs:
        raise ValueError("need at least one horizon")
    if any(b <= a for a, b in zip(hs, hs[1:])):
        raise ValueError("horizons must be strictly increasing")
    counts = tuple(A.count_leq(h) for h in hs)
    return DensityProfile(hs, counts, tuple(Fraction(c, h) for c, h in zip(counts, hs)))


def example_bilateral_set(k_max: int) -> IndexSet:
    """``∪_{k<=k_max} [k^k + 1, (k-1) k^k]``, the density-one set of the bilateral example."""
    return IndexSet.from_intervals(
        ((k**k + 1, (k - 1) * k**k) for k in range(1, k_max + 1)), drop_empty=True
    )


def geometric_horizons(n_max: int, ratio: Fraction = Fraction(3, 2)) -> list[int]:
    """``M_j = ceil(ratio^j)`` for j >= 1, strictly increasing, capped at ``n_max``."""
    out: list[int] = []
    j = 1
    while True:
        m = min(math.ceil(ratio**j), n_max)
        if not out or m > out[-1]:
            out.append(m)
        if m >= n_max:
            return out
        j += 1


@dataclass(frozen=True)
class MergeBlock:
    k: int
    m: int  # index into the horizon sequence, 1-based
    M: int
    window: tuple[int, int]
    card: int
    required: int
    max_value: float | Fraction | None
    strategy: str

    @property
    def conditions_hold(self) -> bool:
        ok_card = self.card >= self.required
        ok_val = self.max_value is None or self.max_value < Fraction(1, self.k)
        return ok_card and ok_val


@dataclass(frozen=True)
class MergeResult:
    index_set: IndexSet
    blocks: tuple[MergeBlock, ...]
    achieved_k: int
    failure: str | None
    horizons: tuple[int, ...]
    n_max: int

    def blocks_as_sets(self) -> list[IndexSet]:
        return [_block_set(self, b) for b in self.blocks]


def _block_set(res: MergeResult, block: MergeBlock) -> IndexSet:
    lo, hi = block.window
    return IndexSet.explicit(n for n in res.index_set.members(hi) if n >= lo)


def merge_density_one(
    values: Sequence[Callable[[int], float | Fraction]],
    n_max: int,
    horizons: Sequence[int] | None = None,
    strategy: str = "proof",
    k_limit: int | None = None,
) -> MergeResult:
    """Inductive construction of a density-one set along which every ``values_i`` vanishes.

    ``values[i-1]`` is the map ``n -> values_i(n)`` on ``[1, n_max]``. With
    ``strategy="proof"`` block ``k >= 2`` is the intersection of the sets
    ``{n <= M : values_i(n) < 1/(2k^2)}`` over ``i <= k``, each required to hold
    at least ``M (1 - 1/(2k^2))`` points, intersected with the window
    ``[M_prev + 1, M]``. With ``strategy="direct"`` block ``k`` is
    ``{n in window : values_i(n) < 1/k for all i <= k}`` accepted when it has
    at least ``M (1 - 1/k)`` points. In both cases ``M`` is the first horizon
    with ``M_prev / M < 1/(2k)`` meeting the cardinality test; the
    construction stops at the first ``k`` for which no such horizon exists.

    Raises :class:`InfeasibleAtHorizon` only if even ``k = 1`` is impossible
    (empty horizon sequence).
    """
    if strategy not in ("proof", "direct"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if not values:
        raise ValueError("need at least one value family")
    Ms = list(horizons) if horizons is not None else geometric_horizons(n_max)
    if not Ms or any(b <= a for a, b in zip(Ms, Ms[1:])) or Ms[-1] > n_max or Ms[0] < 1:
        raise InfeasibleAtHorizon("horizon sequence must be increasing within [1, n_max]")

    table = [[f(n) for n in range(1, n_max + 1)] for f in values]
    members: list[int] = []
    blocks: list[MergeBlock] = []

    # k = 1: m_1 = 1 and A_1 = {n <= M_1 : values_1(n) < 1}; the cardinality bound is 0.
    a1 = [n for n in range(1, Ms[0] + 1) if table[0][n - 1] < 1]
    members.extend(a1)
    blocks.append(
        MergeBlock(1, 1, Ms[0], (1, Ms[0]), len(a1), 0,
                   max((table[0][n - 1] for n in a1), default=None), strategy)
    )
    m_prev = 1
    k = 2
    failure = None
    while k_limit is None or k <= k_limit:
        fam = range(min(k, len(table)))
        level = 2 * k * k if strategy == "proof" else k
        thr = Fraction(1, level)
        good = [all(table[i][n] < thr for i in fam) for n in range(n_max)]
        prefix = [0]
        for g in good:
            prefix.append(prefix[-1] + g)
        per_i = None
        if strategy == "proof":
            per_i = []
            for i in fam:
                pc = [0]
                for n in range(n_max):
                    pc.append(pc[-1] + (table[i][n] < thr))
                per_i.append(pc)

        M_prev = Ms[m_prev - 1]
        chosen = None
        ratio_ok = False
        for j in range(m_prev + 1, len(Ms) + 1):
            M = Ms[j - 1]
            if not Fraction(M_prev, M) < Fraction(1, 2 * k):
                continue
            ratio_ok = True
            if strategy == "proof":
                if all(pc[M] * level >= M * (level - 1) for pc in per_i):
                    chosen = j
                    break
            else:
                card = prefix[M] - prefix[M_prev]
                if card * k >= M * (k - 1):
                    chosen = j
                    break
        if chosen is None:
            why = "cardinality" if ratio_ok else f"M_prev/M < 1/{2 * k}"
            failure = f"no horizon M <= {n_max} satisfies the {why} condition for k = {k}"
            break
        M = Ms[chosen - 1]
        block = [n for n in range(M_prev + 1, M + 1) if good[n - 1]]
        members.extend(block)
        blocks.append(
            MergeBlock(
                k, chosen, M, (M_prev + 1, M), len(block), -(-M * (k - 1) // k),
                max((table[i][n - 1] for n in block for i in fam), default=None), strategy,
            )
        )
        m_prev = chosen
        k += 1

    return MergeResult(
        IndexSet.explicit(members), tuple(blocks), blocks[-1].k, failure, tuple(Ms), n_max
    )
