"""Weight sequences over N or Z, viewed as point masses ``mu({j}) = v_j``.

Values come back as :class:`~fractions.Fraction` when the generator is rational
(harmonic, the piecewise bilateral example, rational tables, conversions with
rational moduli and integer exponent), otherwise as floats computed in the log
domain. Unilateral weights return 0 at indices ``<= 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .errors import DomainMismatch, MissingWeightIndex

Number = Union[int, Fraction, float]

UNILATERAL = "unilateral"
BILATERAL = "bilateral"
BACKWARD = "backward"
FORWARD = "forward"

NEG_INF = float("-inf")
EULER_GAMMA = 0.57721566490153286061


def _check_side(side: str) -> None:
    if side not in (UNILATERAL, BILATERAL):
        raise ValueError(f"side must be 'unilateral' or 'bilateral', got {side!r}")


def _check_kind(kind: str) -> None:
    if kind not in (BACKWARD, FORWARD):
        raise ValueError(f"kind must be 'backward' or 'forward', got {kind!r}")


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class Generator:
    """Closed-form or tabulated weight values on the generator's own domain."""

    exact = True
    sides: tuple[str, ...] = (UNILATERAL, BILATERAL)

    def value(self, n: int) -> Number:
        raise NotImplementedError

    def log_value(self, n: int) -> float:
        v = self.value(n)
        return math.log(v) if v > 0 else NEG_INF

    def float_values(self, lo: int, hi: int) -> np.ndarray:
        return np.array([float(self.value(n)) for n in range(lo, hi + 1)], dtype=np.float64)

    def log_values(self, lo: int, hi: int) -> np.ndarray:
        return np.array([self.log_value(n) for n in range(lo, hi + 1)], dtype=np.float64)

    def to_json(self) -> dict:
        raise NotImplementedError


class Harmonic(Generator):
    """``v_n = 1/n`` for ``n >= 1``."""

    sides = (UNILATERAL,)
    _TABLE_SIZE = 1 << 16

    def value(self, n):
        if n < 1:
            raise DomainMismatch(f"harmonic weight undefined at {n}")
        return Fraction(1, n)

    def log_value(self, n):
        if n < 1:
            raise DomainMismatch(f"harmonic weight undefined at {n}")
        return -math.log(n)

    def float_values(self, lo, hi):
        if lo < 1:
            raise DomainMismatch(f"harmonic weight undefined at {lo}")
        return 1.0 / np.arange(lo, hi + 1, dtype=np.float64)

    def log_values(self, lo, hi):
        if lo < 1:
            raise DomainMismatch(f"harmonic weight undefined at {lo}")
        return -np.log(np.arange(lo, hi + 1, dtype=np.float64))

    def partial_sums(self, ms: np.ndarray) -> np.ndarray:
        """``H_m = sum_{i<=m} 1/i`` for each entry (``H_m = 0`` for ``m <= 0``).

        Tabulated below 2^16; asymptotic expansion above, where the truncation
        error is below 1e-40.
        """
        table = _harmonic_table(self._TABLE_SIZE)
        ms = np.asarray(ms, dtype=np.int64)
        out = np.zeros(ms.shape, dtype=np.float64)
        small = (ms > 0) & (ms < self._TABLE_SIZE)
        out[small] = table[ms[small]]
        big = ms >= self._TABLE_SIZE
        if big.any():
            m = ms[big].astype(np.float64)
            inv2 = 1.0 / (m * m)
            out[big] = (
                np.log(m) + EULER_GAMMA + 0.5 / m
                - inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 / 252))
            )
        return out

    def to_json(self):
        return {"kind": "harmonic"}


_HARMONIC_CACHE: dict[int, np.ndarray] = {}


def _harmonic_table(size: int) -> np.ndarray:
    tab = _HARMONIC_CACHE.get(size)
    if tab is None:
        tab = np.zeros(size, dtype=np.float64)
        partial = 0.0
        comp = 0.0
        for m in range(1, size):
            # Kahan-compensated running sum
            y = 1.0 / m - comp
            t = partial + y
            comp = (t - partial) - y
            partial = t
            tab[m] = partial
        _HARMONIC_CACHE[size] = tab
    return tab


def _example_nk(k: int) -> int:
    return k**k


class PiecewiseBilateral(Generator):
    """The bilateral example weight.

    ``v_n = 1/n`` for ``n >= 1``, ``v_0 = 1``, and for ``m = -n >= 1``:
    ``v_n = 1/k`` when ``k^k + 1 < m <= (k-1) k^k`` for some ``k >= 2``,
    ``v_n = 1`` otherwise.
    """

    sides = (BILATERAL,)

    @staticmethod
    def branch(n: int) -> tuple[str, int | None]:
        """Which defining branch covers index ``n``: positive, zero, inverse_k or unit."""
        if n >= 1:
            return ("positive", None)
        if n == 0:
            return ("zero", None)
        m = -n
        k = 2
        while (k - 1) * _example_nk(k) < m:
            k += 1
        if _example_nk(k) + 1 < m:
            return ("inverse_k", k)
        return ("unit", None)

    def value(self, n):
        br, k = self.branch(n)
        if br == "positive":
            return Fraction(1, n)
        if br == "inverse_k":
            return Fraction(1, k)
        return Fraction(1)

    def float_values(self, lo, hi):
        out = np.ones(hi - lo + 1, dtype=np.float64)
        if hi >= 1:
            start = max(lo, 1)
            out[start - lo:] = 1.0 / np.arange(start, hi + 1, dtype=np.float64)
        if lo <= -1:
            m_max = -lo
            k = 2
            while _example_nk(k) + 2 <= m_max:
                a, b = _example_nk(k) + 2, min((k - 1) * _example_nk(k), m_max)
                if a <= b:
                    # indices n = -b .. -a
                    n_lo, n_hi = max(-b, lo), min(-a, hi)
                    if n_lo <= n_hi:
                        out[n_lo - lo:n_hi - lo + 1] = 1.0 / k
                k += 1
        return out

    def log_values(self, lo, hi):
        return np.log(self.float_values(lo, hi))

    def to_json(self):
        return {"kind": "piecewise_bilateral"}


class Table(Generator):
    """Explicit values ``v_{offset + t} = values[t]`` with an optional fill outside."""

    def __init__(self, offset: int, values: Sequence[Number], fill: Number | None = None):
        self.offset = int(offset)
        self.values = tuple(Fraction(v) if isinstance(v, str) else v for v in values)
        self.fill = Fraction(fill) if isinstance(fill, str) else fill
        for v in self.values + ((self.fill,) if self.fill is not None else ()):
            if not v > 0:
                raise ValueError(f"weight values must be positive, got {v}")
        self.exact = all(_is_rational(v) for v in self.values) and (
            self.fill is None or _is_rational(self.fill)
        )

    def value(self, n):
        t = n - self.offset
        if 0 <= t < len(self.values):
            return self.values[t]
        if self.fill is None:
            raise MissingWeightIndex(n)
        return self.fill

    def to_json(self):
        d = {"kind": "table", "offset": self.offset, "values": [str(v) for v in self.values]}
        if self.fill is not None:
            d["fill"] = str(self.fill)
        return d


class Mirrored(Generator):
    """``v'_n = v_{-n}`` for a bilateral base weight."""

    sides = (BILATERAL,)

    def __init__(self, base: "WeightSequence"):
        if base.side != BILATERAL:
            raise DomainMismatch("only bilateral weights can be mirrored")
        self.base = base
        self.exact = base.exact

    def value(self, n):
        return self.base.value(-n)

    def log_value(self, n):
        return self.base.log_value(-n)

    def float_values(self, lo, hi):
        return self.base.float_values(-hi, -lo)[::-1].copy()

    def log_values(self, lo, hi):
        return self.base.log_values(-hi, -lo)[::-1].copy()

    def to_json(self):
        return {"kind": "mirrored", "base": self.base.to_json()}


@dataclass(frozen=True)
class ShiftWeightData:
    """Nonzero scalars ``w_n`` of a weighted shift, as a table or a closed form."""

    w: Mapping[int, complex | Number] | Callable[[int], complex | Number]
    bound: float | None = None

    def __call__(self, i: int):
        if callable(self.w):
            x = self.w(i)
        else:
            try:
                x = self.w[i]
            except KeyError:
                raise MissingWeightIndex(i) from None
        if x == 0:
            raise ValueError(f"weighted-shift entry w_{i} is zero")
        if self.bound is not None and abs(x) > self.bound:
            raise ValueError(f"|w_{i}| = {abs(x)} exceeds bound {self.bound}")
        return x

    @property
    def rational(self) -> bool:
        if callable(self.w):
            return False
        return all(_is_rational(x) for x in self.w.values())


class Converted(Generator):
    """Weight of the unweighted shift equivalent to a weighted shift.

    Backward: ``v_n = prod_{i=1}^n |w_i|^{-p}`` (n >= 1), ``v_0 = 1``,
    ``v_n = prod_{i=n+1}^0 |w_i|^p`` (n <= -1). Forward flips both exponents.
    """

    def __init__(self, data: ShiftWeightData, p: Number, kind: str):
        _check_kind(kind)
        self.data = data
        self.p = Fraction(p) if isinstance(p, (int, str)) else p
        if not self.p >= 1:
            raise ValueError("p must be >= 1")
        self.kind = kind
        self.exact = data.rational and _is_rational(self.p) and Fraction(self.p).denominator == 1

    def _sign(self) -> int:
        # exponent applied to |w_i| for indices 1..n
        return -1 if self.kind == BACKWARD else 1

    def value(self, n):
        if not self.exact:
            return math.exp(self.log_value(n))
        p = int(self.p)
        s = self._sign()
        acc = Fraction(1)
        if n >= 1:
            for i in range(1, n + 1):
                acc *= Fraction(abs(self.data(i))) ** (s * p)
        elif n <= -1:
            for i in range(n + 1, 1):
                acc *= Fraction(abs(self.data(i))) ** (-s * p)
        return acc

    def log_value(self, n):
        s = self._sign()
        p = float(self.p)
        if n >= 1:
            return s * p * math.fsum(math.log(abs(self.data(i))) for i in range(1, n + 1))
        if n <= -1:
            return -s * p * math.fsum(math.log(abs(self.data(i))) for i in range(n + 1, 1))
        return 0.0

    def log_values(self, lo, hi):
        s = self._sign()
        p = float(self.p)
        out = np.zeros(hi - lo + 1, dtype=np.float64)
        if hi >= 1:
            logs = np.array([math.log(abs(self.data(i))) for i in range(1, hi + 1)])
            cum = s * p * np.cumsum(logs)
            start = max(lo, 1)
            out[start - lo:] = cum[start - 1:]
        if lo <= -1:
            # v_n for n <= -1 uses indices n+1 .. 0
            logs = np.array([math.log(abs(self.data(i))) for i in range(lo + 1, 1)])
            cum = -s * p * np.cumsum(logs[::-1])  # cum[t] covers indices -t .. 0, i.e. n = -t-1
            end = min(hi, -1)
            ns = np.arange(lo, end + 1)
            out[: end - lo + 1] = cum[-ns - 1]
        return out

    def float_values(self, lo, hi):
        if self.exact and hi - lo < 4096:
            return np.array([float(self.value(n)) for n in range(lo, hi + 1)])
        return np.exp(self.log_values(lo, hi))

    def to_json(self):
        if callable(self.data.w):
            raise TypeError("closed-form weighted-shift data is not serializable")
        keys = sorted(self.data.w)
        offset = keys[0] if keys else 0
        vals = [self.data.w[i] for i in range(offset, offset + len(keys))]
        return {
            "kind": "weighted_shift",
            "w": {"offset": offset, "values": [str(v) for v in vals]},
            "p": str(self.p),
            "shift": self.kind,
        }


@dataclass(frozen=True)
class WeightSequence:
    side: str
    generator: Generator = field(compare=False)

    def __post_init__(self):
        _check_side(self.side)
        if self.side not in self.generator.sides:
            raise DomainMismatch(
                f"{type(self.generator).__name__} weight is not defined as {self.side}"
            )

    # constructors for the shipped generators
    @classmethod
    def harmonic(cls) -> "WeightSequence":
        return cls(UNILATERAL, Harmonic())

    @classmethod
    def piecewise_bilateral(cls) -> "WeightSequence":
        return cls(BILATERAL, PiecewiseBilateral())

    @classmethod
    def constant(cls, c: Number = 1, side: str = BILATERAL) -> "WeightSequence":
        return cls(side, Table(0, (), fill=c))

    @classmethod
    def table(cls, side: str, offset: int, values: Sequence[Number], fill=None) -> "WeightSequence":
        return cls(side, Table(offset, values, fill))

    def mirrored(self) -> "WeightSequence":
        if isinstance(self.generator, Mirrored):
            return self.generator.base
        return WeightSequence(BILATERAL, Mirrored(self))

    @property
    def exact(self) -> bool:
        return self.generator.exact

    def in_domain(self, n: int) -> bool:
        return self.side == BILATERAL or n >= 1

    def value(self, n: int) -> Number:
        if not self.in_domain(n):
            return Fraction(0) if self.exact else 0.0
        return self.generator.value(n)

    def log_value(self, n: int) -> float:
        if not self.in_domain(n):
            return NEG_INF
        return self.generator.log_value(n)

    def float_values(self, lo: int, hi: int) -> np.ndarray:
        """``[v_lo, ..., v_hi]`` as float64, zeros outside the domain."""
        out = np.zeros(hi - lo + 1, dtype=np.float64)
        a = lo if self.side == BILATERAL else max(lo, 1)
        if a <= hi:
            out[a - lo:] = self.generator.float_values(a, hi)
        return out

    def log_values(self, lo: int, hi: int) -> np.ndarray:
        out = np.full(hi - lo + 1, NEG_INF)
        a = lo if self.side == BILATERAL else max(lo, 1)
        if a <= hi:
            out[a - lo:] = self.generator.log_values(a, hi)
        return out

    def exact_values(self, lo: int, hi: int) -> list[Fraction]:
        if not self.exact:
            raise TypeError("weight has no exact rational values")
        return [Fraction(self.value(n)) for n in range(lo, hi + 1)]

    def to_json(self) -> dict:
        return {"side": self.side, "generator": self.generator.to_json()}


def value(v: WeightSequence, n: int) -> Number:
    return v.value(n)


def log_value(v: WeightSequence, n: int) -> float:
    return v.log_value(n)


def from_weighted_shift(w: ShiftWeightData, p: Number, kind: str, side: str) -> WeightSequence:
    """Weighted-space weight ``v`` equivalent to the weighted shift with scalars ``w``."""
    return WeightSequence(side, Converted(w, p, kind))


@dataclass(frozen=True)
class BoundProbe:
    """Finite-range probe of ``sup v_n/v_{n+1}`` (backward) or ``sup v_{n+1}/v_n`` (forward)."""

    bound: Number
    witness: int
    probe_range: tuple[int, int]
    finite_range_probe: bool = True


def shift_bounded(v: WeightSequence, kind: str, probe_range: tuple[int, int]) -> BoundProbe:
    _check_kind(kind)
    lo, hi = probe_range
    if v.side == UNILATERAL:
        lo = max(lo, 1)
    if lo > hi:
        raise ValueError("empty probe range")
    if v.exact and hi - lo <= 200_000:
        vals = v.exact_values(lo, hi + 1)
        best, arg = None, lo
        for t in range(hi - lo + 1):
            a, b = vals[t], vals[t + 1]
            r = a / b if kind == BACKWARD else b / a
            if best is None or r > best:
                best, arg = r, lo + t
        return BoundProbe(best, arg, (lo, hi))
    logs = v.log_values(lo, hi + 1)
    diff = logs[:-1] - logs[1:] if kind == BACKWARD else logs[1:] - logs[:-1]
    t = int(np.argmax(diff))
    return BoundProbe(float(np.exp(diff[t])), lo + t, (lo, hi))


def weight_from_json(doc: Mapping) -> WeightSequence:
    """Build a weight from the weight-spec document (already schema-validated)."""
    side = doc["side"]
    gen = doc["generator"]
    kind = gen["kind"]
    if kind == "harmonic":
        return WeightSequence(side, Harmonic())
    if kind == "piecewise_bilateral":
        return WeightSequence(side, PiecewiseBilateral())
    if kind == "table":
        return WeightSequence(
            side, Table(gen["offset"], [Fraction(s) for s in gen["values"]], gen.get("fill"))
        )
    if kind == "mirrored":
        base = weight_from_json(gen["base"])
        return WeightSequence(side, Mirrored(base))
    if kind == "weighted_shift":
        tab = gen["w"]
        entries = {tab["offset"] + t: Fraction(s) for t, s in enumerate(tab["values"])}
        return WeightSequence(
            side, Converted(ShiftWeightData(entries), Fraction(gen["p"]), gen.get("shift", BACKWARD))
        )
    raise ValueError(f"unknown generator kind {kind!r}")
