"""Verification of finite witness certificates for distributionally chaotic shifts.

A certificate lists blocks ``(k, N_k, S_k, C_k)`` and an ``epsilon``. Block
``k`` passes when

    card{1 <= n <= N_k : sum_j |C_j| v_{j-n} / sum_j |C_j| v_j >= k} >= N_k * epsilon

(``v_{j+n}`` for forward shifts). For bilateral backward shifts and for
forward shifts the vanishing condition along a density-one set is probed as
well. Everything is finite-horizon: a passing certificate says the witness
inequalities hold at the listed horizons, nothing about limits.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .density import IndexSet
from .errors import DomainMismatch
from .shifts import (
    EXACT_MAX,
    ShiftOperator,
    SimpleFunction,
    _support,
    count_at_least,
    near_zero_profile,
    orbit_norm_p,
    ratio_sequence,
    resolve_backend,
)
from .weights import BACKWARD, BILATERAL, FORWARD, UNILATERAL, WeightSequence

# horizon for the vanishing-condition probe when the certificate's own horizons are shorter
NEAR_ZERO_HORIZON = 4 * 5**5


@dataclass(frozen=True)
class Block:
    k: int
    N: int
    S: tuple[int, ...] | range
    C: tuple | None = None  # None means all ones

    def __post_init__(self):
        if self.k < 1 or self.N < 1:
            raise ValueError("k and N must be positive")
        if not self.S:
            raise ValueError(f"block k={self.k} has empty support")
        if self.C is not None and len(self.C) != len(self.S):
            raise ValueError(f"block k={self.k}: coefficients and support differ in length")
        if self.C is not None and any(c == 0 for c in self.C):
            raise ValueError(f"block k={self.k}: coefficients must be nonzero")

    @classmethod
    def interval(cls, k: int, N: int, lo: int, hi: int) -> "Block":
        return cls(k, N, range(lo, hi + 1))


@dataclass(frozen=True)
class Certificate:
    epsilon: Fraction
    blocks: tuple[Block, ...]
    density_one_set: IndexSet | None = field(default=None, compare=False)

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if not 0 < eps <= 1:
            raise ValueError("epsilon must lie in (0, 1]")
        if not self.blocks:
            raise ValueError("certificate has no blocks")
        ks = [b.k for b in self.blocks]
        Ns = [b.N for b in self.blocks]
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValueError("blocks must be strictly increasing in k")
        if any(b <= a for a, b in zip(Ns, Ns[1:])):
            raise ValueError("horizons N_k must be increasing")

    def scaled(self, factor) -> "Certificate":
        """Same certificate with every coefficient multiplied by ``factor``."""
        blocks = tuple(
            Block(b.k, b.N, b.S, tuple(c * factor for c in (b.C or (1,) * len(b.S))))
            for b in self.blocks
        )
        return Certificate(self.epsilon, blocks, self.density_one_set)


@dataclass(frozen=True)
class BlockVerdict:
    k: int
    N: int
    count: int
    required: int
    witness_ns: tuple[int, ...]
    backend: str
    near_ties: int = 0
    trivially_true: bool = False

    @property
    def passed(self) -> bool:
        return self.count >= self.required

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "N": self.N,
            "count": self.count,
            "required": self.required,
            "pass": self.passed,
            "witness_ns": list(self.witness_ns),
            "backend": self.backend,
            "near_ties": self.near_ties,
            "trivially_true": self.trivially_true,
        }


@dataclass(frozen=True)
class Verdict:
    blocks: tuple[BlockVerdict, ...]
    vanishing_required: bool
    vanishing: tuple | None
    vanishing_passed: bool | None
    kind: str
    side: str

    @property
    def passed(self) -> bool:
        ok = all(b.passed for b in self.blocks)
        if self.vanishing_required:
            ok = ok and bool(self.vanishing_passed)
        return ok

    def to_json(self) -> dict:
        doc = {
            "pass": self.passed,
            "kind": self.kind,
            "side": self.side,
            "finite_horizon": True,
            "blocks": [b.to_json() for b in self.blocks],
        }
        if self.vanishing_required:
            doc["condition_i"] = {
                "pass": bool(self.vanishing_passed),
                "levels": [lv.to_json() for lv in self.vanishing],
            }
        return doc


def required_count(N: int, eps: Fraction) -> int:
    """ceil(N * eps) computed exactly."""
    return math.ceil(Fraction(N) * Fraction(eps))


def verify_block(
    op: ShiftOperator, block: Block, eps: Fraction, backend: str = "auto", exact_max: int = EXACT_MAX
) -> BlockVerdict:
    req = required_count(block.N, eps)
    tc = count_at_least(op, block.S, block.C, block.N, block.k, backend, exact_max)
    return BlockVerdict(
        block.k, block.N, tc.count, req, tc.witness_ns, tc.backend, tc.near_ties,
        # at k = 1 the bound N (1 - 1/k) is zero whatever epsilon says
        trivially_true=(req == 0 or block.k == 1),
    )


def vanishing_required(kind: str, side: str) -> bool:
    return kind == FORWARD or side == BILATERAL


def verify_certificate(
    v: WeightSequence,
    kind: str,
    cert: Certificate,
    backend: str = "auto",
    exact_max: int = EXACT_MAX,
    workers: int = 1,
    near_zero_horizon: int = NEAR_ZERO_HORIZON,
) -> Verdict:
    """Check every block; probe the vanishing condition when the theorem variant needs it.

    The vanishing probe asks, for each level ``2 <= k <= max block k``, for
    some ``N`` up to ``max(largest N_k, near_zero_horizon)`` with
    ``card{n <= N : u_n < 1/k} >= N (1 - 1/k)``, counting only ``n`` in the
    certificate's density-one set when one is supplied.
    """
    op = ShiftOperator(kind, v)
    for b in cert.blocks:
        bad = [j for j in (min(b.S), max(b.S)) if not v.in_domain(j)]
        if bad:
            raise DomainMismatch(f"block k={b.k}: indices {bad[:5]} outside the {v.side} domain")
        # fail fast on an exact request that cannot be honoured
        resolve_backend(op, _support(b.S, b.C), b.N, backend, exact_max)

    def one(b):
        return verify_block(op, b, cert.epsilon, backend, exact_max)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            verdicts = tuple(pool.map(one, cert.blocks))
    else:
        verdicts = tuple(one(b) for b in cert.blocks)

    need = vanishing_required(kind, v.side)
    levels = None
    van_ok = None
    if need:
        horizon = max(max(b.N for b in cert.blocks), near_zero_horizon)
        k_top = max(2, max(b.k for b in cert.blocks))
        levels = tuple(near_zero_profile(op, k_top, horizon, cert.density_one_set))
        van_ok = all(lv.achieved for lv in levels[1:])
    return Verdict(verdicts, need, levels, van_ok, kind, v.side)


# ---------------------------------------------------------------- the harmonic example

EXACT_K_MAX = 3
FLOAT_K_MAX = 6


def example_horizon(k: int) -> int:
    return 2 * k * (2 * k) ** k


def example_certificate(k_range: Sequence[int], backend: str = "float") -> Certificate:
    """Blocks ``N_k = 2k (2k)^k``, ``S_k = [(2k)^k + 1, 2k (2k)^k]``, ``C = 1``.

    ``epsilon = 1 - 1/min(k)`` capped at 1/2; for ``min(k) = 1`` the bound is
    zero and the block is trivially true, and epsilon falls back to 1/2.
    """
    ks = sorted(set(int(k) for k in k_range))
    if not ks or ks[0] < 1:
        raise ValueError("k_range must contain positive integers")
    cap = EXACT_K_MAX if backend == "exact" else FLOAT_K_MAX
    if ks[-1] > cap:
        raise ValueError(f"k = {ks[-1]} infeasible for the {backend} backend (max {cap})")
    base = 1 - Fraction(1, ks[0])
    eps = min(base, Fraction(1, 2)) if base > 0 else Fraction(1, 2)
    blocks = tuple(
        Block.interval(k, example_horizon(k), (2 * k) ** k + 1, example_horizon(k)) for k in ks
    )
    return Certificate(eps, blocks)


def example_witness_range(k: int) -> tuple[int, int]:
    """``[(2k)^k + 1, (2k-1)(2k)^k]``, where every ratio is at least ``k``."""
    return (2 * k) ** k + 1, (2 * k - 1) * (2 * k) ** k


def irregular_norm_family(
    v: WeightSequence, kind: str, cert: Certificate, p=1
) -> list[Callable[[int], float]]:
    """``n -> ||T^n y_k||`` for ``y_k = z_k / (k^{1/p} ||z_k||)``, ``z_k = sum_{j in S_k} C_j^{1/p} 1_{j}``.

    Then ``||T^n y_k||^p = ratio_n / k``, so the norm is at least 1 wherever
    the block ratio reaches ``k``.
    """
    op = ShiftOperator(kind, v)
    out = []
    for b in cert.blocks:
        rs = ratio_sequence(op, b.S, b.C, b.N, backend="float")
        k = b.k

        def norm(n, rs=rs, k=k):
            if n == 0:
                return (1.0 / k) ** (1.0 / p)
            return (float(rs[n - 1]) / k) ** (1.0 / p)

        out.append(norm)
    return out


# ---------------------------------------------------------------- DCC probe


@dataclass(frozen=True)
class DCCReport:
    a_windows: tuple  # (lo, hi, tail_max, tolerance, ok)
    a_holds: bool
    b_checks: tuple  # (k, N_k, count, required, ok)
    b_holds: bool

    def to_json(self) -> dict:
        return {
            "a": {"holds": self.a_holds, "windows": [list(w) for w in self.a_windows]},
            "b": {"holds": self.b_holds, "checks": [list(c) for c in self.b_checks]},
            "finite_horizon": True,
        }


def dcc_probe(
    norms_x: Sequence[Callable[[int], float]],
    A: IndexSet,
    norms_y: Sequence[Callable[[int], float]],
    eps,
    horizons: Sequence[int],
    tolerances: Sequence[float] | None = None,
) -> DCCReport:
    """Finite-horizon probe of the two-part criterion.

    (a) For window ``m`` = ``A ∩ (H_{m-1}, H_m]`` the largest norm among
    ``x_1 .. x_m`` must not exceed ``tolerances[m-1]`` (default ``1/(m+1)``).
    (b) For each ``k``, ``card{1 <= j <= N_k : ||T^j y_k|| > eps} >= N_k eps``.
    """
    hs = list(horizons)
    if any(b <= a for a, b in zip(hs, hs[1:])):
        raise ValueError("horizons must be increasing")
    tols = list(tolerances) if tolerances is not None else [1.0 / (m + 1) for m in range(1, len(hs) + 1)]
    windows = []
    prev = 0
    for m, H in enumerate(hs, start=1):
        fam = norms_x[: min(m, len(norms_x))]
        tail = 0.0
        for n in A.members(H):
            if n <= prev:
                continue
            for f in fam:
                tail = max(tail, float(f(n)))
        windows.append((prev + 1, H, tail, tols[m - 1], tail <= tols[m - 1]))
        prev = H
    eps_q = Fraction(eps) if not isinstance(eps, float) else Fraction(eps).limit_denominator(10**12)
    checks = []
    for k, (g, N) in enumerate(zip(norms_y, hs), start=1):
        cnt = sum(1 for j in range(1, N + 1) if g(j) > float(eps))
        req = required_count(N, eps_q)
        checks.append((k, N, cnt, req, cnt >= req))
    return DCCReport(
        tuple(windows), all(w[-1] for w in windows), tuple(checks), all(c[-1] for c in checks)
    )


# ---------------------------------------------------------------- pair statistics


@dataclass(frozen=True)
class PairStats:
    epsilon: float
    delta: float
    horizon: int
    below_delta_count: int
    below_epsilon_count: int
    F_lower_estimate: Fraction
    F_upper_estimate: Fraction

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "delta": self.delta,
            "horizon": self.horizon,
            "below_delta_count": self.below_delta_count,
            "below_epsilon_count": self.below_epsilon_count,
            "F_lower_estimate": str(self.F_lower_estimate),
            "F_upper_estimate": str(self.F_upper_estimate),
            "finite_horizon": True,
        }


def pair_stats(diff: Callable[[int], float], eps, delta, N: int, horizons: Sequence[int] | None = None) -> PairStats:
    """Counts of ``n <= N`` with ``diff(n) < delta`` and ``diff(n) < eps``.

    The lower-density estimate for ``{diff < eps}`` is the minimum ratio over
    ``horizons`` (default ``[N]``); the upper-density estimate for
    ``{diff < delta}`` is the maximum.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    hs = sorted(set(horizons)) if horizons else [N]
    if hs[-1] > N:
        raise ValueError("horizons must not exceed N")
    d = [diff(n) for n in range(1, N + 1)]
    lo_ratios, hi_ratios = [], []
    ce = cd = 0
    it = iter(hs)
    nxt = next(it)
    for n, x in enumerate(d, start=1):
        ce += x < eps
        cd += x < delta
        if n == nxt:
            lo_ratios.append(Fraction(ce, n))
            hi_ratios.append(Fraction(cd, n))
            nxt = next(it, None)
    return PairStats(eps, delta, N, cd, ce, min(lo_ratios), max(hi_ratios))


# ---------------------------------------------------------------- p-independence


def p_independence_report(
    v: WeightSequence,
    kind: str,
    cert: Certificate,
    ps: Sequence[float],
    backend: str = "auto",
    spot_ns: Sequence[int] | None = None,
) -> dict:
    """One verification (ratios are p-free) reported per ``p``, plus norm spot checks.

    For each ``p`` and block the simple function ``s = sum_j |C_j|^{1/p} 1_{j}``
    satisfies ``||T^n s||^p / ||s||^p = ratio_n``; a few ``n`` are evaluated
    through :func:`orbit_norm_p` and compared with the ratio.
    """
    verdict = verify_certificate(v, kind, cert, backend)
    op = ShiftOperator(kind, v)
    per_p = []
    for p in ps:
        spots = []
        for b in cert.blocks:
            rs = ratio_sequence(op, b.S, b.C, b.N, backend="float")
            mods = [abs(complex(c)) for c in (b.C or (1,) * len(b.S))]
            s = SimpleFunction({j: m ** (1.0 / float(p)) for j, m in zip(b.S, mods)})
            base = orbit_norm_p(op, s, 0, p, exact=False)
            ns = spot_ns or sorted({1, b.N // 3 or 1, b.N // 2 or 1, b.N})
            for n in ns:
                lhs = orbit_norm_p(op, s, n, p, exact=False) / base
                r = float(rs[n - 1])
                err = abs(lhs - r) / max(abs(r), 1e-300)
                spots.append({"k": b.k, "n": n, "norm_ratio": lhs, "ratio": r, "rel_err": err})
        per_p.append({"p": p, "pass": verdict.passed, "spot_checks": spots})
    return {
        "pass": verdict.passed,
        "verdict": verdict.to_json(),
        "per_p": per_p,
        "identical": len({e["pass"] for e in per_p}) <= 1,
    }


def certificate_from_json(doc: Mapping) -> Certificate:
    """Certificate document (already schema-validated) to :class:`Certificate`."""
    blocks = []
    for bd in doc["blocks"]:
        if len(bd["S"]) == 1:
            S = range(bd["S"][0][0], bd["S"][0][1] + 1)
        else:
            S = []
            for lo, hi in bd["S"]:
                S.extend(range(lo, hi + 1))
            S = tuple(S)
        C = bd.get("C", "ones")
        if C == "ones":
            coeffs = None
        else:
            coeffs = tuple(complex(re, im) if im else Fraction(re) if isinstance(re, int) else re for re, im in C)
        blocks.append(Block(bd["k"], bd["N"], S, coeffs))
    dset = doc.get("density_one_set")
    return Certificate(
        Fraction(doc["epsilon"]),
        tuple(blocks),
        IndexSet.from_intervals(dset) if dset else None,
    )


def certificate_to_json(cert: Certificate) -> dict:
    blocks = []
    for b in cert.blocks:
        runs = []
        if isinstance(b.S, range):
            runs.append([b.S[0], b.S[-1]])
        for j in () if isinstance(b.S, range) else sorted(b.S):
            if runs and j == runs[-1][1] + 1:
                runs[-1][1] = j
            else:
                runs.append([j, j])
        entry = {"k": b.k, "N": b.N, "S": runs}
        entry["C"] = "ones" if b.C is None else [[complex(c).real, complex(c).imag] for c in b.C]
        blocks.append(entry)
    doc = {"epsilon": f"{cert.epsilon.numerator}/{cert.epsilon.denominator}", "blocks": blocks}
    if cert.density_one_set is not None:
        doc["density_one_set"] = cert.density_one_set.to_json()
    return doc
