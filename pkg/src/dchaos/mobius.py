"""Disk automorphisms acting on the unit circle.

Classification into identity/elliptic/parabolic/hyperbolic, iteration through
the conjugated normal form, arc preimages and their normalized Lebesgue
measure, and the parabolic and hyperbolic growth estimates behind the
chaos verdict for composition operators ``f -> f o phi`` on ``L^p(T)``.

Angles are radians. An :class:`Arc` runs counterclockwise from ``start`` for
``length``; its normalized measure is ``length / 2pi``.

Parabolic computations use the level coordinate ``L(z) = Im sigma(z) =
cot(Delta/2)``, ``Delta = theta(z) - theta(alpha)`` taken in ``(0, 2pi)``,
with ``sigma(z) = (alpha + z)/(alpha - z)``. The map acts on levels by
``L -> L + b``, so preimage arcs come from shifting both endpoint levels,
with no repeated complex evaluation.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import (
    DChaosError,
    HypothesisViolated,
    NotAnAutomorphism,
    NumericallyDegenerate,
    ResolutionExceeded,
)

TAU = 2 * math.pi
ANGLE_FLOOR = 1e-14  # thinner mapped arcs are clamped and flagged
RESOLUTION = 1e-13  # witness construction refuses strips below this length
UNIT_TOL = 1e-10
TRACE_TOL = 1e-9
POLE_TOL = 2e-15  # a few ulps: the multiplier itself carries rounding

IDENTITY = "identity"
ELLIPTIC = "elliptic"
PARABOLIC = "parabolic"
HYPERBOLIC = "hyperbolic"


class _Infinity:
    """The point at infinity of the Riemann sphere."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"


INF = _Infinity()


def is_inf(z) -> bool:
    return z is INF


def angle(z: complex) -> float:
    """Argument in ``[0, 2pi)``."""
    t = math.atan2(z.imag, z.real)
    return t + TAU if t < 0 else t


def wrap(t: float) -> float:
    t = math.fmod(t, TAU)
    if t < 0:
        t += TAU
    return 0.0 if t >= TAU else t


def unit(t: float) -> complex:
    return complex(math.cos(t), math.sin(t))


# ---------------------------------------------------------------- arcs


@dataclass(frozen=True)
class Arc:
    start: float
    length: float
    degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not 0 < self.length <= TAU:
            raise ValueError(f"arc length {self.length} outside (0, 2pi]")
        object.__setattr__(self, "start", wrap(self.start))

    @classmethod
    def full(cls) -> "Arc":
        return cls(0.0, TAU)

    @classmethod
    def centered(cls, mid: float, measure: float) -> "Arc":
        """Arc of normalized measure ``measure`` with midpoint angle ``mid``."""
        return cls(mid - measure * math.pi, measure * TAU)

    @property
    def end(self) -> float:
        return self.start + self.length

    @property
    def measure(self) -> float:
        return self.length / TAU

    @property
    def normalized_measure(self) -> float:
        return self.measure

    @property
    def midpoint(self) -> float:
        return wrap(self.start + self.length / 2)

    def offset(self, t: float) -> float:
        """Counterclockwise distance from ``start`` to angle ``t``."""
        return wrap(t - self.start)

    def contains(self, t: float, tol: float = 0.0) -> bool:
        if self.length >= TAU:
            return True
        d = self.offset(t)
        return d <= self.length + tol or d >= TAU - tol

    def contains_arc(self, other: "Arc", tol: float = 1e-15) -> bool:
        if self.length >= TAU:
            return True
        d = self.offset(other.start)
        if d > TAU - tol:
            d -= TAU
        return d >= -tol and d + other.length <= self.length + tol

    def complement(self) -> "Arc":
        if self.length >= TAU:
            raise ValueError("the full circle has empty complement")
        return Arc(self.end, TAU - self.length)

    def to_json(self) -> dict:
        return {"start": self.start, "length": self.length, "measure": self.measure}


# ---------------------------------------------------------------- maps


@dataclass(frozen=True)
class AutomorphismClass:
    kind: str
    fixed_points: tuple
    multiplier: float | complex | None = None  # lambda (hyperbolic) or rotation factor (elliptic)
    translation: float | None = None  # b (parabolic)
    interior_fixed_point: complex | None = None
    alpha: complex | None = None  # attractive fixed point on T
    beta: complex | None = None  # repulsive fixed point on T

    @property
    def alpha_angle(self) -> float:
        return angle(self.alpha)

    @property
    def beta_angle(self) -> float:
        return angle(self.beta)

    def to_json(self) -> dict:
        def c(z):
            return None if z is None else [z.real, z.imag]

        doc = {"kind": self.kind, "fixed_points": [c(z) for z in self.fixed_points]}
        if self.kind == HYPERBOLIC:
            doc.update(multiplier=self.multiplier, alpha=c(self.alpha), beta=c(self.beta))
        elif self.kind == PARABOLIC:
            doc.update(translation=self.translation, alpha=c(self.alpha))
        elif self.kind == ELLIPTIC:
            doc.update(
                interior_fixed_point=c(self.interior_fixed_point),
                rotation_angle=angle(self.multiplier),
            )
        return doc


class MobiusMap:
    """``z -> (a z + b)/(c z + d)``, stored normalized to determinant 1."""

    __slots__ = ("a", "b", "c", "d", "is_disk_automorphism", "_cls")

    def __init__(self, a, b, c, d, check: bool = True):
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        det = a * d - b * c
        if det == 0 or not cmath.isfinite(det):
            raise ValueError("Mobius coefficients must have nonzero determinant")
        s = cmath.sqrt(det)
        self.a, self.b, self.c, self.d = a / s, b / s, c / s, d / s
        self._cls = None
        self.is_disk_automorphism = self._preserves_disk() if check else True

    # constructors

    @classmethod
    def rotation(cls, theta: float) -> "MobiusMap":
        return cls(unit(theta), 0, 0, 1)

    @classmethod
    def hyperbolic(cls, alpha_angle: float, beta_angle: float, lam: float) -> "MobiusMap":
        """``sigma^{-1}(lam sigma(z))`` with ``sigma(z) = (alpha - z)/(beta - z)``."""
        if not 0 < lam < 1:
            raise ValueError("lambda must lie in (0, 1)")
        al, be = unit(alpha_angle), unit(beta_angle)
        if abs(al - be) < UNIT_TOL:
            raise ValueError("hyperbolic fixed points must be distinct")
        s = ((-1, al), (-1, be))
        si = ((be, -al), (1, -1))
        return cls(*_flat(_mul(_mul(si, ((lam, 0), (0, 1))), s)))

    @classmethod
    def parabolic(cls, alpha_angle: float, b: float) -> "MobiusMap":
        """``sigma^{-1}(sigma(z) + b i)`` with ``sigma(z) = (alpha + z)/(alpha - z)``."""
        if b == 0 or not math.isfinite(b):
            raise ValueError("parabolic translation b must be a nonzero real")
        al = unit(alpha_angle)
        s = ((1, al), (-1, al))
        si = ((al, -al), (1, 1))
        return cls(*_flat(_mul(_mul(si, ((1, 1j * b), (0, 1))), s)))

    @classmethod
    def from_json(cls, doc: Mapping) -> "MobiusMap":
        if "normal_form" in doc:
            nf = doc["normal_form"]
            kind = nf["kind"]
            if kind == HYPERBOLIC:
                return cls.hyperbolic(nf["alpha_angle"], nf["beta_angle"], nf["lambda"])
            if kind == PARABOLIC:
                return cls.parabolic(nf["alpha_angle"], nf["b"])
            if kind == "rotation":
                return cls.rotation(nf["angle"])
            raise ValueError(f"unknown normal form {kind!r}")
        return cls(*(complex(*doc[k]) for k in "abcd"))

    # algebra

    def __call__(self, z):
        return _apply((self.a, self.b, self.c, self.d), z)

    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def inverse(self) -> "MobiusMap":
        inv = MobiusMap(self.d, -self.b, -self.c, self.a, check=False)
        inv.is_disk_automorphism = self.is_disk_automorphism
        return inv

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """``self o other``."""
        return MobiusMap(*_flat(_mul(self.matrix(), other.matrix())))

    def derivative(self, z: complex) -> complex:
        w = self.c * z + self.d
        if w == 0:
            return INF
        return 1 / (w * w)

    def trace_ratio(self) -> float:
        """``tr^2 / det``; real for disk automorphisms."""
        t = self.a + self.d
        return (t * t).real

    def _preserves_disk(self) -> bool:
        for j in range(16):
            w = self(unit(TAU * j / 16 + 0.1))
            if is_inf(w) or abs(abs(w) - 1) > UNIT_TOL:
                return False
        w0 = self(0j)
        return not is_inf(w0) and abs(w0) < 1

    def classification(self) -> AutomorphismClass:
        if self._cls is None:
            self._cls = classify(self)
        return self._cls

    def __repr__(self):
        return f"MobiusMap(a={self.a:.6g}, b={self.b:.6g}, c={self.c:.6g}, d={self.d:.6g})"


def _mul(m, n):
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _flat(m):
    return m[0][0], m[0][1], m[1][0], m[1][1]


def _apply(coef, z):
    a, b, c, d = coef
    if is_inf(z):
        return INF if c == 0 else a / c
    den = c * z + d
    if den == 0:
        return INF
    return (a * z + b) / den


# ---------------------------------------------------------------- classification


def classify(phi: MobiusMap) -> AutomorphismClass:
    """Fixed points located by solving ``c z^2 + (d - a) z - b = 0``, cross-checked by the trace."""
    if not phi.is_disk_automorphism:
        raise NotAnAutomorphism(f"{phi!r} does not preserve the unit disk")
    a, b, c, d = phi.a, phi.b, phi.c, phi.d
    if abs(b) < 1e-15 and abs(c) < 1e-15:
        if abs(a - d) < 1e-15:
            return AutomorphismClass(IDENTITY, ())
        # z -> (a/d) z: a rotation about 0, located exactly; the trace test
        # cannot separate tiny rotations from the identity
        return AutomorphismClass(ELLIPTIC, (0j,), multiplier=a / d, interior_fixed_point=0j)
    tr = phi.trace_ratio()
    by_trace = PARABOLIC if abs(tr - 4) <= TRACE_TOL else (HYPERBOLIC if tr > 4 else ELLIPTIC)

    if abs(c) < 1e-15:
        # z -> (a/d) z + b/d ; a disk automorphism of this shape is a rotation about 0
        roots = (0j,)
        double = False
    else:
        disc = (a - d) ** 2 + 4 * b * c  # equals tr^2 - 4 after normalization
        if abs(disc) <= TRACE_TOL:
            roots = ((a - d) / (2 * c),)
            double = True
        else:
            s = cmath.sqrt(disc)
            roots = (((a - d) + s) / (2 * c), ((a - d) - s) / (2 * c))
            double = False

    inside = [z for z in roots if abs(z) < 1 - UNIT_TOL]
    on_t = [z for z in roots if abs(abs(z) - 1) <= 1e-8]
    if inside:
        by_location = ELLIPTIC
    elif double and on_t:
        by_location = PARABOLIC
    elif len(on_t) == 2:
        by_location = PARABOLIC if abs(on_t[0] - on_t[1]) < 1e-10 else HYPERBOLIC
    else:
        raise NumericallyDegenerate(f"fixed points {roots} fit no automorphism class")
    if by_location != by_trace:
        raise NumericallyDegenerate(
            f"fixed-point location says {by_location} but trace^2/det = {tr!r} says {by_trace}"
        )

    if by_location == ELLIPTIC:
        p = inside[0]
        return AutomorphismClass(
            ELLIPTIC, tuple(roots), multiplier=phi.derivative(p), interior_fixed_point=p
        )
    if by_location == PARABOLIC:
        al = on_t[0] / abs(on_t[0])
        w = phi(-al)  # sigma(-alpha) = 0, so sigma(phi(-alpha)) = b i
        s = (al + w) / (al - w)
        return AutomorphismClass(PARABOLIC, (al,), translation=s.imag, alpha=al, beta=al)
    z0, z1 = (z / abs(z) for z in on_t)
    d0, d1 = abs(phi.derivative(z0)), abs(phi.derivative(z1))
    al, be, lam = (z0, z1, d0) if d0 < d1 else (z1, z0, d1)
    return AutomorphismClass(HYPERBOLIC, (al, be), multiplier=lam, alpha=al, beta=be)


# ---------------------------------------------------------------- iteration


def iterate(phi: MobiusMap, n: int, z):
    """``phi^n(z)`` for any integer ``n``; the conjugated normal form is used when available."""
    n = int(n)
    if n == 0:
        return z
    try:
        cl = phi.classification()
    except DChaosError:
        cl = None
    if cl is None:
        return _apply(_flat(_matpow(phi.matrix(), n)), z)
    if cl.kind == IDENTITY:
        return z
    if cl.kind == HYPERBOLIC:
        al, be = cl.alpha, cl.beta
        if is_inf(z):
            w = complex(1)
        elif z == be:
            return be
        else:
            w = (al - z) / (be - z)
        w = w * cl.multiplier**n
        # within rounding of the pole
        return (w * be - al) / (w - 1) if abs(w - 1) > POLE_TOL else INF
    if cl.kind == PARABOLIC:
        al = cl.alpha
        if is_inf(z):
            w = complex(-1)
        elif z == al:
            return al
        else:
            w = (al + z) / (al - z)
        w = w + 1j * n * cl.translation
        return al * (w - 1) / (w + 1) if abs(w + 1) > POLE_TOL else INF
    # elliptic: sigma(z) = (z - p)/(1 - conj(p) z) sends p to 0
    p = cl.interior_fixed_point
    if is_inf(z):
        w = -1 / p.conjugate() if p != 0 else INF
    else:
        den = 1 - p.conjugate() * z
        w = INF if den == 0 else (z - p) / den
    if is_inf(w):
        return INF if p == 0 else 1 / p.conjugate()
    w = w * cl.multiplier**n
    den = 1 + p.conjugate() * w
    return INF if den == 0 else (w + p) / den


def _matpow(m, n):
    if n < 0:
        (a, b), (c, d) = m
        m = ((d, -b), (-c, a))
        n = -n
    r = ((1, 0), (0, 1))
    while n:
        if n & 1:
            r = _mul(r, m)
        m = _mul(m, m)
        n >>= 1
    return r


def iterate_matrix(phi: MobiusMap, n: int, z):
    """Plain matrix-power evaluation, kept as an independent reference."""
    return _apply(_flat(_matpow(phi.matrix(), int(n))), z)


# ---------------------------------------------------------------- Cayley level


def cayley_imaginary(alpha: complex, z: complex) -> float:
    """``Im((alpha + z)/(alpha - z)) = sin(D)/(1 - cos(D)) = cot(D/2)``, ``D = theta(z) - theta(alpha)``.

    Evaluated as ``2 Im((z - alpha) conj(alpha)) / |z - alpha|^2``, the same
    ratio with both parts free of cancellation near ``alpha``.
    """
    d = complex(z) - complex(alpha)
    den = d.real * d.real + d.imag * d.imag
    if den == 0.0:
        return math.inf
    return 2 * (d * complex(alpha).conjugate()).imag / den


def level_of(alpha_angle: float, theta: float) -> float:
    delta = wrap(theta - alpha_angle)
    return math.inf if delta == 0.0 else 1.0 / math.tan(delta / 2)


def angle_of_level(alpha_angle: float, L: float) -> float:
    """Offset ``Delta in [0, 2pi]`` with ``cot(Delta/2) = L``; ``+inf -> 0``, ``-inf -> 2pi``."""
    if L == math.inf:
        return 0.0
    if L == -math.inf:
        return TAU
    return 2 * math.atan2(1.0, L)


def arc_between_levels(alpha_angle: float, L_hi: float, L_lo: float) -> Arc:
    """Arc of points whose level lies in ``[L_lo, L_hi]`` (``L_hi > L_lo``)."""
    if not L_hi > L_lo:
        raise ValueError("levels must satisfy L_hi > L_lo")
    lo = angle_of_level(alpha_angle, L_hi)
    return Arc(alpha_angle + lo, _level_gap(L_hi, L_lo))


def _level_gap(L_hi: float, L_lo: float) -> float:
    """Angle between the points at levels ``L_hi > L_lo``."""
    if L_hi == math.inf:
        return angle_of_level(0.0, L_lo)
    if L_lo == -math.inf:
        return TAU - angle_of_level(0.0, L_hi)
    # 2 atan(1/L_lo) - 2 atan(1/L_hi) through the subtraction formula
    return 2 * math.atan2(L_hi - L_lo, 1 + L_hi * L_lo)


@dataclass(frozen=True)
class Parabolic:
    """Parabolic data ``(theta(alpha), b)`` with ``b > 0``; ``reflected`` records a conjugation by ``z -> conj(z)``."""

    alpha_angle: float
    b: float
    reflected: bool = False

    @classmethod
    def of(cls, x) -> "Parabolic":
        if isinstance(x, Parabolic):
            return x
        if isinstance(x, MobiusMap):
            x = x.classification()
        if isinstance(x, AutomorphismClass):
            if x.kind != PARABOLIC:
                raise HypothesisViolated(f"parabolic map required, got {x.kind}")
            t, b = x.alpha_angle, x.translation
        else:
            t, b = x
        if b > 0:
            return cls(wrap(t), float(b))
        # conj(sigma(conj z)) for the reflected alpha flips the sign of the translation
        return cls(wrap(-t), -float(b), True)

    @property
    def ceil_inv_b(self) -> int:
        return math.ceil(1 / self.b)

    def map(self) -> MobiusMap:
        return MobiusMap.parabolic(self.alpha_angle, self.b)


def _parabolic_preimage(alpha_angle: float, b: float, n: int, arc: Arc) -> tuple[float, float]:
    """``(start, length)`` of ``phi^{-n}(arc)`` via level shifts ``L -> L - n b``."""
    if arc.length >= TAU:
        return 0.0, TAU
    d0 = wrap(arc.start - alpha_angle)
    d1 = d0 + arc.length
    shift = n * b
    if d1 > TAU:
        # the arc straddles alpha, which is fixed: keep it whole by mapping the complement
        s, ln = _parabolic_preimage(alpha_angle, b, n, arc.complement())
        return s + ln, TAU - ln
    L0 = math.inf if d0 == 0 else 1 / math.tan(d0 / 2)
    L1 = -math.inf if d1 >= TAU else 1 / math.tan(d1 / 2)
    L0s, L1s = L0 - shift, L1 - shift
    start = alpha_angle + angle_of_level(0.0, L0s)
    if L0 == math.inf or L1 == -math.inf:
        return start, _level_gap(L0s, L1s)
    return start, 2 * math.atan2(L0 - L1, 1 + L0s * L1s)


def arc_preimage(phi: MobiusMap, n: int, I: Arc) -> Arc:
    """``phi^{-n}(I)`` as an arc.

    Endpoints are pulled back by ``phi^{-n}``; of the two arcs joining them,
    the one containing the pulled-back midpoint is returned. Parabolic maps
    use the level coordinate instead. Results thinner than ``ANGLE_FLOOR``
    come back clamped with ``degenerate=True``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0 or I.length >= TAU:
        return I
    cl = phi.classification()
    if cl.kind == IDENTITY:
        return I
    if cl.kind == PARABOLIC:
        pd = Parabolic.of(cl)
        if pd.reflected:
            s, ln = _parabolic_preimage(pd.alpha_angle, pd.b, n, Arc(-I.end, I.length))
            s = -(s + ln)
        else:
            s, ln = _parabolic_preimage(pd.alpha_angle, pd.b, n, I)
        return _clamped(s, ln)
    a0 = angle(iterate(phi, -n, unit(I.start)))
    a1 = angle(iterate(phi, -n, unit(I.end)))
    am = angle(iterate(phi, -n, unit(I.start + I.length / 2)))
    ccw = wrap(a1 - a0)
    if ccw == 0.0:
        # endpoints merged: either a sliver or everything but a sliver
        return _clamped(a0, ANGLE_FLOOR) if I.length < math.pi else _clamped(a0, TAU - ANGLE_FLOOR)
    if wrap(am - a0) <= ccw:
        return _clamped(a0, ccw)
    return _clamped(a1, TAU - ccw)


def _clamped(start: float, length: float) -> Arc:
    if length < ANGLE_FLOOR:
        return Arc(start, ANGLE_FLOOR, degenerate=True)
    return Arc(start, min(length, TAU))


def arc_image(phi: MobiusMap, n: int, I: Arc) -> Arc:
    """``phi^n(I) = (phi^{-1})^{-n}(I)``."""
    return arc_preimage(phi.inverse(), n, I)


# ---------------------------------------------------------------- parabolic machinery


@dataclass(frozen=True)
class DerivativeCheck:
    derivative: float
    bound: float
    level: float

    @property
    def holds(self) -> bool:
        return self.derivative > self.bound


def circle_derivative(data, z: complex) -> DerivativeCheck:
    """``d theta(y) / d theta(z)`` for ``y = phi^{-1}(z)`` and the lower bound ``L/(L - b)``.

    With ``L = Im sigma(z)`` the derivative is
    ``(1 - cos(theta(y) - theta(alpha)))/(1 - cos(theta(z) - theta(alpha)))
    = (1 + L^2)/(1 + (L - b)^2)``. Requires ``L >= b + 1``.
    """
    pd = Parabolic.of(data)
    zz = z.conjugate() if pd.reflected else z
    L = level_of(pd.alpha_angle, angle(zz))
    if L == math.inf:
        raise HypothesisViolated("z coincides with the fixed point")
    if L < pd.b + 1:
        raise HypothesisViolated(f"Im sigma(z) = {L:.6g} < b + 1 = {pd.b + 1:.6g}")
    Ly = L - pd.b
    der = (1 + L * L) / (1 + Ly * Ly)
    bound = L / Ly
    if not der > bound:
        raise NumericallyDegenerate(f"derivative {der!r} does not exceed bound {bound!r}")
    return DerivativeCheck(der, bound, L)


def angle_map_inverse(data, theta: float) -> float:
    """``theta(phi^{-1}(e^{i theta}))`` through levels, measured from ``theta(alpha)``."""
    pd = Parabolic.of(data)
    L = level_of(pd.alpha_angle, theta)
    return pd.alpha_angle + angle_of_level(0.0, L - pd.b)


def strip_range_min(data) -> int:
    return 2 + Parabolic.of(data).ceil_inv_b


def parabolic_strips(data, j: int) -> Arc:
    """Arc ``T_j`` whose levels fill ``[(j-1) b, j b)``."""
    pd = Parabolic.of(data)
    if j < strip_range_min(pd):
        raise ValueError(f"strip index j = {j} below 2 + ceil(1/b) = {strip_range_min(pd)}")
    arc = arc_between_levels(pd.alpha_angle, j * pd.b, (j - 1) * pd.b)
    if pd.reflected:
        arc = Arc(-arc.end, arc.length)
    return arc


def _strip_length(b: float, j: int) -> float:
    return 2 * math.atan2(b, 1 + (j - 1) * j * b * b)


@dataclass(frozen=True)
class GrowthRow:
    k: int
    measure: float
    ratio: float
    bound: float
    step_ratio: float | None
    step_bound: float | None

    @property
    def holds(self) -> bool:
        ok = self.ratio >= self.bound * (1 - 1e-12)
        if self.step_ratio is not None:
            ok = ok and self.step_ratio >= self.step_bound * (1 - 1e-12)
        return ok


@dataclass(frozen=True)
class GrowthReport:
    j: int
    b: float
    base_measure: float
    rows: tuple[GrowthRow, ...]

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.rows)

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "b": self.b,
            "base_measure": self.base_measure,
            "holds": self.holds,
            "rows": [
                {"k": r.k, "measure": r.measure, "ratio": r.ratio, "bound": r.bound, "holds": r.holds}
                for r in self.rows
            ],
        }


def growth_bound_check(data, j: int, B: Arc | None = None, k_range: Sequence[int] | None = None) -> GrowthReport:
    """``mu(phi^{-k}(B)) >= j/(j-k) mu(B)`` and the one-step recursion, for ``B`` inside ``T_j``."""
    pd = Parabolic.of(data)
    T = parabolic_strips(pd, j)
    if B is None:
        B = T
    elif not T.contains_arc(B, tol=1e-15):
        raise HypothesisViolated(f"arc {B} is not contained in strip T_{j}")
    top = j - 1 - pd.ceil_inv_b
    ks = list(range(0, top + 1)) if k_range is None else sorted(set(int(k) for k in k_range))
    if ks and (ks[0] < 0 or ks[-1] > top):
        raise ValueError(f"k must lie in [0, {top}] for j = {j}")
    phi = pd.map()
    base = B.measure
    if pd.reflected:
        B = Arc(-B.end, B.length)
    rows = []
    prev = None
    for k in ks:
        m = arc_preimage(phi, k, B).measure if k else base
        step = step_b = None
        if k >= 1:
            pm = prev[1] if prev is not None and prev[0] == k - 1 else (
                arc_preimage(phi, k - 1, B).measure if k > 1 else base
            )
            step = m / pm
            step_b = (j - k + 1) / (j - k)
        rows.append(GrowthRow(k, m, m / base, j / (j - k), step, step_b))
        prev = (k, m)
    return GrowthReport(j, pd.b, base, tuple(rows))


@dataclass(frozen=True)
class WitnessTable:
    i: int
    n_i: int
    p: float
    b: float
    strip_measure: float
    norm_p: float
    rows: tuple  # (k, ratio, chain_bound, log_bound_over_ln_i, holds)

    @property
    def holds(self) -> bool:
        return all(r[-1] for r in self.rows)

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "n_i": self.n_i,
            "p": self.p,
            "b": self.b,
            "strip_measure": self.strip_measure,
            "norm_p": self.norm_p,
            "holds": self.holds,
            "rows": [
                {"k": k, "ratio": r, "bound": cb, "bound_ln_i": lb, "holds": h}
                for k, r, cb, lb, h in self.rows
            ],
        }


def unboundedness_witness(data, i: int, p: float = 1.0, ks: Sequence[int] | None = None) -> WitnessTable:
    """Norm table for ``f_i = sum_{j=n_i}^{i n_i} j^{-1/p} 1_{B_j}``, ``n_i = 2^i``.

    Each ``B_j`` is the sub-arc of ``T_j`` nearest ``alpha`` with measure
    ``M_i = mu(T_{i n_i + 2 + ceil(1/b)})``. Returned ratios are
    ``||T^k f_i||^p / ||f_i||^p``; the bound checked is the chain
    ``M_i (ln(i n_i - k) - ln(1 + ceil(1/b))) / ||f_i||^p``, and also the
    same log difference divided by ``ln i`` in place of the exact norm.
    """
    if isinstance(data, MobiusMap) and data.classification().kind != PARABOLIC:
        raise HypothesisViolated("unboundedness witness is defined for parabolic maps only")
    if isinstance(data, AutomorphismClass) and data.kind != PARABOLIC:
        raise HypothesisViolated("unboundedness witness is defined for parabolic maps only")
    pd = Parabolic.of(data)
    if i < 1 or p < 1:
        raise ValueError("need i >= 1 and p >= 1")
    c = pd.ceil_inv_b
    n_i = 2**i
    top = i * n_i
    first = max(n_i, 2 + c)
    M_len = _strip_length(pd.b, top + 2 + c)
    if M_len < RESOLUTION:
        raise ResolutionExceeded(f"strip T_{top + 2 + c} has length {M_len:.3g} < {RESOLUTION}")
    M = M_len / TAU
    phi = pd.map()
    arcs = {}
    for j in range(first, top + 1):
        lo = angle_of_level(0.0, j * pd.b)
        arcs[j] = Arc(pd.alpha_angle + lo, M_len)
    norm = math.fsum(M / j for j in arcs)
    if ks is None:
        ks = [0] + list(range(n_i, max((i - 1) * n_i, n_i + 1)))
    rows = []
    for k in ks:
        if k == 0:
            rows.append((0, 1.0, 1.0, None, True))
            continue
        tot = math.fsum(arc_preimage(phi, k, B).measure / j for j, B in arcs.items())
        ratio = tot / norm
        span = top - k
        chain = M * (math.log(span) - math.log(1 + c)) / norm if span > 0 else 0.0
        ln_i = (math.log(span) - math.log(1 + c)) / math.log(i) if span > 0 and i > 1 else None
        ok = ratio >= chain * (1 - 1e-12) and (ln_i is None or ratio >= ln_i * (1 - 1e-12))
        rows.append((k, ratio, chain, ln_i, ok))
    return WitnessTable(i, n_i, p, pd.b, M, norm, tuple(rows))


# ---------------------------------------------------------------- hyperbolic growth


@dataclass(frozen=True)
class HyperbolicGrowth:
    lam: float
    M: float
    eps0: float
    delta: float
    n: int
    measures: tuple[float, ...]

    @property
    def holds(self) -> bool:
        m0 = self.measures[0]
        return all(m >= self.M**k * m0 * (1 - 1e-12) for k, m in enumerate(self.measures))

    def to_json(self) -> dict:
        return {
            "lambda": self.lam,
            "M": self.M,
            "eps0": self.eps0,
            "delta": self.delta,
            "n": self.n,
            "measures": list(self.measures),
            "holds": self.holds,
        }


def hyperbolic_growth_check(phi: MobiusMap, n: int = 10) -> HyperbolicGrowth:
    """``mu(phi^{-k}(B)) >= M^k mu(B)`` for ``k <= n`` on a small arc ``B`` centred at ``alpha``.

    ``M = (1 + lambda)/(2 lambda)``. ``eps0`` is the largest measure (halving
    from 1/2) on which ``|(phi^{-1})'| > M`` at sampled points, and ``B`` is
    shrunk until ``phi^{-k}(B)`` stays inside ``I(alpha, eps0)`` for ``k <= n``.
    """
    cl = phi.classification()
    if cl.kind != HYPERBOLIC:
        raise HypothesisViolated(f"hyperbolic map required, got {cl.kind}")
    lam = cl.multiplier
    M = (1 + lam) / (2 * lam)
    inv = phi.inverse()
    ta = cl.alpha_angle

    def expanding(meas):
        return all(
            abs(inv.derivative(unit(ta + s * meas * math.pi))) > M for s in (-1, -0.5, 0.0, 0.5, 1)
        )

    eps0 = 0.5
    while not expanding(eps0):
        eps0 /= 2
        if eps0 < 1e-12:
            raise NumericallyDegenerate("no expanding neighbourhood found")
    outer = Arc.centered(ta, eps0)
    delta = eps0
    while True:
        B = Arc.centered(ta, delta)
        pre = [arc_preimage(phi, k, B) for k in range(n + 1)]
        if all(outer.contains_arc(a, tol=1e-15) for a in pre):
            break
        delta /= 2
        if delta * TAU < RESOLUTION:
            raise ResolutionExceeded("arc around alpha shrank below resolution")
    return HyperbolicGrowth(lam, M, eps0, delta, n, tuple(a.measure for a in pre))


# ---------------------------------------------------------------- verdict


def _measures(phi, arc, horizon, forward):
    f = arc_image if forward else arc_preimage
    return [f(phi, n, arc).measure for n in range(horizon + 1)]


def ddc_verdict(phi: MobiusMap, horizon: int = 30, ks: Sequence[int] = (1, 2, 3), workers: int = 1) -> dict:
    """Verdict ``kind in {parabolic, hyperbolic}`` with supporting evidence.

    Evidence for boundary-fixed-point maps lists ``mu(phi^{-n}(C_k))`` for
    ``C_k = T minus I(beta, 1/2k)`` and, for hyperbolic maps, the images
    ``mu(phi^n(C_k))`` (the family that actually decays there), plus the
    growth witness. Elliptic and identity maps report the constant orbit
    norms of indicator functions under the rotation conjugate.
    """
    cl = phi.classification()
    verdict = cl.kind in (PARABOLIC, HYPERBOLIC)
    ev: dict = {"classification": cl.to_json(), "horizon": horizon, "finite_horizon": True}
    if verdict:
        fams = [("preimages_of_complement_of_beta_arc", False)]
        if cl.kind == HYPERBOLIC:
            fams.append(("images_of_complement_of_beta_arc", True))
        jobs = [(name, fw, k) for name, fw in fams for k in ks]

        def run(job):
            name, fw, k = job
            return _measures(phi, Arc.centered(cl.beta_angle, 1 / (2 * k)).complement(), horizon, fw)

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(run, jobs))
        else:
            results = [run(j) for j in jobs]
        for (name, _, k), ms in zip(jobs, results):
            ev.setdefault(name, []).append({"k": k, "measures": ms})
        if cl.kind == PARABOLIC:
            ev["decaying_family"] = "preimages_of_complement_of_beta_arc"
            ev["growth"] = growth_bound_check(cl, 20).to_json()
        else:
            ev["decaying_family"] = "images_of_complement_of_beta_arc"
            ev["growth"] = hyperbolic_growth_check(phi).to_json()
    else:
        if cl.kind == ELLIPTIC:
            rot = MobiusMap.rotation(angle(cl.multiplier))
        else:
            rot = MobiusMap.rotation(0.0)
        probe = Arc(0.0, math.pi / 2)
        ev["rotation_orbit_norms"] = _measures(rot, probe, horizon, False)
    return {"verdict": verdict, "kind": cl.kind, "evidence": ev}
