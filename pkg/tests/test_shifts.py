import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dchaos.errors import BackendOverflow, DomainMismatch
from dchaos.shifts import (
    ShiftOperator,
    SimpleFunction,
    count_at_least,
    log_orbit_norm_p,
    near_zero_profile,
    orbit_norm_p,
    preimage_mass,
    ratio_sequence,
    shift_function,
)
from dchaos.weights import ShiftWeightData, WeightSequence, from_weighted_shift
from oracles import brute_orbit_norms, harmonic, piecewise_weight

H = WeightSequence.harmonic()
PB = WeightSequence.piecewise_bilateral()
ONE = WeightSequence.constant(1)


def test_preimage_mass_harmonic():
    assert preimage_mass(ShiftOperator("backward", H), 10, 3) == Fraction(1, 7)


def test_preimage_mass_leaves_domain():
    assert preimage_mass(ShiftOperator("backward", H), 5, 7) == 0


def test_preimage_mass_identity_and_forward():
    for op in (ShiftOperator("backward", PB), ShiftOperator("forward", H)):
        assert preimage_mass(op, 9, 0) == op.weight.value(9)
    assert preimage_mass(ShiftOperator("forward", H), 10, 3) == Fraction(1, 13)
    assert preimage_mass(ShiftOperator("backward", PB), 1, 30) == Fraction(1, 3)


def test_orbit_norm_examples():
    op = ShiftOperator("backward", H)
    assert orbit_norm_p(op, SimpleFunction({10: 1}), 3) == Fraction(1, 7)
    f = SimpleFunction.indicator(range(17, 65))
    assert orbit_norm_p(op, f, 17) == harmonic(47)
    g = SimpleFunction({3: Fraction(-2), 8: 5})
    assert orbit_norm_p(op, g, 0, p=2) == 4 * Fraction(1, 3) + 25 * Fraction(1, 8)


def test_orbit_norm_rejects_out_of_domain_support():
    with pytest.raises(DomainMismatch):
        orbit_norm_p(ShiftOperator("backward", H), SimpleFunction({0: 1}), 1)


# ---------------------------------------------------------------- oracle equivalence

CONFIGS = [
    ("backward", "unilateral"),
    ("forward", "unilateral"),
    ("backward", "bilateral"),
    ("forward", "bilateral"),
]


def _random_function(rng, side):
    lo, hi = (1, 200) if side == "unilateral" else (-100, 100)
    size = rng.randint(1, 8)
    coeffs = {}
    for j in rng.sample(range(lo, hi + 1), size):
        r = rng.random()
        if r < 0.5:
            coeffs[j] = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
        elif r < 0.8:
            coeffs[j] = complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) or 1.0
        else:
            coeffs[j] = rng.randint(1, 5)
    return coeffs


def _random_bilateral_weight(rng):
    if rng.random() < 0.5:
        return PB, piecewise_weight
    vals = [Fraction(rng.randint(1, 40), rng.randint(1, 40)) for _ in range(401)]
    w = WeightSequence.table("bilateral", -200, vals, fill=1)
    return w, w.value


def test_orbit_norm_oracle_equivalence():
    rng = random.Random(20240611)
    ps = (1, 2, 3)
    worst = 0.0
    exact_checked = 0
    for t in range(200):
        kind, side = CONFIGS[t % 4]
        if side == "unilateral":
            weight, wfun = H, (lambda i: Fraction(1, i))
        else:
            weight, wfun = _random_bilateral_weight(rng)
        coeffs = _random_function(rng, side)
        op = ShiftOperator(kind, weight)
        f = SimpleFunction(coeffs)
        brute = brute_orbit_norms(wfun, side == "unilateral", kind, coeffs, 50, ps)
        rational = f.rational
        exact = brute_orbit_norms(wfun, side == "unilateral", kind, coeffs, 50, ps, exact=True) if rational else None
        for n in range(51):
            for p in ps:
                got = orbit_norm_p(op, f, n, p, exact=False)
                want = brute[n, p]
                if want == 0:
                    assert got == 0
                else:
                    worst = max(worst, abs(got - want) / want)
                if rational:
                    assert orbit_norm_p(op, f, n, p) == exact[n, p]
                    exact_checked += 1
    assert worst <= 1e-12
    assert exact_checked > 0


@given(
    st.sampled_from(CONFIGS),
    st.dictionaries(st.integers(1, 60), st.fractions(Fraction(-5), Fraction(5)).filter(bool), min_size=1, max_size=6),
    st.integers(0, 30),
    st.integers(0, 30),
    st.sampled_from([1, 2, 3]),
)
def test_semigroup(config, coeffs, m, n, p):
    kind, side = config
    op = ShiftOperator(kind, H if side == "unilateral" else PB)
    f = SimpleFunction(coeffs)
    moved = shift_function(op, f, m)
    whole = orbit_norm_p(op, f, m + n, p)
    if moved is None:
        assert whole == 0
    else:
        assert whole == orbit_norm_p(op, moved, n, p)


@given(st.dictionaries(st.integers(-80, 80), st.integers(1, 9), min_size=1, max_size=5), st.integers(0, 40))
def test_log_orbit_norm_matches(coeffs, n):
    op = ShiftOperator("backward", PB)
    f = SimpleFunction(coeffs)
    assert log_orbit_norm_p(op, f, n, 2) == pytest.approx(math.log(orbit_norm_p(op, f, n, 2)), abs=1e-12)


def test_log_orbit_norm_huge_range():
    w = from_weighted_shift(ShiftWeightData(lambda i: 2), 1, "backward", "bilateral")
    op = ShiftOperator("forward", w)
    f = SimpleFunction({0: 1})
    # v_2000 = 2^-2000 underflows, its logarithm does not
    assert orbit_norm_p(op, f, 2000, exact=False) == 0.0
    assert log_orbit_norm_p(op, f, 2000) == pytest.approx(-2000 * math.log(2), rel=1e-12)


# ---------------------------------------------------------------- ratio sequences


def test_ratio_spot_value_exact():
    r = ratio_sequence(ShiftOperator("backward", H), range(17, 65), None, 64, backend="exact")
    assert len(r) == 64
    assert r[16] == harmonic(47) / (harmonic(64) - harmonic(16))
    assert r[16] >= 2


def test_ratio_float_agrees_with_exact():
    op = ShiftOperator("backward", H)
    ex = ratio_sequence(op, range(217, 1297), None, 1296, backend="exact")
    fl = ratio_sequence(op, range(217, 1297), None, 1296, backend="float")
    for a, b in zip(ex, fl):
        assert b == pytest.approx(float(a), rel=1e-12, abs=0)


def test_ratio_singleton_leaves_domain():
    r = ratio_sequence(ShiftOperator("backward", H), [3], [1], 5)
    assert r[3:] == [0, 0]


@pytest.mark.parametrize("kind", ["backward", "forward"])
@pytest.mark.parametrize("backend", ["exact", "float"])
def test_constant_weight_ratio_is_one(kind, backend):
    r = ratio_sequence(ShiftOperator(kind, ONE), [-4, 2, 9], [1, Fraction(3, 2), 7], 40, backend=backend)
    assert all(x == 1 for x in r)


def test_phases_are_discarded():
    op = ShiftOperator("backward", PB)
    a = ratio_sequence(op, [-3, 5, 40], [1j, -1, complex(0, -2)], 60)
    b = ratio_sequence(op, [-3, 5, 40], [1, 1, 2], 60)
    np.testing.assert_allclose(a, [float(x) for x in b], rtol=1e-13)


@given(
    st.lists(st.integers(-60, 60), min_size=1, max_size=6, unique=True),
    st.data(),
    st.fractions(Fraction(1, 100), Fraction(100)),
)
def test_ratio_scale_invariance(S, data, factor):
    C = data.draw(st.lists(st.fractions(Fraction(1, 9), Fraction(9)), min_size=len(S), max_size=len(S)))
    op = ShiftOperator("backward", PB)
    a = ratio_sequence(op, sorted(S), [c for _, c in sorted(zip(S, C))], 80)
    b = ratio_sequence(op, sorted(S), [c * factor for _, c in sorted(zip(S, C))], 80)
    assert a == b
    for k in (1, 2, 3):
        assert {n for n, x in enumerate(a) if x >= k} == {n for n, x in enumerate(b) if x >= k}


@given(
    st.lists(st.integers(-120, 120), min_size=1, max_size=7, unique=True),
    st.sampled_from(["backward", "forward"]),
)
def test_float_matches_exact_general_support(S, kind):
    op = ShiftOperator(kind, PB)
    S = sorted(S)
    C = [Fraction(i % 5 + 1, 3) for i in range(len(S))]
    ex = ratio_sequence(op, S, C, 300, backend="exact")
    fl = ratio_sequence(op, S, C, 300, backend="float")
    np.testing.assert_allclose(fl, [float(x) for x in ex], rtol=1e-12)


def test_log_domain_float_path():
    # log-weights spread past the direct-sum range, ratios computed in the log domain
    w = from_weighted_shift(ShiftWeightData({i: 4 for i in range(-800, 801)}), 1, "backward", "bilateral")
    op = ShiftOperator("backward", w)
    S = list(range(-300, 301, 7))
    ex = ratio_sequence(op, S, None, 100, backend="exact")
    fl = ratio_sequence(op, S, None, 100, backend="float")
    np.testing.assert_allclose(fl, [float(x) for x in ex], rtol=1e-12)
    assert ex[0] == 4


def test_exact_backend_overflow():
    with pytest.raises(BackendOverflow):
        ratio_sequence(ShiftOperator("backward", H), range(1, 10), None, 5001, backend="exact")
    # auto falls back to float past the cap
    r = ratio_sequence(ShiftOperator("backward", H), range(1, 10), None, 5001)
    assert isinstance(r, np.ndarray)


def test_count_at_least_backends_agree():
    op = ShiftOperator("backward", H)
    S = range(217, 1297)
    ex = count_at_least(op, S, None, 1296, 3, backend="exact")
    fl = count_at_least(op, S, None, 1296, 3, backend="float")
    assert ex.count == fl.count == 964
    assert ex.witness_ns == fl.witness_ns


def test_count_at_least_ties_count():
    op = ShiftOperator("forward", ONE)
    res = count_at_least(op, [0, 1], None, 10, 1, backend="float")
    assert res.count == 10 and res.near_ties == 10
    assert count_at_least(op, [0, 1], None, 10, 1, backend="exact").count == 10


def test_simple_function_validation_and_json():
    with pytest.raises(ValueError):
        SimpleFunction({3: 0})
    f = SimpleFunction({5: 2, -1: complex(1, -1)})
    assert f.support == [-1, 5]
    g = SimpleFunction.from_json(f.to_json())
    assert g.coeffs == {-1: complex(1, -1), 5: 2}


# ---------------------------------------------------------------- near-zero profile


def test_near_zero_piecewise():
    prof = near_zero_profile(ShiftOperator("backward", PB), 3, 4 * 5**5)
    by_k = {lvl.k: lvl for lvl in prof}
    assert by_k[2].achieved and by_k[3].achieved
    assert by_k[2].count_at_horizon == 9911 and by_k[3].count_at_horizon == 9885
    for k in (2, 3):
        lvl = by_k[k]
        direct = sum(1 for n in range(1, lvl.best_N + 1) if piecewise_weight(-n) < Fraction(1, k))
        assert lvl.best_count == direct
        assert direct * k >= lvl.best_N * (k - 1)


def test_near_zero_float_matches_exact():
    op = ShiftOperator("backward", PB)
    a = near_zero_profile(op, 4, 3000, exact=True)
    b = near_zero_profile(op, 4, 3000, exact=False)
    assert a == b


def test_near_zero_constant_never():
    prof = near_zero_profile(ShiftOperator("backward", ONE), 6, 2000)
    assert all(not lvl.achieved for lvl in prof[1:])


def test_near_zero_growing_weight_never():
    w = from_weighted_shift(ShiftWeightData(lambda i: 2), 1, "backward", "bilateral")
    prof = near_zero_profile(ShiftOperator("backward", w), 5, 500)
    assert all(not lvl.achieved and lvl.count_at_horizon == 0 for lvl in prof[1:])


def test_near_zero_unilateral_backward_rejected():
    with pytest.raises(DomainMismatch):
        near_zero_profile(ShiftOperator("backward", H), 2, 10)


def test_near_zero_forward_harmonic():
    prof = near_zero_profile(ShiftOperator("forward", H), 3, 100)
    # v_n = 1/n < 1/k iff n > k
    for lvl in prof[1:]:
        assert lvl.count_at_horizon == 100 - lvl.k
        assert lvl.achieved and lvl.best_N == 100
