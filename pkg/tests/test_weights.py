import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dchaos.errors import MissingWeightIndex
from dchaos.weights import (
    PiecewiseBilateral,
    ShiftWeightData,
    WeightSequence,
    from_weighted_shift,
    log_value,
    shift_bounded,
    value,
    weight_from_json,
)
from oracles import piecewise_weight

H = WeightSequence.harmonic()
PB = WeightSequence.piecewise_bilateral()


def test_harmonic_value():
    assert value(H, 5) == Fraction(1, 5)


def test_harmonic_out_of_domain_is_zero():
    assert value(H, -3) == 0
    assert value(H, 0) == 0


def test_piecewise_value_k3():
    # n_3 = 27 < 29 <= 54
    assert value(PB, -(3**3 + 2)) == Fraction(1, 3)


def test_piecewise_matches_literal_oracle():
    for n in range(-1200, 50):
        assert value(PB, n) == piecewise_weight(n), n


def test_piecewise_float_values_match():
    vals = PB.float_values(-4000, 30)
    for t, n in enumerate(range(-4000, 31)):
        assert vals[t] == float(piecewise_weight(n))


def test_piecewise_tiling():
    # every negative index falls in exactly one branch
    for n in range(-5000, 0):
        br, k = PiecewiseBilateral.branch(n)
        assert br in ("inverse_k", "unit")
        m = -n
        hits = [j for j in range(2, 8) if j**j + 1 < m <= (j - 1) * j**j]
        assert (br == "inverse_k") == bool(hits)
        if hits:
            assert hits == [k]


def test_log_values():
    assert log_value(H, 1) == 0
    assert log_value(H, 10) == pytest.approx(-2.302585, abs=1e-6)
    assert log_value(H, 10) == -math.log(10)
    assert log_value(H, 0) == float("-inf")


@given(st.integers(-3000, 3000))
def test_exp_log_consistency(n):
    for v in (H, PB):
        x = value(v, n)
        if x > 0:
            assert math.exp(log_value(v, n)) == pytest.approx(float(x), rel=1e-12)
            assert v.in_domain(n)
        else:
            assert not v.in_domain(n)


def test_weighted_shift_harmonic():
    # w_1 = 1, w_k = (k/(k-1))^{1/p}; with p = 1 the product telescopes to 1/k
    w = ShiftWeightData({k: (Fraction(k, k - 1) if k > 1 else Fraction(1)) for k in range(1, 60)})
    v = from_weighted_shift(w, 1, "backward", "unilateral")
    assert v.exact
    assert [value(v, k) for k in range(1, 60)] == [Fraction(1, k) for k in range(1, 60)]


def test_weighted_shift_harmonic_p2_float():
    w = ShiftWeightData(lambda k: math.sqrt(k / (k - 1)) if k > 1 else 1.0)
    v = from_weighted_shift(w, 2, "backward", "unilateral")
    for k in (1, 5, 40):
        assert value(v, k) == pytest.approx(1 / k, rel=1e-12)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_weighted_shift_identity(p):
    w = ShiftWeightData(lambda i: 1)
    v = from_weighted_shift(w, p, "backward", "bilateral")
    assert all(value(v, n) == 1 for n in range(-5, 6))


def test_weighted_shift_bilateral_twos():
    w = ShiftWeightData({i: 2 for i in range(-10, 11)})
    v = from_weighted_shift(w, 1, "backward", "bilateral")
    for n in range(-3, 4):
        assert value(v, n) == Fraction(2) ** (-n)
    floats = v.log_values(-3, 3)
    for t, n in enumerate(range(-3, 4)):
        assert floats[t] == pytest.approx(-n * math.log(2), abs=1e-14)


def test_weighted_shift_missing_index():
    w = ShiftWeightData({1: 2, 2: 2})
    v = from_weighted_shift(w, 1, "backward", "unilateral")
    with pytest.raises(MissingWeightIndex):
        value(v, 3)


def test_shift_bound_rejects_large_entry():
    w = ShiftWeightData({1: 5}, bound=2)
    with pytest.raises(ValueError):
        w(1)


def test_shift_bounded_harmonic():
    probe = shift_bounded(H, "backward", (1, 10**4))
    assert probe.bound == 2 and probe.witness == 1


@pytest.mark.parametrize("kind", ["backward", "forward"])
def test_shift_bounded_constant(kind):
    probe = shift_bounded(WeightSequence.constant(1), kind, (-50, 50))
    assert probe.bound == 1


def test_shift_bounded_piecewise():
    probe = shift_bounded(PB, "backward", (-(4 * 4**4), 4**4))
    direct = max(
        (piecewise_weight(n) / piecewise_weight(n + 1), n) for n in range(-(4 * 4**4), 4**4 + 1)
    )
    assert probe.bound == direct[0]
    # the largest jump is where the weight climbs back from 1/k to 1
    assert piecewise_weight(probe.witness) == 1 and piecewise_weight(probe.witness + 1) < 1


@given(st.lists(st.fractions(min_value=Fraction(1, 10), max_value=10), min_size=3, max_size=30))
def test_converted_bound_matches_w(ws):
    w = ShiftWeightData({i + 1: x for i, x in enumerate(ws)})
    v = from_weighted_shift(w, 2, "backward", "unilateral")
    probe = shift_bounded(v, "backward", (1, len(ws) - 1))
    # v_n / v_{n+1} = |w_{n+1}|^p
    assert probe.bound == max(abs(x) ** 2 for x in ws[1:])


@given(st.integers(-500, 500))
def test_mirror_involution(n):
    assert PB.mirrored().mirrored().value(n) == PB.value(n)
    assert PB.mirrored().value(n) == PB.value(-n)


def test_json_round_trip():
    for v in (H, PB, WeightSequence.table("bilateral", -2, [Fraction(1, 3), 2, 5], fill=1), PB.mirrored()):
        w = weight_from_json(v.to_json())
        assert [w.value(n) for n in range(-6, 7)] == [v.value(n) for n in range(-6, 7)]
    doc = {
        "side": "bilateral",
        "generator": {"kind": "weighted_shift", "w": {"offset": -4, "values": ["2"] * 9}, "p": "1", "shift": "backward"},
    }
    v = weight_from_json(doc)
    assert v.value(-3) == 8 and v.value(3) == Fraction(1, 8)
