from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dchaos.chaos import (
    Block,
    Certificate,
    dcc_probe,
    certificate_from_json,
    certificate_to_json,
    example_certificate,
    example_witness_range,
    irregular_norm_family,
    p_independence_report,
    pair_stats,
    required_count,
    verify_certificate,
)
from dchaos.density import IndexSet, example_bilateral_set
from dchaos.errors import BackendOverflow, DomainMismatch
from dchaos.shifts import ShiftOperator, SimpleFunction, orbit_norm_p
from dchaos.weights import WeightSequence
from oracles import example_ratio

H = WeightSequence.harmonic()
PB = WeightSequence.piecewise_bilateral()
ONE = WeightSequence.constant(1)


def test_example_certificate_shapes():
    cert = example_certificate([2, 3], backend="exact")
    b2, b3 = cert.blocks
    assert (b2.N, b2.S[0], b2.S[-1]) == (64, 17, 64)
    assert (b3.N, b3.S[0], b3.S[-1]) == (1296, 217, 1296)
    assert cert.epsilon == Fraction(1, 2)


def test_example_certificate_k1_trivial():
    v = verify_certificate(H, "backward", example_certificate([1]))
    assert v.blocks[0].trivially_true and v.passed
    assert v.to_json()["blocks"][0]["trivially_true"]


def test_example_certificate_feasibility_caps():
    with pytest.raises(ValueError):
        example_certificate([4], backend="exact")
    with pytest.raises(ValueError):
        example_certificate([7], backend="float")


def test_example_certificate_exact():
    v = verify_certificate(H, "backward", example_certificate([2, 3], "exact"), backend="exact")
    assert v.passed and not v.vanishing_required
    assert [(b.count, b.required, b.backend) for b in v.blocks] == [(42, 32, "exact"), (964, 648, "exact")]
    for b in v.blocks:
        assert b.count * b.k >= b.N * (b.k - 1)
        for n in b.witness_ns:
            assert example_ratio(b.k, n) >= b.k


def test_witness_range_all_pass():
    # every n in the proof's witness range has ratio >= k
    lo, hi = example_witness_range(2)
    assert all(example_ratio(2, n) >= 2 for n in range(lo, hi + 1))


def test_constant_weight_fails_everywhere():
    cert = Certificate(Fraction(1, 2), (Block.interval(2, 50, -5, 5), Block(3, 80, (0, 7, 9), (1, 2, 3))))
    v = verify_certificate(ONE, "backward", cert)
    assert not v.passed
    assert all(b.count == 0 for b in v.blocks)


def test_bilateral_with_density_set():
    base = example_certificate([2, 3])
    cert = Certificate(base.epsilon, base.blocks, example_bilateral_set(5))
    v = verify_certificate(PB, "backward", cert)
    assert v.vanishing_required and v.vanishing_passed
    assert all(b.passed for b in v.blocks) and v.passed
    doc = v.to_json()
    assert doc["condition_i"]["pass"] and doc["finite_horizon"]


def test_bilateral_constant_fails_condition_i():
    cert = Certificate(Fraction(1, 2), (Block.interval(2, 20, 0, 3),))
    v = verify_certificate(ONE, "backward", cert, near_zero_horizon=200)
    assert v.vanishing_required and v.vanishing_passed is False and not v.passed


def test_domain_mismatch():
    cert = Certificate(Fraction(1, 2), (Block.interval(2, 20, 0, 3),))
    with pytest.raises(DomainMismatch):
        verify_certificate(H, "backward", cert)


def test_exact_refused_above_cap():
    with pytest.raises(BackendOverflow):
        verify_certificate(H, "backward", example_certificate([4]), backend="exact")


def test_exact_float_counts_agree():
    # every block with N <= 10^4 in the shipped example
    cert = example_certificate([1, 2, 3])
    a = verify_certificate(H, "backward", cert, backend="exact")
    b = verify_certificate(H, "backward", cert, backend="float")
    assert [x.count for x in a.blocks] == [x.count for x in b.blocks]
    assert all(x.near_ties == 0 for x in b.blocks)


def test_parallel_matches_sequential():
    cert = example_certificate([2, 3, 4, 5])
    a = verify_certificate(H, "backward", cert, workers=1)
    b = verify_certificate(H, "backward", cert, workers=4)
    assert a == b and a.to_json() == b.to_json()


@given(st.fractions(Fraction(1, 50), Fraction(50)))
def test_scaling_invariance(factor):
    cert = Certificate(
        Fraction(1, 2),
        (Block(2, 64, tuple(range(17, 65)), None), Block(3, 300, (30, 31, 90, 200), (1, 2, Fraction(1, 3), 5))),
    )
    a = verify_certificate(H, "backward", cert, backend="exact")
    b = verify_certificate(H, "backward", cert.scaled(factor), backend="exact")
    assert [(x.count, x.passed) for x in a.blocks] == [(x.count, x.passed) for x in b.blocks]


@given(st.fractions(Fraction(1, 100), Fraction(1)), st.fractions(Fraction(1, 100), Fraction(1)))
def test_monotone_requirement(e1, e2):
    lo, hi = sorted((e1, e2))
    assert required_count(1296, lo) <= required_count(1296, hi)
    blocks = example_certificate([2, 3]).blocks
    a = verify_certificate(H, "backward", Certificate(lo, blocks), backend="exact")
    b = verify_certificate(H, "backward", Certificate(hi, blocks), backend="exact")
    for x, y in zip(a.blocks, b.blocks):
        assert not (y.passed and not x.passed)


def test_required_count_exact():
    assert required_count(64, Fraction(1, 2)) == 32
    assert required_count(7, Fraction(1, 3)) == 3
    assert required_count(9, Fraction(1, 3)) == 3


def test_certificate_validation():
    with pytest.raises(ValueError):
        Certificate(Fraction(0), (Block.interval(2, 5, 1, 2),))
    with pytest.raises(ValueError):
        Certificate(Fraction(1, 2), (Block.interval(3, 5, 1, 2), Block.interval(2, 9, 1, 2)))
    with pytest.raises(ValueError):
        Certificate(Fraction(1, 2), (Block.interval(2, 9, 1, 2), Block.interval(3, 5, 1, 2)))
    with pytest.raises(ValueError):
        Block(2, 5, (), None)
    with pytest.raises(ValueError):
        Block(2, 5, (1, 2), (1, 0))


def test_certificate_json_round_trip():
    cert = Certificate(
        Fraction(1, 3),
        (Block.interval(2, 64, 17, 64), Block(3, 90, (4, 5, 9), (1, 2.5, complex(0, 1)))),
        IndexSet.from_intervals([[5, 8]]),
    )
    doc = certificate_to_json(cert)
    assert doc["blocks"][0]["S"] == [[17, 64]] and doc["blocks"][1]["S"] == [[4, 5], [9, 9]]
    back = certificate_from_json(doc)
    assert isinstance(back.blocks[0].S, range)
    assert back.epsilon == Fraction(1, 3)
    assert list(back.blocks[1].S) == [4, 5, 9]
    assert certificate_to_json(back) == doc


# ---------------------------------------------------------------- DCC probe


def test_dcc_basis_vectors_vanish():
    op = ShiftOperator("backward", H)
    xs = [lambda n, j=j: float(orbit_norm_p(op, SimpleFunction({j: 1}), n)) for j in range(1, 6)]
    rep = dcc_probe(xs, IndexSet.from_intervals([[1, 10**6]]), [], Fraction(1, 2), [10, 20, 40])
    assert rep.a_holds
    assert all(w[2] == 0 for w in rep.a_windows[1:])


@pytest.mark.parametrize("p", [1, 2])
def test_dcc_example_family(p):
    cert = example_certificate([2, 3])
    ys = irregular_norm_family(H, "backward", cert, p)
    rep = dcc_probe([], IndexSet.empty(), ys, Fraction(1, 2), [b.N for b in cert.blocks])
    assert rep.b_holds
    for k, y in zip((2, 3), ys):
        lo, hi = example_witness_range(k)
        for n in (lo, (lo + hi) // 2, hi):
            assert y(n) >= 1 - 1e-12
            assert y(n) ** p == pytest.approx(float(example_ratio(k, n)) / k, rel=1e-12)


def test_dcc_zero_orbit_fails():
    rep = dcc_probe([], IndexSet.empty(), [lambda n: 0.0] * 2, Fraction(1, 100), [10, 20])
    assert not rep.b_holds
    assert all(c[2] == 0 for c in rep.b_checks)


def test_dcc_tolerance_violation_reported():
    rep = dcc_probe([lambda n: 1.0], IndexSet.from_intervals([[1, 100]]), [], Fraction(1, 2), [5, 10])
    assert not rep.a_holds


# ---------------------------------------------------------------- pair statistics


def test_pair_stats_equal_orbits():
    s = pair_stats(lambda n: 0.0, 0.1, 0.2, 500)
    assert s.below_delta_count == s.below_epsilon_count == 500
    assert s.F_lower_estimate == s.F_upper_estimate == 1


def test_pair_stats_linear():
    s = pair_stats(lambda n: float(n), 3.5, 7.5, 100)
    assert s.below_epsilon_count == 3 and s.below_delta_count == 7
    assert pair_stats(lambda n: float(n), 3, 7, 5).below_delta_count == 5


def test_pair_stats_follow_density_profile():
    A = example_bilateral_set(5)
    hs = [54, 256, 768, 3125, 12500]
    s = pair_stats(lambda n: 0.0 if n in A else float(n), 0.5, 0.5, 12500, hs)
    ratios = [Fraction(A.count_leq(h), h) for h in hs]
    assert s.F_lower_estimate == min(ratios) and s.F_upper_estimate == max(ratios)
    assert s.below_epsilon_count == A.count_leq(12500)


@given(st.lists(st.floats(0, 10), min_size=1, max_size=80), st.floats(0, 10), st.floats(0, 10))
def test_pair_stats_counts_bounded(ds, e, d):
    s = pair_stats(lambda n: ds[n - 1], e, d, len(ds))
    assert 0 <= s.below_epsilon_count <= len(ds) and 0 <= s.below_delta_count <= len(ds)


# ---------------------------------------------------------------- p-independence


def test_p_independence_harmonic():
    rep = p_independence_report(H, "backward", example_certificate([2, 3]), [1, 2, 3])
    assert rep["pass"] and rep["identical"]
    assert all(s["rel_err"] <= 1e-12 for e in rep["per_p"] for s in e["spot_checks"])


def test_p_independence_constant_fails_identically():
    cert = Certificate(Fraction(1, 2), (Block.interval(2, 30, 1, 4),))
    rep = p_independence_report(ONE, "forward", cert, [1, 2])
    assert not rep["pass"] and rep["identical"]
    assert [e["pass"] for e in rep["per_p"]] == [False, False]


def test_p_independence_singleton_matches_verify():
    cert = example_certificate([2])
    rep = p_independence_report(H, "backward", cert, [1])
    assert rep["verdict"] == verify_certificate(H, "backward", cert).to_json()


@pytest.mark.parametrize("p", [1, 2, 3])
def test_counts_from_orbit_norms_match_ratios(p):
    # rerun the k = 2 block from p-th powers of orbit norms of s = sum 1_{j}
    op = ShiftOperator("backward", H)
    s = SimpleFunction.indicator(range(17, 65))
    base = orbit_norm_p(op, s, 0, p)
    count = sum(1 for n in range(1, 65) if orbit_norm_p(op, s, n, p) >= 2 * base)
    assert count == 42
