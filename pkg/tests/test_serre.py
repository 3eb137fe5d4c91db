from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from limcm import AlgebraError, GradedModule, GradedRing, SerrePair, koszul_multiplicity, \
    pos_limit_series, serre_chi, tor_bound_check
from limcm.modules import direct_sum
from limcm.serre import euler_characteristic, hilbert_samuel_multiplicity

from conftest import node_ring, poly_ring

CUBIC = ["a*c-b^2", "b*d-c^2", "a*d-b*c"]


def four_space(p=2):
    return GradedRing(p, ["a", "b", "c", "d"], multigrading=[[3, 2, 1, 0], [0, 1, 2, 3]])


def curve_pair():
    # (a) and (a + b^2) need deg a = 2 deg b
    return SerrePair.parse(GradedRing(2, ["a", "b"], [2, 1]), ["a"], ["a+b^2"])


def test_chi_transversal_planes():
    r = serre_chi(SerrePair.parse(four_space(), ["a", "b"], ["c", "d"]))
    assert r.tor == [1, 0, 0, 0, 0] and r.chi == 1


def test_chi_curves():
    r = serre_chi(curve_pair())
    assert r.chi == 2 and r.tor[1] == 0


def test_chi_deficient():
    pair = SerrePair.parse(poly_ring(2, "abc"), ["a", "b"], ["a", "c"])
    r = serre_chi(pair)
    assert r.tor == [1, 1, 0, 0] and r.chi == 0
    assert not pair.proper


def test_partial_chi_is_alternating_tail():
    r = serre_chi(SerrePair.parse(poly_ring(2, "abc"), ["a", "b"], ["a", "c"]))
    assert r.partial_chi[0] == r.chi and r.partial_chi[1] == 1


def test_pair_must_meet_at_the_origin():
    with pytest.raises(AlgebraError):
        SerrePair.parse(poly_ring(2, "abc"), ["a"], ["b"])
    with pytest.raises(AlgebraError):
        SerrePair.parse(node_ring(2), ["x"], ["y"])


# Koszul multiplicities -------------------------------------------------------------------
def test_koszul_multiplicity_examples():
    R = poly_ring(2)
    assert koszul_multiplicity(["x", "y"], GradedModule.cyclic(R, [])) == 1
    assert koszul_multiplicity(["x+y"], GradedModule.cyclic(node_ring(2), [])) == 2
    Rx = poly_ring(2, "x")
    assert koszul_multiplicity(["x"], GradedModule.cyclic(Rx, ["x^2"])) == 0


def test_koszul_multiplicity_needs_sop():
    R = poly_ring(2)
    with pytest.raises(AlgebraError):
        koszul_multiplicity(["x"], GradedModule.cyclic(R, []))


@pytest.mark.parametrize("T_vars,P,Q", [
    ("ab", ["a"], ["b"]),
    ("ab", ["a^2"], ["b^3"]),
    ("abc", ["a", "b"], ["c^2"]),
    ("abc", ["a^2", "b"], ["c"]),
    ("abcd", ["a", "b^2"], ["c", "d"]),
])
def test_chi_matches_koszul_multiplicity(T_vars, P, Q):
    # complete intersections: χ(T/P, T/Q) = e((q); T/P) with q the generators of Q
    T = poly_ring(2, T_vars)
    pair = SerrePair.parse(T, P, Q)
    R = T.quotient(P)
    assert serre_chi(pair).chi == koszul_multiplicity(Q, GradedModule.cyclic(R, []))


def test_hilbert_samuel_cross_check():
    R = node_ring(3)
    assert hilbert_samuel_multiplicity(["x+y"], GradedModule.cyclic(R, [])) == 2


# limit series -------------------------------------------------------------------------------
def test_limit_constant_two():
    r = pos_limit_series(curve_pair(), 3)
    assert all(v == 2 for v in r.limit_series.values())
    assert r.chi == 2 and all(g == 0 for g in r.gaps.values())


def test_limit_transversal_planes():
    r = pos_limit_series(SerrePair.parse(four_space(), ["a", "b"], ["c", "d"]), 2)
    assert all(v == 1 for v in r.limit_series.values())


def test_limit_twisted_cubic():
    pair = SerrePair.parse(four_space(), CUBIC, ["a", "d"])
    r = pos_limit_series(pair, 2)
    assert r.flags["all_terms_at_least_1"] and r.flags["gap_nonincreasing"]
    ns = sorted(r.limit_series)
    assert all(r.limit_series[n] >= 1 for n in ns)
    assert r.chi == serre_chi(pair).chi


def test_limit_deficient_flags():
    r = pos_limit_series(SerrePair.parse(poly_ring(2, "abc"), ["a", "b"], ["a", "c"]), 2)
    assert r.flags["dimension_sum"] == "less"
    assert r.flags["normalized_chi_zero"]
    assert r.flags["gap_nonincreasing"]


# the multiple Tor inequality ---------------------------------------------------------------------
def test_tor_bound_complete_intersection():
    pair = SerrePair.parse(four_space(), ["a", "b"], ["c", "d"])
    r = tor_bound_check(pair, ["c", "d"], ["a", "b"], 1)
    assert r["status"] == "PASS"
    assert all(row["lhs"] == 0 for row in r["rows"].values())


def test_tor_bound_twisted_cubic():
    pair = SerrePair.parse(four_space(), CUBIC, ["a", "d"])
    r = tor_bound_check(pair, ["a", "d"], ["b^2-a*c", "c^2-b*d"], 1)
    assert r["status"] == "PASS"
    assert sorted(r["rows"]) == [1, 2, 3, 4]


def test_tor_bound_monomial_primes():
    T = poly_ring(2, "abc")
    pair = SerrePair.parse(T, ["a", "b"], ["c"])
    r = tor_bound_check(pair, ["c"], ["a", "b"], 1)
    assert r["status"] == "PASS"


def test_tor_bound_checks_parameters():
    pair = SerrePair.parse(four_space(), ["a", "b"], ["c", "d"])
    with pytest.raises(AlgebraError):
        tor_bound_check(pair, ["a", "d"], ["a", "b"], 1)


# properties ----------------------------------------------------------------------------------------
@settings(max_examples=12, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))
def test_chi_bi_additive(i, j, k):
    T = poly_ring(2, "ab")
    M1 = GradedModule.cyclic(T, [f"a^{i}"])
    M2 = GradedModule.cyclic(T, [f"a^{j}", f"b^{k}"])
    N = GradedModule.cyclic(T, [f"b^{k}"])
    whole, _ = euler_characteristic(direct_sum(M1, M2), N)
    assert whole == euler_characteristic(M1, N)[0] + euler_characteristic(M2, N)[0]


@settings(max_examples=8, deadline=None)
@given(st.integers(1, 3), st.integers(1, 2))
def test_deficient_chi_vanishes(i, j):
    T = poly_ring(2, "abc")
    pair = SerrePair.parse(T, [f"a^{i}", "b"], ["a", f"c^{j}"])
    assert serre_chi(pair).chi == 0
