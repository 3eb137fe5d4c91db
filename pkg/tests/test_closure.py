from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from limcm import AlgebraError, FrobeniusFamily, GradedModule, Ideal, closure_diagnostic, \
    colon_capture_suite, integral_closure_monomial, monomial_position_check, tight_closure_check
from limcm.closure import (INCONCLUSIVE, MEMBER_EVIDENCE, NON_MEMBER, NON_MEMBER_CERTIFIED,
                           AxiomSevenInstance, ClosureQuery, DietzInstance, axiom_seven, axiom_six,
                           classify_difference, cloprop_checks, dietz_axioms, evidence_set,
                           ideal_closure_diagnostic, in_integral_closure_monomial, in_newton_polyhedron,
                           newton_facets)
from limcm.modules import ideal_colon

from conftest import cone_ring, fermat_ring, nonequi_ring, poly_ring, semigroup_ring


def R_(R):
    return GradedModule.cyclic(R, [])


def fam(R):
    return FrobeniusFamily(R_(R))


# verdict band ----------------------------------------------------------------------
def test_classify_difference_band():
    assert classify_difference(float("-inf"), 2.0) == MEMBER_EVIDENCE
    assert classify_difference(1.0, 2.0) == MEMBER_EVIDENCE
    assert classify_difference(2.0, 2.0) == NON_MEMBER
    assert classify_difference(1.6, 2.0) == INCONCLUSIVE


# closure diagnostic ----------------------------------------------------------------------
def test_element_of_ideal_has_zero_difference():
    R = poly_ring(2)
    v = ideal_closure_diagnostic(R, ["x^2", "y^2"], "x^2*y", fam(R))
    assert v.member
    assert all(d == 0 for d in v.series["finite"]["difference"]["values"].values())


@pytest.mark.parametrize("t", [2, 3])
def test_nonequi_member(t):
    R = nonequi_ring()
    v = ideal_closure_diagnostic(R, ["x^2-y", f"z^{t}"], "x", fam(R), levels=(1, 2, 3, 4))
    assert v.verdict == MEMBER_EVIDENCE
    assert v.exponents["finite"]["difference"] < 1.5


def test_regular_ring_closure_is_trivial():
    R = poly_ring(2)
    v = ideal_closure_diagnostic(R, ["x^2", "y^2"], "x", fam(R))
    assert v.verdict == NON_MEMBER


def test_element_must_lie_in_ambient_module():
    R = poly_ring(2)
    B = GradedModule.free_module(R, [0])
    with pytest.raises(AlgebraError):
        closure_diagnostic(ClosureQuery(B, [B.free.vector(["x"])], B.free.vector(["x"]) | {1 << 60: 1}, fam(R)))


def test_module_form_uses_truncations():
    # B/A = R/(x) has infinite length: A + m^t B is used for t in {2, 4, 8}
    R = poly_ring(2)
    B = R_(R)
    q = ClosureQuery(B, [B.free.vector(["x"])], B.free.vector(["y"]), fam(R))
    v = closure_diagnostic(q)
    assert v.truncations == [2, 4, 8]
    assert set(v.series) == {"t=2", "t=4", "t=8"}
    assert v.verdict == NON_MEMBER


def test_explicit_route_matches_bracket_route():
    A = semigroup_ring(2)
    br = FrobeniusFamily(R_(A), "bracket")
    ex = FrobeniusFamily(R_(A), "explicit")
    for u in ("b^2", "b"):
        a = ideal_closure_diagnostic(A, ["a", "d"], u, br, levels=(1, 2))
        b = ideal_closure_diagnostic(A, ["a", "d"], u, ex, levels=(1, 2))
        assert a.series["finite"]["difference"] == b.series["finite"]["difference"]


# tight closure witnesses --------------------------------------------------------------
def test_fermat_seven_witness():
    R = fermat_ring(7)
    v = tight_closure_check(R, "z^2", ["x", "y"], "x", n_max=1)
    assert v.verdict == MEMBER_EVIDENCE
    assert v.series["contained"] == {0: True, 1: True}


def test_cone_certified_non_member():
    R = cone_ring(3)
    v = tight_closure_check(R, "z", ["x", "y"], "x", n_max=1)
    assert v.verdict == NON_MEMBER_CERTIFIED
    assert v.certificate == {"level": 1, "test_element": "x", "declared": True}


def test_undeclared_test_element_is_not_a_certificate():
    R = cone_ring(3)
    v = tight_closure_check(R, "z", ["x", "y"], "x", n_max=1, test_element_declared=False)
    assert v.verdict == NON_MEMBER


def test_ideal_elements_always_pass():
    R = cone_ring(3)
    v = tight_closure_check(R, "x*z", ["x", "y"], "y", n_max=2)
    assert v.verdict == MEMBER_EVIDENCE
    with pytest.raises(AlgebraError):
        tight_closure_check(R, "x", ["x"], "0")


@pytest.mark.parametrize("make,I,us,c", [
    (lambda: fermat_ring(2), ["x", "y"], ["z^2", "z", "x*z"], "x^2"),
    (lambda: cone_ring(3), ["x", "y"], ["z", "1"], "x"),
    (lambda: cone_ring(3), ["x^2", "y"], ["z", "x*z", "z^2"], "x"),
])
def test_tight_closure_agrees_with_diagnostic(make, I, us, c):
    R = make()
    for u in us:
        tc = tight_closure_check(R, u, I, c, n_max=2)
        dv = ideal_closure_diagnostic(R, I, u, fam(R))
        assert tc.member == dv.member and tc.non_member == dv.non_member


# integral closure -------------------------------------------------------------------------
def gens_str(I):
    return sorted(str(g) for g in I.gens)


def test_integral_closure_examples():
    R1 = poly_ring(2, "x")
    assert gens_str(integral_closure_monomial(Ideal(R1, ["x"]))) == ["x"]
    R = poly_ring(2)
    assert gens_str(integral_closure_monomial(Ideal(R, ["x^2", "y^2"]))) == ["x*y", "x^2", "y^2"]
    assert gens_str(integral_closure_monomial(Ideal(R, ["x^3", "y^3"]))) == \
        ["x*y^2", "x^2*y", "x^3", "y^3"]


def test_integral_closure_rejects_non_monomials():
    R = poly_ring(2)
    with pytest.raises(AlgebraError):
        integral_closure_monomial(Ideal(R, ["x+y"]))
    with pytest.raises(AlgebraError):
        integral_closure_monomial(Ideal(semigroup_ring(2), ["a"]))


def test_newton_facets_three_variables():
    facets = newton_facets([(2, 0, 0), (0, 2, 0), (0, 0, 2)])
    assert facets == [((1, 1, 1), 2)]
    assert in_newton_polyhedron((1, 1, 0), facets)
    assert not in_newton_polyhedron((1, 0, 0), facets)


# capture and position -------------------------------------------------------------------------
def test_capture_regular():
    R = poly_ring(2)
    r = colon_capture_suite(R, fam(R), ["x", "y"])
    assert r["status"] == "PASS"
    assert r["colon"] == ["x"] and r["already_in_target"] == ["x"]


def test_capture_nonequi():
    R = nonequi_ring()
    r = colon_capture_suite(R, fam(R), ["x^2-y", "z"], levels=(1, 2, 3, 4))
    assert sorted(r["colon"]) == ["x", "y"]
    assert r["verdicts"]["x"] == MEMBER_EVIDENCE
    assert r["status"] == "PASS"


def test_capture_semigroup():
    A = semigroup_ring(2)
    r = colon_capture_suite(A, fam(A), ["a", "d"])
    assert r["status"] == "PASS"
    assert set(r["colon"]) - set(r["already_in_target"])


def test_capture_with_exponents():
    A = semigroup_ring(2)
    r = colon_capture_suite(A, fam(A), ["a", "d"], a=[1, 1], b=[1, 1])
    assert r["form"] == "(x^(a+b)) : x^b" and r["status"] == "PASS"


def test_capture_needs_partial_sop():
    R = poly_ring(2)
    with pytest.raises(AlgebraError):
        colon_capture_suite(R, fam(R), ["x", "x^2"])


def test_monomial_position_t1():
    R = poly_ring(2)
    r = monomial_position_check(R, fam(R), ["x", "y"], 1)
    assert r["element"] == "1" and r["status"] == "PASS"


def test_monomial_position_regular_t2():
    R = poly_ring(2)
    r = monomial_position_check(R, fam(R), ["x", "y"], 2)
    assert r["element"] == "x*y" and r["verdict"] == NON_MEMBER


def test_monomial_position_semigroup_t2():
    A = semigroup_ring(2)
    r = monomial_position_check(A, fam(A), ["a", "d"], 2)
    assert r["verdict"] == NON_MEMBER and r["status"] == "PASS"


# Dietz axioms ----------------------------------------------------------------------------------
def test_axiom_one_and_five_on_plane():
    R = poly_ring(2)
    B = R_(R)
    inst = DietzInstance("plane", B, [B.free.vector(["x^2"]), B.free.vector(["y^3"])])
    r = dietz_axioms(inst, fam(R))
    assert r["1"] and r["2"] and r["5"]
    assert r["3"] is None and r["4"] is None


def test_axiom_six_semigroup():
    A = semigroup_ring(2)
    r = axiom_six(A, fam(A))
    assert r["m_closed"] and r["zero_closed"]


def test_axiom_seven_projection():
    A = semigroup_ring(2)
    inst = AxiomSevenInstance("projection", A, ["a"], ["d", "0"], "d")
    r = axiom_seven(inst, fam(A))
    assert r["holds"] and r["left_side"]


def test_axiom_seven_validates_instance():
    A = semigroup_ring(2)
    with pytest.raises(AlgebraError):
        axiom_seven(AxiomSevenInstance("bad", A, ["a"], ["b", "0"], "d"), fam(A))


# evidence sets and closure properties ---------------------------------------------------------------
def test_evidence_set_candidates_are_standard_monomials():
    A = semigroup_ring(2)
    B = R_(A)
    ev = evidence_set(B, [B.free.vector([g]) for g in ("a", "d")], fam(A))
    assert len(ev.verdicts) == Ideal(A, ["a", "d"]).quotient_length()
    assert set(ev.members()) == {("b^2",), ("c^2",)}


@st.composite
def monomial_instance(draw):
    a = draw(st.integers(1, 3))
    b = draw(st.integers(1, 3))
    mixed = draw(st.booleans())
    A = [f"x^{a}", f"y^{b}"] + (["x*y"] if mixed and a > 1 and b > 1 else [])
    A_big = [f"x^{max(a - 1, 1)}", f"y^{b}", "x*y"]
    J = draw(st.sampled_from([["x"], ["y"], ["x", "y"]]))
    A_other = [f"x^{draw(st.integers(1, 2))}", "y"]
    return A, A_big, J, A_other


@settings(max_examples=10, deadline=None)
@given(monomial_instance())
def test_cloprop_relations_plane(inst):
    R = poly_ring(2)
    A, A_big, J, A_other = inst
    r = cloprop_checks(R, fam(R), A, A_big, J, A_other)
    assert all(r[k] for k in "bdegjl")
    # closures over a regular ring are trivial
    assert r["members"] == []


SEMIGROUP_MONOMIALS = ["a", "b", "c", "d", "a^2", "b^2", "c^2", "d^2", "a*b", "c*d"]


@st.composite
def semigroup_instance(draw):
    extra = draw(st.lists(st.sampled_from(SEMIGROUP_MONOMIALS[4:]), max_size=2, unique=True))
    pa = draw(st.integers(1, 2))
    A = [f"a^{pa}", "d"] + extra
    A_big = A + [draw(st.sampled_from(["b", "c", "b^2", "a"]))]
    J = [draw(st.sampled_from(["b", "c", "a"]))]
    A_other = ["a", f"d^{draw(st.integers(1, 2))}"]
    return A, A_big, J, A_other


@settings(max_examples=10, deadline=None)
@given(semigroup_instance())
def test_cloprop_relations_semigroup(inst):
    R = semigroup_ring(2)
    A, A_big, J, A_other = inst
    r = cloprop_checks(R, fam(R), A, A_big, J, A_other)
    assert all(r[k] for k in "bdegjl")


@settings(max_examples=8, deadline=None)
@given(semigroup_instance())
def test_closure_idempotent(inst):
    R = semigroup_ring(2)
    B = R_(R)
    A = [B.free.vector([R.coerce(g)]) for g in inst[0]]
    ev = evidence_set(B, A, fam(R))
    grown = A + [ev.elements[k] for k in ev.members()]
    assert evidence_set(B, grown, fam(R)).members() == []


def _st_exponent(e):
    # a^i b^j c^k d^l -> s^(4i+3j+k) t^(j+3k+4l)
    i, j, k, l = e
    return (4 * i + 3 * j + k, j + 3 * k + 4 * l)


def _semigroup_integral(u, I):
    R = u.ring
    exps = [_st_exponent(R.layout.exps(next(iter(g.terms)))) for g in I]
    facets = newton_facets(exps)
    return in_newton_polyhedron(_st_exponent(R.layout.exps(next(iter(u.terms)))), facets)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(SEMIGROUP_MONOMIALS), min_size=0, max_size=2, unique=True),
       st.sampled_from(SEMIGROUP_MONOMIALS + ["b*c", "b^2*c", "a*c", "b*d", "1"]))
def test_no_member_outside_integral_closure_semigroup(extra, u):
    R = semigroup_ring(2)
    I = [R.coerce(g) for g in ["a^2", "d^2"] + extra]
    uu = R.coerce(u)
    v = ideal_closure_diagnostic(R, I, uu, fam(R))
    if v.member:
        assert _semigroup_integral(uu, I)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=3),
       st.tuples(st.integers(0, 3), st.integers(0, 3)))
def test_no_member_outside_integral_closure_plane(extra, u):
    R = poly_ring(2)
    I = Ideal(R, [R.monomial((3, 0)), R.monomial((0, 3))] + [R.monomial(e) for e in extra if any(e)])
    uu = R.monomial(u)
    v = ideal_closure_diagnostic(R, I, uu, fam(R))
    if v.member:
        assert in_integral_closure_monomial(uu, I)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([["x", "y^2"], ["x^2", "y^2"], ["x^2", "x*y", "y^3"], ["x+y", "y^2"]]),
       st.sampled_from(["x", "y", "x*y", "x^2", "y^2", "1"]))
def test_restriction_of_scalars(I, u):
    # S = k[x,y] over R = k[x^2,y^2]; S ~ F_* R, so the S-side family F^n_* S is F^(n+1)_* R
    R = poly_ring(2)
    over_R = ideal_closure_diagnostic(R, I, u, fam(R), levels=(2, 3, 4))
    S = poly_ring(2)
    IS = [S.coerce(g).frobenius(2) for g in I]
    over_S = ideal_closure_diagnostic(S, IS, S.coerce(u).frobenius(2), fam(S), levels=(1, 2, 3))
    assert over_R.verdict == over_S.verdict
