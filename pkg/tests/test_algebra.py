from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from limcm import AlgebraError, GradedModule, GradedRing, Ideal
from limcm.algebra.hilbert import INFINITE
from limcm.algebra.ideal import groebner_basis, krull_dim, normal_form
from limcm.algebra.parsing import PolynomialSyntaxError, parse_polynomial
from limcm.algebra.ring import PrimeField
from limcm.modules import direct_sum, graded_length, min_generators

from conftest import fermat_ring, nonequi_ring, poly_ring


# parsing -------------------------------------------------------------------
def test_parse_fermat_is_homogeneous_cubic():
    R = poly_ring(2, "xyz")
    f = parse_polynomial("x^3+y^3+z^3", R)
    assert f.is_homogeneous() and f.degree() == 3
    assert len(f.terms) == 3


def test_parse_reduces_coefficients():
    R = poly_ring(2, "x")
    assert parse_polynomial("2*x", R).is_zero()


def test_parse_uses_weights():
    R = poly_ring(3, "xy", [1, 2])
    f = parse_polynomial("x^2-y", R)
    assert f.is_homogeneous() and f.degree() == 2


def test_parse_errors_carry_position():
    R = poly_ring(3)
    with pytest.raises(PolynomialSyntaxError) as e:
        parse_polynomial("x+2y", R)
    assert e.value.pos == 3
    with pytest.raises(AlgebraError, match="unknown variable"):
        parse_polynomial("x+w", R)
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial("x^", R)


def test_prime_field_rejects_composites():
    with pytest.raises(AlgebraError):
        PrimeField(6)
    assert PrimeField(7).inv(3) * 3 % 7 == 1


def test_inhomogeneous_relation_rejected():
    with pytest.raises(AlgebraError):
        GradedRing(2, ["x", "y"], relations=["x^2-y"])


# Groebner bases and normal forms ----------------------------------------------
def test_groebner_already_reduced():
    R = poly_ring(2)
    assert list(groebner_basis(Ideal(R, ["x"])).gens) == [R.coerce("x")]


def test_groebner_hand_example():
    # x^2-y^2, xy: S-pair y*(x^2-y^2) - x*(xy) = -y^3
    R = poly_ring(3)
    gb = groebner_basis(Ideal(R, ["x^2-y^2", "x*y"])).gens
    assert R.coerce("y^3") in gb
    assert len(gb) == 3


def test_groebner_duplicates_collapse():
    R = poly_ring(3)
    gb = groebner_basis(Ideal(R, ["2*x+y", "2*x+y"])).gens
    assert len(gb) == 1
    assert gb[0] == R.coerce("x+2*y")  # made monic


def test_normal_forms():
    R = poly_ring(3)
    f = R.coerce("x^2+x*y")
    assert normal_form(f, Ideal(R, [f])).is_zero()
    R2 = poly_ring(2)
    assert normal_form("y", Ideal(R2, ["x"])) == R2.coerce("y")
    assert normal_form("x^2", Ideal(R, ["x^2-y^2"])) == R.coerce("y^2")


def test_krull_dims():
    assert krull_dim(Ideal(poly_ring(2, "xyz"), ["x*y", "x*z"])) == 2
    assert krull_dim(Ideal(poly_ring(2), [])) == 2
    assert krull_dim(Ideal(poly_ring(2), ["x", "y"])) == 0
    assert krull_dim(Ideal(poly_ring(2), ["1"])) == -1
    assert nonequi_ring().krull_dim() == 2


# lengths and generators --------------------------------------------------------
def test_graded_lengths():
    assert graded_length(GradedModule.cyclic(poly_ring(2, "x"), ["x^3"])) == 3
    R = poly_ring(2)
    assert graded_length(GradedModule.cyclic(R, ["x^2", "x*y", "y^3"])) == 4
    assert graded_length(GradedModule.cyclic(R, ["x"])) is INFINITE


def test_min_generators():
    R = poly_ring(2)
    m = GradedModule.cyclic(R, ["x", "y"])
    assert min_generators(direct_sum(GradedModule.cyclic(R, []), m)) == 2
    # (x^2, xy, y^2) as a module: presented by its syzygies
    M = GradedModule.from_matrix(R, [["y", "0"], ["x", "y"], ["0", "x"]], [0, 0, 0])
    assert min_generators(M) == 3


def test_nu_of_fermat_pushforward_by_colength():
    R = fermat_ring(2)
    assert Ideal(R, ["x^2", "y^2", "z^2"]).quotient_length() == 8


def test_nonminimal_presentation_trims():
    R = poly_ring(2)
    # generator e2 is killed by a unit relation
    M = GradedModule.from_matrix(R, [["x", "0"], ["0", "1"]], [0, 0])
    assert M.nu() == 1
    assert M.dim() == 1 and M.length() is INFINITE


# properties -----------------------------------------------------------------------
def _random_poly(R, draw, degree):
    mons = [e for e in product(range(degree + 1), repeat=R.nvars)
            if sum(a * w for a, w in zip(e, R.weights)) == degree]
    coeffs = draw(st.lists(st.integers(0, R.p - 1), min_size=len(mons), max_size=len(mons)))
    f = R.zero()
    for e, c in zip(mons, coeffs):
        f = f + R.monomial(e, c)
    return f


@st.composite
def homogeneous_pair(draw):
    R = poly_ring(3, "xyz")
    d = draw(st.integers(1, 3))
    return R, _random_poly(R, draw, d), _random_poly(R, draw, d)


@settings(max_examples=25, deadline=None)
@given(homogeneous_pair())
def test_normal_form_is_linear(fg):
    R, f, g = fg
    I = Ideal(R, ["x^2-y*z", "x*y-z^2"])
    lhs = normal_form(f + g, I)
    rhs = normal_form(normal_form(f, I) + normal_form(g, I), I)
    assert lhs == rhs


@settings(max_examples=20, deadline=None)
@given(st.permutations(["x^2-y*z", "x*y-z^2", "y^3-x*z^2", "x*z+y^2"]))
def test_groebner_basis_is_canonical(gens):
    R = poly_ring(3, "xyz")
    ref = groebner_basis(Ideal(R, ["x^2-y*z", "x*y-z^2", "y^3-x*z^2", "x*z+y^2"])).gens
    gb = groebner_basis(Ideal(R, gens)).gens
    assert set(gb) == set(ref)
    assert set(groebner_basis(Ideal(R, gb)).gens) == set(ref)


@st.composite
def zero_dim_ideal(draw):
    # pure powers keep the quotient finite; a binomial and a monomial add texture
    a = draw(st.integers(1, 4))
    b = draw(st.integers(1, 4))
    i = draw(st.integers(0, 3))
    j = draw(st.integers(0, 3))
    k = draw(st.integers(0, 2))
    gens = [f"x^{a}", f"y^{b}", f"x^{i}*y^{j + 1}"]
    if k:
        gens.append(f"x^{k}*y-x*y^{k}" if k > 1 else "x*y")
    return gens


def _brute_length(R, I):
    # count monomials of bounded degree not reducible by the leading terms
    lead = I.leading_exponents()
    total = 0
    for e in product(range(12), repeat=R.nvars):
        if not any(all(a >= b for a, b in zip(e, m)) for m in lead):
            total += 1
    return total


@settings(max_examples=25, deadline=None)
@given(zero_dim_ideal())
def test_length_counts_standard_monomials(gens):
    R = poly_ring(3)
    I = Ideal(R, gens)
    assert I.quotient_length() == _brute_length(R, I)


@st.composite
def small_module(draw):
    R = poly_ring(2)
    rows = draw(st.integers(1, 2))
    pool = ["x", "y", "0", "x+y"]
    cols = draw(st.integers(1, 3))
    mat = [[draw(st.sampled_from(pool)) for _ in range(cols)] for _ in range(rows)]
    return R, GradedModule.from_matrix(R, mat, [0] * rows)


@settings(max_examples=20, deadline=None)
@given(small_module())
def test_nu_bounds_by_sop_quotient(rm):
    R, M = rm
    x = ["x", "y"]
    nu = M.nu()
    lq = M.quotient_by_ideal(x).length()
    assert nu <= lq <= Ideal(R, x).quotient_length() * nu
