import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from reesalg.algebra import (
    LEX,
    AlgebraError,
    FieldSpec,
    MonomialOrder,
    PolynomialParseError,
    RingMap,
    dehomogenize_chart,
    homogenize,
    make_ring,
)

from oracles import to_sympy

P = 32003
R = make_ring(P, ["x", "y", "z"])
X, Y, Z = sympy.symbols("x y z")

coeffs = st.integers(min_value=-50, max_value=50)
exps = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(exps, coeffs, max_size=5).map(lambda d: R.monomial((0, 0, 0), 0) + sum(
    (R.monomial(e, c) for e, c in d.items()), R.zero()))


def test_parse_and_print_round_trip():
    f = R.parse("3*x^2*y - z^3 + 7")
    assert R.parse(str(f)) == f
    assert f.bidegrees() == {(3, 0), (0, 0)}


def test_coefficients_reduce_mod_p():
    assert R.parse(f"{P}*x + y") == R.parse("y")
    assert R.parse("x*y") * R.const(P - 1) == -R.parse("x*y")


def test_parse_error_names_token():
    with pytest.raises(PolynomialParseError) as info:
        R.parse("x^2 + w*y")
    assert info.value.token == "w"
    assert info.value.column == 7


def test_non_prime_field_rejected():
    with pytest.raises(AlgebraError):
        FieldSpec(32004)


@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == R.zero()


@given(polys, polys)
def test_product_matches_sympy(f, g):
    assert to_sympy(f * g, (X, Y, Z)) == to_sympy(f, (X, Y, Z)) * to_sympy(g, (X, Y, Z))


@given(exps, exps, exps)
def test_orders_are_multiplicative(a, b, c):
    for order in (MonomialOrder(), LEX, MonomialOrder.block(1), MonomialOrder.weighted([1, 2, 3])):
        key = order.key_function([1, 1, 1])
        ab = tuple(map(sum, zip(a, c)))
        bb = tuple(map(sum, zip(b, c)))
        if key(a) < key(b):
            assert key(ab) < key(bb)
        assert key((0, 0, 0)) <= key(a)


def test_degrevlex_ranks_known_monomials():
    key = MonomialOrder().key_function([1, 1, 1])
    # x^2 > xy > y^2 > xz > yz > z^2 in degrevlex
    ms = [(2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]
    assert sorted(ms, key=key, reverse=True) == ms


def test_bidegrees_and_homogeneity():
    B = make_ring(P, ["x", "y", "T1"], [(1, 0), (1, 0), (2, 1)])
    f = B.parse("x^2*T1 - x*y*T1")
    assert f.is_homogeneous() and f.bidegree() == (4, 1)
    assert not B.parse("x + T1").is_homogeneous()


def test_ring_map_and_degree_preservation():
    S = make_ring(P, ["a", "b", "c"])
    T = make_ring(P, ["s", "t"])
    phi = RingMap(S, T, tuple(T.parse(g) for g in ["s^2", "s*t", "t^2"]))
    assert phi(S.parse("a*c - b^2")).is_zero()
    assert not phi.is_degree_preserving()
    S2 = make_ring(P, ["a", "b", "c"], [2, 2, 2])
    assert RingMap(S2, T, phi.images).is_degree_preserving()


def test_chart_round_trip():
    f = R.parse("x*y^2 - z^3 + x^2*z")
    A, (g,) = dehomogenize_chart(R, [f], "z")
    assert A.affine and A.var_names == ("x", "y")
    assert homogenize(g, R, "z") == f


def test_chart_rejects_fiber_variable():
    B = make_ring(P, ["x", "T1"], [(1, 0), (1, 1)])
    with pytest.raises(AlgebraError):
        dehomogenize_chart(B, [], "T1")
