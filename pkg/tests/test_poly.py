from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from germfib import MixedFunction, Polynomial, PolyVector, parse_mixed, parse_polynomial, realify
from germfib.poly import complex_to_real, determinant, minors

NV = 3


@st.composite
def polys(draw, nvars=NV, max_terms=5, max_deg=3):
    terms = draw(st.lists(
        st.tuples(st.tuples(*[st.integers(0, max_deg)] * nvars),
                  st.fractions(min_value=-5, max_value=5, max_denominator=6)),
        max_size=max_terms))
    return Polynomial(nvars, terms)


points = st.lists(st.floats(-1.5, 1.5), min_size=NV, max_size=NV).map(np.array)


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Polynomial.zero(NV)


@given(polys(), polys(), points)
def test_eval_is_a_homomorphism(a, b, x):
    scale = 1 + abs(a.eval(x)) * (1 + abs(b.eval(x)))
    assert abs((a * b).eval(x) - a.eval(x) * b.eval(x)) < 1e-9 * scale
    assert abs((a + b).eval(x) - (a.eval(x) + b.eval(x))) < 1e-9 * scale


@given(polys(), polys())
def test_product_rule(a, b):
    for i in range(NV):
        assert (a * b).diff(i) == a.diff(i) * b + a * b.diff(i)


@given(polys(), polys(), st.integers(0, NV - 1), st.integers(0, NV - 1))
def test_mixed_partials_commute(a, _b, i, j):
    assert a.diff(i).diff(j) == a.diff(j).diff(i)


@given(polys())
def test_to_str_round_trips_through_parser(a):
    names = ["x", "y", "z"]
    assert parse_polynomial(a.to_str(names), names) == a


@given(polys(), st.lists(points, min_size=1, max_size=6))
def test_vectorised_evaluation_matches_pointwise(a, xs):
    X = np.array(xs)
    assert np.allclose(a.eval_many(X), [a.eval(x) for x in X], rtol=1e-12, atol=1e-12)


def test_degrees_and_accessors():
    p = parse_polynomial("x^3*y + 2*z - 1/2", ["x", "y", "z"])
    assert p.degree == 4
    assert p.low_degree == 0
    assert p.constant_term() == Fraction(-1, 2)
    assert p.coeff((3, 1, 0)) == 1
    assert Polynomial.zero(3).degree == -1
    assert Polynomial.zero(3).is_zero()
    assert Polynomial.const(2, 7).is_constant()


def test_bad_constructions():
    with pytest.raises(ValueError):
        Polynomial(0)
    with pytest.raises(ValueError):
        Polynomial(2, {(1,): 1})
    with pytest.raises(ValueError):
        Polynomial(2, {(-1, 0): 1})
    with pytest.raises(ValueError):
        Polynomial.var(2, 5)
    with pytest.raises(ValueError):
        Polynomial.var(2, 0) + Polynomial.var(3, 0)
    with pytest.raises(ValueError):
        Polynomial.var(2, 0) ** -1


def test_determinant_and_minors():
    x, y = Polynomial.var(2, 0), Polynomial.var(2, 1)
    assert determinant([[x, y], [y, x]]) == x * x - y * y
    # Vandermonde in three variables
    a, b, c = (Polynomial.var(3, i) for i in range(3))
    one = Polynomial.const(3, 1)
    V = determinant([[one, a, a * a], [one, b, b * b], [one, c, c * c]])
    assert V == (b - a) * (c - a) * (c - b)
    ms = minors([[x, y, Polynomial.const(2, 1)], [y, x, Polynomial.zero(2)]], 2)
    assert len(ms) == 3
    assert {str(m[1]) for m in ms} == {"(0, 1)", "(0, 2)", "(1, 2)"}


def test_polyvector_dot_and_scale():
    x, y = Polynomial.var(2, 0), Polynomial.var(2, 1)
    v = PolyVector([x, y])
    assert v.dot(v) == x * x + y * y
    assert v.scale(x)[1] == x * y
    assert np.allclose(v.eval([2.0, 3.0]), [2.0, 3.0])


@st.composite
def mixed(draw, n=2):
    out = MixedFunction(n)
    for _ in range(draw(st.integers(1, 4))):
        term = MixedFunction.const(n, draw(st.integers(-3, 3)), draw(st.integers(-3, 3)))
        for j in range(n):
            term = term * MixedFunction.var(n, j) ** draw(st.integers(0, 2))
            term = term * MixedFunction.var(n, j, conjugate=True) ** draw(st.integers(0, 2))
        out = out + term
    return out


@given(mixed(), st.lists(st.complex_numbers(max_magnitude=1.5), min_size=2, max_size=2))
def test_realify_matches_complex_evaluation(F, z):
    re_part, im_part = realify(F)
    x = complex_to_real(np.array(z))
    val = F.eval(np.array(z))
    assert abs(re_part.eval(x) - val.real) < 1e-9 * (1 + abs(val))
    assert abs(im_part.eval(x) - val.imag) < 1e-9 * (1 + abs(val))


@given(mixed(), mixed())
def test_conjugation_is_multiplicative(F, G):
    assert (F * G).conj() == F.conj() * G.conj()
    assert F.conj().conj() == F


def test_realify_known_case():
    F = parse_mixed("z1*conj(z2)", ["z1", "z2"])
    names = ["x1", "y1", "x2", "y2"]
    re_part, im_part = realify(F)
    assert re_part == parse_polynomial("x1*x2 + y1*y2", names)
    assert im_part == parse_polynomial("y1*x2 - x1*y2", names)
