import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgclosure.errors import AmbiguousFloor, FieldMismatch
from cgclosure.numeric import (
    CertifiedInterval,
    QuadExt,
    ceil_quad,
    compare_quad,
    floor_interval,
    floor_qi,
    floor_quad,
    scalar_from_json,
    scalar_to_json,
    sign,
    sign_qi,
    sqrt_interval,
)

from conftest import quads, rationals

mpmath.mp.prec = 200


def hp(x):
    """200-bit evaluation, the independent oracle for comparisons."""
    if isinstance(x, QuadExt):
        return mpmath.mpf(x.rat.numerator) / x.rat.denominator + \
            mpmath.mpf(x.irr.numerator) / x.irr.denominator * mpmath.sqrt(x.m)
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


@pytest.mark.parametrize("x, expected", [
    (QuadExt(Fraction(3, 2), 0), 1),
    (QuadExt(0, 1), 1),
    (QuadExt(3, -2), 0),
])
def test_floor_examples(x, expected):
    assert floor_quad(x) == expected


def test_floor_by_squaring():
    # 1 <= sqrt2 < 2 and 2 < 2 sqrt2 < 3, decided by 1 <= 2 < 4 and 4 < 8 < 9
    assert floor_quad(QuadExt(0, 1, 2)) == math.isqrt(2)
    assert floor_quad(QuadExt(0, 2, 2)) == math.isqrt(8)
    assert floor_quad(QuadExt(3, -2, 2)) == 3 - math.isqrt(8) - 1


@pytest.mark.parametrize("x, y, expected", [
    (QuadExt(1, 1), QuadExt(2, 0), 1),
    (QuadExt(0, 0), QuadExt(0, 0), 0),
    (QuadExt(3, 0), QuadExt(0, 2), 1),
])
def test_compare_examples(x, y, expected):
    assert compare_quad(x, y) == expected


@settings(max_examples=400)
@given(quads())
def test_floor_brackets(x):
    f = floor_quad(x)
    assert compare_quad(QuadExt(f, 0, x.m), x) <= 0
    assert compare_quad(x, QuadExt(f + 1, 0, x.m)) < 0
    assert ceil_quad(x) == -floor_quad(-x)


@settings(max_examples=400)
@given(st.integers(2, 5).filter(lambda m: m != 4).flatmap(lambda m: st.tuples(quads(m), quads(m))))
def test_compare_agrees_with_high_precision(pair):
    x, y = pair
    ref = hp(x) - hp(y)
    expected = 0 if x == y else (1 if ref > 0 else -1)
    assert compare_quad(x, y) == expected


@given(st.sampled_from((2, 3, 5)).flatmap(lambda m: st.tuples(quads(m), quads(m), quads(m))))
def test_field_axioms(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if a != 0:
        assert a * (1 / a) == 1


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        QuadExt(0, 1, 2) + QuadExt(0, 1, 3)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.sampled_from((2, 3, 5, 7)),
       st.integers(1, 1000))
def test_integer_pair_helpers(a, b, m, d):
    x = QuadExt(a, b, m)
    assert sign_qi(a, b, m) == sign(x)
    assert floor_qi(a, b, m, d) == floor_quad(x / d)


def test_floor_interval_no_integer_inside():
    assert floor_interval(CertifiedInterval(Fraction(21, 10), Fraction(11, 5))) == 2


def test_floor_interval_integral_value():
    # value exactly 2: the refiner closes in on it from both sides and lo reaches 2
    state = {"w": Fraction(1, 100)}

    def refine(iv):
        state["w"] /= 10
        lo = 2 if state["w"] < Fraction(1, 10**4) else 2 - state["w"]
        return CertifiedInterval(Fraction(lo), 2 + state["w"])

    assert floor_interval(CertifiedInterval(Fraction(199, 100), Fraction(201, 100)), refine) == 2


def test_floor_interval_budget_exhausted():
    # true value 2 - 10^-9 but the refiner never gets below that resolution
    def refine(iv):
        return CertifiedInterval(Fraction(1999, 1000), Fraction(2001, 1000))

    with pytest.raises(AmbiguousFloor):
        floor_interval(CertifiedInterval(Fraction(199, 100), Fraction(201, 100)), refine, budget=20)


@given(st.fractions(min_value=0, max_value=100, max_denominator=50), rationals)
def test_sqrt_interval_refines(x, off):
    iv, refine = sqrt_interval(x, off)
    for _ in range(4):
        assert hp(iv.lo) <= hp(off) + mpmath.sqrt(hp(x)) <= hp(iv.hi)
        nxt = refine(iv)
        assert nxt.width <= iv.width
        iv = nxt


@given(quads())
def test_json_round_trip(x):
    back = scalar_from_json(scalar_to_json(x), x.m)
    assert back == x
