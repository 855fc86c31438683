import itertools
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from cgclosure import linalg as la
from cgclosure.numeric import QuadExt, floor_quad

int_lists = st.lists(st.integers(-60, 60), min_size=1, max_size=5)


@given(int_lists)
def test_bezout_identity(ints):
    g, u = la.bezout(ints)
    assert g >= 0
    assert sum(a * b for a, b in zip(u, ints)) == g
    assert all(x % g == 0 for x in ints) if g else all(x == 0 for x in ints)


def test_bezout_example():
    assert la.bezout([6, 10, 15]) == (1, [-14, 7, 1])


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=3))
def test_column_unimodular(rows):
    cols, r = la.column_unimodular(rows, 3)
    U = [[cols[j][i] for j in range(3)] for i in range(3)]
    det = (U[0][0] * (U[1][1] * U[2][2] - U[1][2] * U[2][1])
           - U[0][1] * (U[1][0] * U[2][2] - U[1][2] * U[2][0])
           + U[0][2] * (U[1][0] * U[2][1] - U[1][1] * U[2][0]))
    assert abs(det) == 1
    assert r == la.rank([[Fraction(x) for x in row] for row in rows])
    for c in cols[r:]:
        assert all(sum(a * b for a, b in zip(row, c)) == 0 for row in rows)


fr = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@given(st.lists(st.tuples(fr, fr, st.fractions(min_value=-2, max_value=2, max_denominator=3)),
                min_size=1, max_size=6),
       st.tuples(st.integers(-9, 9), st.integers(-9, 9)), st.integers(-20, 20))
def test_int_frame_matches_direct(rows, c, k):
    pts = [(QuadExt(a, s, 2), b) for a, b, s in rows]
    frame = la.IntFrame(pts)
    mx = max(la.dot(c, p) for p in pts)
    assert frame.floor_max(c) == floor_quad(mx)
    assert frame.exceeds(c, k) == (mx > k)


def test_lattice_points_in_ball_matches_enumeration():
    basis = [(Fraction(1), Fraction(0)), (Fraction(1, 2), Fraction(1))]
    got = {tuple(k) for k in la.lattice_points_in_ball(basis, Fraction(5))}
    want = set()
    for k in itertools.product(range(-6, 7), repeat=2):
        v = la.add(la.scale(k[0], basis[0]), la.scale(k[1], basis[1]))
        if la.norm_sq(v) < 5:
            want.add(k)
    assert got == want
