import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgclosure import geometry as geo
from cgclosure import linalg as la
from cgclosure.body import Ball, PolytopeBody, polytope_body
from cgclosure.closure import (
    ClosureConfig,
    ClosureResult,
    brute_force_closure,
    cg_closure,
    interior_direction_bound,
    verify_closure,
)
from cgclosure.cuts import CGCut
from cgclosure.errors import DimensionTooLarge, InputError
from cgclosure.numeric import QuadExt, is_rational

from conftest import random_polytope

F = Fraction
R2 = QuadExt(0, 1, 2)
SQ15 = [(0, 0), (F(3, 2), 0), (0, F(3, 2)), (F(3, 2), F(3, 2))]
UNIT = [(0, 0), (1, 0), (0, 1), (1, 1)]


def exact_floor(x):
    """floor(a + b sqrt m) with integer arithmetic only."""
    if not isinstance(x, QuadExt):
        return math.floor(F(x))
    q = x.rat.denominator * x.irr.denominator
    A, B = int(x.rat * q), int(x.irr * q)
    root = math.isqrt(B * B * x.m)
    fl_b = root if B >= 0 else -root - 1
    return (A + fl_b) // q


def naive_rhs(verts, c):
    vals = [sum((ci * vi for ci, vi in zip(c, v)), F(0)) for v in verts]
    return max(exact_floor(x) for x in vals)


def clip(poly, c, rhs):
    """Clip a convex polygon (exact points, in order) by c.x <= rhs."""
    out = []
    k = len(poly)
    for i in range(k):
        p, q = poly[i], poly[(i + 1) % k]
        fp = c[0] * p[0] + c[1] * p[1] - rhs
        fq = c[0] * q[0] + c[1] * q[1] - rhs
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def extreme_points(pts):
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return set(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    hull = []
    for seq in (pts, pts[::-1]):
        chain = []
        for p in seq:
            while len(chain) >= 2 and cross(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        hull += chain[:-1]
    return set(hull) if hull else {pts[0], pts[-1]}


def naive_closure_2d(verts, B):
    """Vertices of the intersection of all CG cuts with primitive normal, sup-norm <= B."""
    xs = [naive_rhs(verts, (1, 0)), -naive_rhs(verts, (-1, 0))]
    ys = [naive_rhs(verts, (0, 1)), -naive_rhs(verts, (0, -1))]
    if xs[0] < xs[1] or ys[0] < ys[1]:
        return set()
    poly = [(F(xs[1]), F(ys[1])), (F(xs[0]), F(ys[1])), (F(xs[0]), F(ys[0])), (F(xs[1]), F(ys[0]))]
    for c in itertools.product(range(-B, B + 1), repeat=2):
        if math.gcd(*c) != 1:
            continue
        poly = clip(poly, c, naive_rhs(verts, c))
        if not poly:
            return set()
    return extreme_points(poly)


def closure_bound(res):
    """Sup-norm scale at which the defining cuts reproduce the closure (3..64).

    Full-dimensional closures take the pool cut behind each facet; lower
    dimensional ones every cut tight at some vertex."""
    P = res.closure
    scale = 3
    if P.dim == P.n:
        for h in P.facets:
            for cut in res.defining_cuts:
                if la.rank([list(cut.c), list(h.normal)]) == 1 and \
                        sum(1 for v in P.vertices if la.dot(cut.c, v) == cut.rhs) >= 2:
                    scale = max(scale, max(abs(x) for x in cut.c))
                    break
    else:
        for cut in res.defining_cuts:
            if any(la.dot(cut.c, v) == cut.rhs for v in P.vertices):
                scale = max(scale, max(abs(x) for x in la.primitive_integer(cut.c)))
    return min(scale, 64)


def assert_matches_naive(res, verts):
    """Defining cuts are valid CG cuts (so K' lies inside the result), the naive
    truncated closure at the result's own normal scale B equals it, and every
    result vertex survives all CG cuts a little past B."""
    for cut in res.defining_cuts:
        assert cut.rhs >= naive_rhs(verts, cut.c), cut
    for v in res.closure.vertices:
        assert all(is_rational(x) for x in v)
    B = closure_bound(res)
    assert naive_closure_2d(verts, B) == vset(res.closure)
    B2 = 2 * B if B <= 16 else B + 4
    for c in itertools.product(range(-B2, B2 + 1), repeat=2):
        if math.gcd(*c) == 1:
            rhs = naive_rhs(verts, c)
            assert all(c[0] * v[0] + c[1] * v[1] <= rhs for v in res.closure.vertices)


def vset(P):
    return {tuple(v) for v in P.vertices}


def test_integral_square_fixed():
    res = cg_closure(polytope_body(UNIT))
    assert vset(res.closure) == set(UNIT) and res.certified


def test_square_three_halves():
    res = cg_closure(polytope_body(SQ15))
    assert vset(res.closure) == set(UNIT)
    assert res.certified
    assert_matches_naive(res, SQ15)
    orc = brute_force_closure(polytope_body(SQ15), 3)
    assert orc.polytope.same_as(res.closure) and orc.stable


def test_segment():
    res = cg_closure(polytope_body([(0, 0), (1, R2)]))
    assert vset(res.closure) == {(0, 0)}
    assert any(e["phase"] == "pin" for e in res.certificate_log)
    assert any(e["phase"] == "pin_certificate" and e["k"] == 2 for e in res.certificate_log)


def test_triangle():
    T = [(F(1, 2), F(1, 2)), (F(5, 2), F(1, 2)), (F(1, 2), F(5, 2))]
    res = cg_closure(polytope_body(T))
    assert vset(res.closure) == {(1, 1), (2, 1), (1, 2)}
    assert_matches_naive(res, T)
    orc = brute_force_closure(polytope_body(T), 4)
    assert orc.polytope.same_as(res.closure) and orc.stable


def test_empty_closure():
    K = polytope_body([(F(1, 3), F(1, 3)), (F(2, 3), F(1, 3)), (F(1, 3), F(2, 3))])
    res = cg_closure(K)
    assert res.is_empty
    assert brute_force_closure(K, 1).polytope.is_empty


def test_embedded_square_empty():
    h = F(1, 2)
    res = cg_closure(polytope_body([(0, 0, h), (1, 0, h), (0, 1, h), (1, 1, h)]))
    assert res.is_empty


def test_point_base_case():
    assert vset(cg_closure(polytope_body([(2, -1)])).closure) == {(2, -1)}
    assert cg_closure(polytope_body([(F(1, 2), 0)])).is_empty
    assert cg_closure(polytope_body([(R2, 0)])).is_empty


def test_dimension_guard():
    K = polytope_body([tuple(int(i == j) for j in range(5)) for i in range(5)] + [(0,) * 5])
    with pytest.raises(DimensionTooLarge):
        cg_closure(K)
    with pytest.raises(InputError):
        cg_closure(Ball((0, 0), 1))


def test_interior_direction_bound_examples():
    K = polytope_body(SQ15)
    whole = geo.AffineSubspace.whole(2)
    want = {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)}
    b = interior_direction_bound(geo.from_vertices([(F(1, 2), F(1, 2))]), K, whole)
    assert b.bound == 2 and {tuple(d) for d in b.candidates} == want
    b = interior_direction_bound(geo.from_vertices(UNIT), K, whole)
    assert b.bound == 2 and {tuple(d) for d in b.candidates} == want
    b = interior_direction_bound(geo.from_vertices([(0, 0), (F(3, 2), 0)]), K, whole)
    assert b.bound is None and b.candidates == ()


def test_ball_oracle():
    orc = brute_force_closure(Ball((0, 0), F(3, 2)), 1)
    got = {(c.c, c.rhs) for c in orc.cuts}
    want = {((1, 0), 1), ((-1, 0), 1), ((0, 1), 1), ((0, -1), 1),
            ((1, 1), 2), ((1, -1), 2), ((-1, 1), 2), ((-1, -1), 2)}
    assert got == want
    # (3/2 sqrt2) floors to 2: 4 <= 9/2 < 9
    assert 2 ** 2 <= F(9, 2) < 3 ** 2
    assert vset(orc.polytope) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}


def test_oracle_examples():
    assert vset(brute_force_closure(polytope_body(UNIT), 3).polytope) == set(UNIT)
    o = brute_force_closure(polytope_body(SQ15), 1)
    assert vset(o.polytope) == set(UNIT) and o.stable
    with pytest.raises(InputError):
        brute_force_closure(polytope_body(UNIT), 0)


def test_verify_passes_and_adversarial():
    K = polytope_body(SQ15)
    res = cg_closure(K)
    assert verify_closure(res, K, 6).passed
    # dropping a defining cut leaves a larger polytope than the oracle's
    pool = res.defining_cuts.copy()
    pool.remove((1, 0))
    loose = ClosureResult(res.body, pool.polytope(2), pool, [], res.recursion_tree)
    rep = verify_closure(loose, K, 6)
    assert not rep.checks["closure_in_oracle"][0]
    # an extra cut x1 <= 0 shrinks the closure below the true one
    pool = res.defining_cuts.copy()
    pool.add(CGCut((1, 0), 0))
    tight = ClosureResult(res.body, pool.polytope(2), pool, [], res.recursion_tree)
    rep = verify_closure(tight, K, 6)
    assert not rep.passed and not rep.info["oracle_in_closure"]


def test_result_json_round_trip():
    K = polytope_body(SQ15)
    res = cg_closure(K)
    back = ClosureResult.from_json(res.to_json(), K)
    assert back.closure.same_as(res.closure)
    assert [c.c for c in back.defining_cuts] == [c.c for c in res.defining_cuts]
    assert verify_closure(back, K, 4).passed


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_random_polygon_exact(seed):
    P = random_polytope(random.Random(seed), 2, R=3, D=3)
    res = cg_closure(PolytopeBody(P))
    assert res.certified
    assert_matches_naive(res, P.vertices)
    assert P.contains_polytope(res.closure) if not res.is_empty else True
    for face, sub in res.faces():
        cut_face = res.closure.intersect([], equations=face.polytope.equations) \
            if not res.is_empty else res.closure
        assert cut_face.same_as(sub.closure)


@settings(max_examples=6)
@given(st.integers(0, 10**6))
def test_random_quad_polygon_rational(seed):
    P = random_polytope(random.Random(seed), 2, R=3, quad=True)
    res = cg_closure(PolytopeBody(P))
    assert res.certified
    assert_matches_naive(res, P.vertices)


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_integral_fixed_point(seed):
    rng = random.Random(seed)
    while True:
        P = geo.from_vertices([tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(5)])
        if P.dim == 2:
            break
    assert cg_closure(PolytopeBody(P)).closure.same_as(P)


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_oracle_monotone(seed):
    K = PolytopeBody(random_polytope(random.Random(seed), 2, R=3, D=3))
    prev = None
    for B in (1, 2, 4, 8):
        cur = brute_force_closure(K, B, check_stable=False).polytope
        if prev is not None:
            assert cur.is_empty or prev.contains_polytope(cur)
        prev = cur


def test_config_is_frozen():
    cfg = ClosureConfig()
    with pytest.raises(Exception):
        cfg.max_rounds = 3
