import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cgclosure import geometry as geo
from cgclosure.numeric import QuadExt

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIELDS = (2, 3, 5)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=4)


@st.composite
def quads(draw, m=None, elements=rationals):
    m = draw(st.sampled_from(FIELDS)) if m is None else m
    return QuadExt(draw(elements), draw(elements), m)


def random_polytope(rng: random.Random, n: int, R: int = 4, D: int = 2, quad: bool = False, npts=None):
    """Full-dimensional random polytope from n + 2 small random points (retrying degenerate draws)."""
    while True:
        pts = []
        for _ in range(npts or n + 2):
            v = [Fraction(rng.randint(-R, R), rng.randint(1, D)) for _ in range(n)]
            if quad:
                v[0] = v[0] + QuadExt(0, Fraction(rng.randint(-2, 2), rng.randint(1, 3)))
            pts.append(tuple(v))
        P = geo.from_vertices(pts)
        if P.dim == n and (not quad or not P.is_rational):
            return P


@pytest.fixture
def rng():
    return random.Random(20261016)
