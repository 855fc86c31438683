import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cgclosure import linalg as la
from cgclosure.errors import BudgetExhausted, InputError
from cgclosure.kronecker import (
    approximants,
    approximate,
    dense_subspace,
    sign_balanced_approximants,
)
from cgclosure.numeric import QuadExt, sign

from conftest import FIELDS

F = Fraction
R2 = QuadExt(0, 1, 2)
mpmath.mp.prec = 200


def mp(x):
    if isinstance(x, QuadExt):
        return mpmath.mpf(x.rat.numerator) / x.rat.denominator + \
            mpmath.mpf(x.irr.numerator) / x.irr.denominator * mpmath.sqrt(x.m)
    x = F(x)
    return mpmath.mpf(x.numerator) / x.denominator


def mp_norm(a, N, pi):
    return mpmath.sqrt(sum((ai - N * mp(p)) ** 2 for ai, p in zip(a, pi)))


def first_hit(pi, eps, N0, limit):
    """Smallest N in (N0, limit] with a rounded vector within eps (float oracle at 200 bits)."""
    for N in range(N0 + 1, limit + 1):
        a = tuple(int(mpmath.nint(N * mp(p))) for p in pi)
        if mp_norm(a, N, pi) < mp(eps):
            return a, N
    return None


def test_dense_subspace_sqrt2():
    sub = dense_subspace((R2,))
    assert sub.dim == 1 and sub.equations() == []


def test_dense_subspace_dependency():
    sub = dense_subspace((R2, 1 + R2))
    assert (sub.m_star, sub.n_j[1], sub.n_jp[1]) == (1, 1, 1)
    assert sub.equations() == [(-1, 1)]
    assert sub.pi_tilde == (R2, R2)


def test_dense_subspace_rational():
    sub = dense_subspace((F(1, 2), F(1, 3)))
    assert sub.dim == 0 and sub.m_star == 6


def test_approximate_sqrt2():
    ap = approximate((R2,), F(1, 100), 0)
    assert (ap.a, ap.N) == ((99,), 70)
    assert 99 ** 2 - 2 * 70 ** 2 == 1
    assert sign(ap.norm_sq - F(1, 100) ** 2) < 0
    assert first_hit((R2,), F(1, 100), 0, 100) == ((99,), 70)


def test_approximate_rational():
    ap = approximate((F(1, 2), F(1, 3)), F(1, 1000), 5)
    assert (ap.a, ap.N) == ((3, 2), 6) and ap.norm_sq == 0


def test_approximate_dependent_pair():
    pi = (R2, 1 + R2)
    ap = approximate(pi, F(1, 10), 0)
    # the first convergent inside the ball; the 200-bit scan finds the same smallest N
    assert (ap.a, ap.N) == ((17, 29), 12)
    assert first_hit(pi, F(1, 10), 0, 40) == ((17, 29), 12)
    # the later convergent (41, 70)/29 is also a witness
    later = [p for p in approximants(pi) if p.N == 29][0]
    assert later.a == (41, 70) and sign(later.norm_sq - F(1, 100)) < 0


def test_approximate_errors():
    with pytest.raises(InputError):
        approximate((0, 0), F(1, 10))
    with pytest.raises(InputError):
        approximate((R2,), 0)
    with pytest.raises(BudgetExhausted):
        approximate((R2,), F(1, 10**40), max_iter=5)


def test_sign_balanced_sqrt2():
    fam = sign_balanced_approximants((R2,), F(1, 10), count=2)
    r1, r2 = (ap.residual[0] for ap in fam.approximants)
    assert sign(r1) * sign(r2) < 0
    assert fam.combination() == (0,)
    assert sum(fam.lambdas) == 1 and all(sign(l) > 0 for l in fam.lambdas)


def test_sign_balanced_examples():
    # 41 - 29 sqrt2 < 0 < 99 - 70 sqrt2
    assert 41 ** 2 < 2 * 29 ** 2 and 99 ** 2 > 2 * 70 ** 2
    fam = sign_balanced_approximants((F(1, 2), F(1, 3)), 1)
    assert fam.k == 1 and fam.lambdas == (1,)
    fam = sign_balanced_approximants((R2, 1 + R2), F(1, 10))
    assert [ap.a for ap in fam.approximants] == [(17, 29), (41, 70)]
    for ap in fam.approximants:
        t = ap.residual[0]
        assert ap.residual == (t, t)
    with pytest.raises(InputError):
        sign_balanced_approximants((R2,), F(1, 10), count=3)


def test_residuals_shrink():
    res = [abs(mp(ap.residual[0])) for _, ap in zip(range(25), approximants((R2,)))]
    assert all(b < a for a, b in zip(res, res[1:]))


@st.composite
def targets(draw):
    m = draw(st.sampled_from(FIELDS))
    n = draw(st.integers(1, 3))
    el = st.fractions(min_value=-5, max_value=5, max_denominator=6)
    pi = [QuadExt(draw(el), draw(el), m) for _ in range(n)]
    if all(p.irr == 0 for p in pi):
        pi[0] = QuadExt(pi[0].rat, F(1), m)
    eps = F(1, draw(st.integers(2, 10**4)))
    return tuple(pi), eps, draw(st.integers(0, 500))


@given(targets())
def test_approximate_property(t):
    pi, eps, N0 = t
    ap = approximate(pi, eps, N0)
    assert ap.N > N0
    assert all(isinstance(a, int) for a in ap.a)
    assert ap.norm_sq == la.norm_sq(la.sub(ap.a, la.scale(ap.N, pi)))
    assert sign(ap.norm_sq - eps * eps) < 0
    assert mp_norm(ap.a, ap.N, pi) < mp(eps)


@given(targets())
def test_sign_balanced_property(t):
    pi, eps, N0 = t
    fam = sign_balanced_approximants(pi, eps, N0)
    assert fam.combination() == tuple(0 for _ in pi)
    assert all(sign(l) > 0 for l in fam.lambdas) and sum(fam.lambdas) == 1
    assert all(ap.N > N0 and sign(ap.norm_sq - eps * eps) < 0 for ap in fam.approximants)
    sub = dense_subspace(pi)
    assert fam.k == sub.dim + 1
    assert all(sub.contains(ap.residual) for ap in fam.approximants)


def test_hundred_random_targets():
    rng = random.Random(100)
    for i in range(100):
        m = FIELDS[i % 3]
        pi = tuple(QuadExt(F(rng.randint(-9, 9), rng.randint(1, 5)),
                           F(rng.randint(1, 9), rng.randint(1, 5)) * rng.choice((1, -1)), m)
                   for _ in range(rng.randint(1, 3)))
        eps = F(1, rng.randint(2, 10**5))
        N0 = rng.randint(0, 1000)
        ap = approximate(pi, eps, N0)
        assert ap.N > N0 and sign(la.norm_sq(la.sub(ap.a, la.scale(ap.N, pi))) - eps * eps) < 0
