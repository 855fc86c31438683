"""Kronecker approximation for vectors over Q(sqrt m).

Every entry of ``pi`` lies in Q(sqrt m), so ``1, pi_1, ..., pi_n`` span a
Q-space of dimension at most two. With ``pi_p`` the first irrational entry,
each ``pi_j = sigma_j + rho_j * pi_p`` with rational ``rho_j, sigma_j``; after
clearing denominators by ``m*`` this is the integer dependency
``m* pi_j = n_j + n_{j,p} pi_p`` and the dense subspace is the line spanned
by ``e~ = m* e_p + sum_j n_{j,p} e_j``. Approximants come from the
continued-fraction convergents ``h/k`` of ``pi_p``: ``a = h e~ + k n``,
``N = m* k`` gives ``a - N pi = (h - k pi_p) e~``, and consecutive
convergents land on opposite sides of 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from . import linalg as la
from .errors import BudgetExhausted, InputError
from .numeric import QuadExt, exact_vector, field_of, floor_quad, is_rational, sign, to_fraction

DEFAULT_MAX_ITER = 10_000


@dataclass(frozen=True)
class KroneckerSubspace:
    field: int | None
    pivot: int | None          # index p of the irrational basis entry
    m_star: int
    n_jp: tuple                # n_{j,p} per coordinate (0 at the pivot)
    n_j: tuple                 # n_j per coordinate (0 at the pivot)
    generators: tuple          # the e~ vectors (one, or none for rational pi)
    pi_tilde: tuple
    k: int                     # number of irrational basis entries besides 1

    @property
    def dim(self) -> int:
        return len(self.generators)

    def equations(self):
        """Integer rows r with r.x = 0 defining V."""
        n = len(self.n_j)
        if self.pivot is None:
            return [tuple(int(i == j) for i in range(n)) for j in range(n)]
        rows = []
        for j in range(n):
            if j == self.pivot:
                continue
            r = [0] * n
            r[j] = self.m_star
            r[self.pivot] -= self.n_jp[j]
            rows.append(tuple(r))
        return rows

    def contains(self, x) -> bool:
        return all(la.dot(r, x) == 0 for r in self.equations())


class Approximant(NamedTuple):
    a: tuple
    N: int
    residual: tuple            # a - N pi
    norm_sq: object            # ||a - N pi||^2, exact


def _check_pi(pi):
    pi = exact_vector(pi)
    if la.is_zero(pi):
        raise InputError("pi must be nonzero")
    fields = {field_of(x) for x in pi} - {None}
    if len(fields) > 1:
        raise InputError("pi mixes quadratic fields")
    return pi


def dense_subspace(pi) -> KroneckerSubspace:
    pi = _check_pi(pi)
    n = len(pi)
    if all(is_rational(x) for x in pi):
        m_star = la.lcm_denominators(pi)
        n_j = tuple(int(to_fraction(x) * m_star) for x in pi)
        zero = tuple(0 for _ in range(n))
        return KroneckerSubspace(None, None, m_star, zero, n_j, (), zero, 0)
    p = next(i for i, x in enumerate(pi) if not is_rational(x))
    base = pi[p]
    rho, sigma = [], []
    for j, x in enumerate(pi):
        if j == p:
            rho.append(Fraction(1))
            sigma.append(Fraction(0))
            continue
        xq = x if isinstance(x, QuadExt) else QuadExt(x, 0, base.m)
        r = xq.irr / base.irr
        rho.append(r)
        sigma.append(xq.rat - r * base.rat)
    m_star = la.lcm_denominators([r for j, r in enumerate(rho) if j != p]
                                 + [s for j, s in enumerate(sigma) if j != p])
    n_jp = tuple(0 if j == p else int(rho[j] * m_star) for j in range(n))
    n_j = tuple(0 if j == p else int(sigma[j] * m_star) for j in range(n))
    e = [n_jp[j] for j in range(n)]
    e[p] = m_star
    pi_tilde = tuple(m_star * pi[j] - n_j[j] for j in range(n))
    sub = KroneckerSubspace(base.m, p, m_star, n_jp, n_j, (tuple(e),), pi_tilde, 1)
    assert sub.contains(tuple(e)) and sub.contains(pi_tilde)
    return sub


def convergents(x):
    """Continued-fraction convergents (h, k) of a quadratic irrational x."""
    h1, h2, k1, k2 = 1, 0, 0, 1
    while True:
        a = floor_quad(x)
        h, k = a * h1 + h2, a * k1 + k2
        yield h, k
        h2, h1, k2, k1 = h1, h, k1, k
        x = 1 / (x - a)


def approximants(pi, N0: int = 0, max_iter: int = DEFAULT_MAX_ITER, sub=None):
    """Successive pairs (a, N) with N > N0 and shrinking residuals a - N pi."""
    pi = _check_pi(pi)
    sub = sub or dense_subspace(pi)
    n = len(pi)
    if sub.pivot is None:
        step = sub.m_star
        j = N0 // step + 1
        for _ in range(max_iter):
            N = step * j
            a = tuple(int(to_fraction(x) * N) for x in pi)
            yield Approximant(a, N, tuple(Fraction(0) for _ in range(n)), Fraction(0))
            j += 1
        return
    p = sub.pivot
    for i, (h, k) in enumerate(convergents(pi[p])):
        if i >= max_iter:
            return
        N = sub.m_star * k
        if k <= 0 or N <= N0:
            continue
        a = tuple(sub.m_star * h if j == p else sub.n_jp[j] * h + sub.n_j[j] * k
                  for j in range(n))
        res = tuple(a[j] - N * pi[j] for j in range(n))
        yield Approximant(a, N, res, la.norm_sq(res))


def approximate(pi, eps, N0: int = 0, max_iter: int = DEFAULT_MAX_ITER) -> Approximant:
    """Some N > N0 and integer a with ||a - N pi|| < eps, checked exactly."""
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    for ap in approximants(pi, N0, max_iter):
        if sign(ap.norm_sq - eps * eps) < 0:
            return ap
    raise BudgetExhausted(f"no approximant within {eps} after {max_iter} convergents")


@dataclass(frozen=True)
class BalancedFamily:
    approximants: tuple
    lambdas: tuple             # positive, summing to 1, annihilating the residuals

    @property
    def k(self) -> int:
        return len(self.approximants)

    def combination(self):
        n = len(self.approximants[0].residual)
        out = [Fraction(0)] * n
        for lam, ap in zip(self.lambdas, self.approximants):
            for i in range(n):
                out[i] = out[i] + lam * ap.residual[i]
        return tuple(out)


def balanced_families(pi, eps, N0: int = 0, max_iter: int = DEFAULT_MAX_ITER):
    """Successive families whose residuals have 0 in the relative interior of their hull."""
    eps = Fraction(eps)
    pi = _check_pi(pi)
    sub = dense_subspace(pi)
    small = (ap for ap in approximants(pi, N0, max_iter, sub)
             if sign(ap.norm_sq - eps * eps) < 0)
    if sub.pivot is None:
        for ap in small:
            yield BalancedFamily((ap,), (Fraction(1),))
        return
    p = sub.pivot
    prev = None
    for ap in small:
        if prev is not None:
            t1 = prev.residual[p] / sub.m_star
            t2 = ap.residual[p] / sub.m_star
            if sign(t1) * sign(t2) < 0:
                lam1 = t2 / (t2 - t1)
                lam2 = -t1 / (t2 - t1)
                yield BalancedFamily((prev, ap), (lam1, lam2))
        prev = ap


def sign_balanced_approximants(pi, eps, N0: int = 0, count: int | None = None,
                               max_iter: int = DEFAULT_MAX_ITER) -> BalancedFamily:
    sub = dense_subspace(pi)
    if count is not None and count != sub.dim + 1:
        raise InputError(f"need dim V + 1 = {sub.dim + 1} approximants, got {count}")
    for fam in balanced_families(pi, eps, N0, max_iter):
        return fam
    raise BudgetExhausted("no sign-balanced family within the iteration cap")
