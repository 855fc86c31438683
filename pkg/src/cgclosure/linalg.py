"""Small exact linear algebra over Q and Q(sqrt m), plus integer lattice helpers.

Everything works on tuples/lists of scalars; sizes are tiny (n <= 4-ish), so
plain Gaussian elimination is the right tool.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

from .numeric import is_rational, sqrt_upper, to_fraction


def dot(u, v):
    s = Fraction(0)
    for a, b in zip(u, v):
        if a and b:
            s = a * b + s
    return s


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(t, v):
    return tuple(t * a for a in v)


def norm_sq(v):
    return dot(v, v)


def is_zero(v) -> bool:
    return all(x == 0 for x in v)


def rref(rows, ncols=None):
    """Reduced row echelon form. Returns (rows, pivot_columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        if isinstance(p, int):
            p = Fraction(p)
        rows[r] = [x / p if x else Fraction(0) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b if b else a for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows, n):
    """Basis of {x : rows @ x = 0} in R^n."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    red, piv = rref(rows, n)
    free = [j for j in range(n) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, p in zip(red, piv):
            v[p] = -r[f]
        basis.append(tuple(v))
    return basis


def solve(a, b):
    """Unique solution of a x = b, or None if singular/inconsistent."""
    n = len(a[0])
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    red, piv = rref(aug, n + 1)
    if n in piv or len(piv) < n:
        return None
    x = [Fraction(0)] * n
    for r, p in zip(red, piv):
        x[p] = r[n]
    return tuple(x)


def solve_any(a, b):
    """Some solution of a x = b (free variables zero), or None."""
    n = len(a[0])
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    red, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for r, p in zip(red, piv):
        x[p] = r[n]
    return tuple(x)


def inverse(a):
    n = len(a)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [tuple(r[n:]) for r in red]


def projector(basis, n):
    """Orthogonal projection matrix onto span(basis) (rows of the result)."""
    if not basis:
        return [tuple(Fraction(0) for _ in range(n)) for _ in range(n)]
    g = [[dot(u, v) for v in basis] for u in basis]
    gi = inverse(g)
    k = len(basis)
    # P = B^T G^-1 B
    tmp = [[sum((gi[i][j] * basis[j][c] for j in range(k)), Fraction(0)) for c in range(n)]
           for i in range(k)]
    return [tuple(sum((basis[i][r] * tmp[i][c] for i in range(k)), Fraction(0)) for c in range(n))
            for r in range(n)]


def apply(mat, v):
    return tuple(dot(row, v) for row in mat)


def is_rational_vector(v) -> bool:
    return all(is_rational(x) for x in v)


def lcm_denominators(values) -> int:
    out = 1
    for x in values:
        d = Fraction(to_fraction(x)).denominator
        out = out * d // math.gcd(out, d)
    return out


def primitive_integer(v):
    """Scale a rational vector to a primitive integer vector (same direction)."""
    v = [to_fraction(x) for x in v]
    den = lcm_denominators(v)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def rational_gcd(values) -> Fraction:
    """Positive generator of the additive group sum(Z * v) of rationals (0 if all zero)."""
    g = Fraction(0)
    for v in values:
        v = abs(Fraction(v))
        if v == 0:
            continue
        if g == 0:
            g = v
            continue
        den = g.denominator * v.denominator // math.gcd(g.denominator, v.denominator)
        g = Fraction(math.gcd(int(g * den), int(v * den)), den)
    return g


# -- integer lattices --------------------------------------------------------

def bezout(ints):
    """(g, u) with g = gcd(ints) >= 0 and sum(u_i * ints_i) = g."""
    g, u = 0, [0] * len(ints)
    for i, x in enumerate(ints):
        # extended Euclid on (g, x)
        a, b, sa, sb, ta, tb = g, x, 1, 0, 0, 1
        while b:
            q = a // b
            a, b = b, a - q * b
            sa, sb = sb, sa - q * sb
            ta, tb = tb, ta - q * tb
        if a < 0:
            a, sa, ta = -a, -sa, -ta
        u = [sa * y for y in u]
        u[i] = ta
        g = a
    return g, u


def column_unimodular(a, n):
    """For an integer matrix ``a`` (rows of length n) return a unimodular U with
    a @ U = [H | 0], H of full column rank r. Returns (U columns, r)."""
    cols = [[int(i == j) for i in range(n)] for j in range(n)]  # columns of U
    work = [[a[i][j] for i in range(len(a))] for j in range(n)]  # columns of a@U
    r = 0
    for row in range(len(a)):
        # eliminate entries work[j][row] for j >= r using column Euclid
        while True:
            nz = [j for j in range(r, n) if work[j][row] != 0]
            if len(nz) <= 1:
                break
            jmin = min(nz, key=lambda j: abs(work[j][row]))
            for j in nz:
                if j == jmin:
                    continue
                q = work[j][row] // work[jmin][row]
                work[j] = [x - q * y for x, y in zip(work[j], work[jmin])]
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[jmin])]
        nz = [j for j in range(r, n) if work[j][row] != 0]
        if nz:
            j = nz[0]
            work[r], work[j] = work[j], work[r]
            cols[r], cols[j] = cols[j], cols[r]
            r += 1
            if r == n:
                break
    return [tuple(c) for c in cols], r


def lll(basis, extra=None, delta=Fraction(3, 4)):
    """Exact LLL reduction of rational basis vectors. ``extra`` holds vectors
    that receive the same unimodular operations (e.g. integral preimages)."""
    b = [list(v) for v in basis]
    ex = [list(v) for v in extra] if extra is not None else None
    k = len(b)
    if k <= 1:
        return [tuple(v) for v in b], ([tuple(v) for v in ex] if ex is not None else None)

    def gso():
        bs, mu = [], [[Fraction(0)] * k for _ in range(k)]
        for i in range(k):
            v = list(b[i])
            for j in range(i):
                mu[i][j] = dot(b[i], bs[j]) / dot(bs[j], bs[j])
                v = [x - mu[i][j] * y for x, y in zip(v, bs[j])]
            bs.append(v)
        return bs, mu

    bs, mu = gso()
    i = 1
    while i < k:
        for j in range(i - 1, -1, -1):
            q = round(mu[i][j])
            if q:
                b[i] = [x - q * y for x, y in zip(b[i], b[j])]
                if ex is not None:
                    ex[i] = [x - q * y for x, y in zip(ex[i], ex[j])]
                bs, mu = gso()
        if dot(bs[i], bs[i]) >= (delta - mu[i][i - 1] ** 2) * dot(bs[i - 1], bs[i - 1]):
            i += 1
        else:
            b[i], b[i - 1] = b[i - 1], b[i]
            if ex is not None:
                ex[i], ex[i - 1] = ex[i - 1], ex[i]
            bs, mu = gso()
            i = max(i - 1, 1)
    return [tuple(v) for v in b], ([tuple(v) for v in ex] if ex is not None else None)


def lattice_points_in_ball(basis, radius_sq):
    """Integer coefficient vectors k with ||sum k_i b_i||^2 < radius_sq."""
    k = len(basis)
    if k == 0:
        return [()]
    g = [[dot(u, v) for v in basis] for u in basis]
    gi = inverse(g)
    r2 = Fraction(radius_sq)
    bounds_ = [int(sqrt_upper(r2 * gi[j][j])) + 1 for j in range(k)]
    out = []
    for coeffs in product(*[range(-bb, bb + 1) for bb in bounds_]):
        q = sum((coeffs[i] * coeffs[j] * g[i][j] for i in range(k) for j in range(k)), Fraction(0))
        if q < r2:
            out.append(coeffs)
    return out


class IntFrame:
    """Points over Q or one Q(sqrt m), scaled to a common denominator.

    Coordinates become integer pairs (rational part, sqrt(m) part), so dot
    products with integer vectors and their floors need no Fractions."""

    def __init__(self, points):
        from .numeric import QuadExt
        flat = [x for p in points for x in p]
        quads = [x for x in flat if isinstance(x, QuadExt) and x.irr != 0]
        self.m = quads[0].m if quads else None
        rat = [x.rat if isinstance(x, QuadExt) else Fraction(x) for x in flat]
        irr = [x.irr if isinstance(x, QuadExt) else Fraction(0) for x in flat]
        self.den = lcm_denominators(rat + irr) if flat else 1
        k = len(points[0]) if points else 0
        self.rows = [tuple(int(r * self.den) for r in rat[i * k:(i + 1) * k]) for i in range(len(points))]
        self.irr_rows = ([tuple(int(r * self.den) for r in irr[i * k:(i + 1) * k]) for i in range(len(points))]
                         if self.m else None)

    def dots(self, c):
        """Numerators of c.p (c an integer vector); divide by self.den. Rational frames only."""
        return [sum(ci * ri for ci, ri in zip(c, r)) for r in self.rows]

    def max_dot(self, c) -> Fraction:
        return Fraction(max(self.dots(c)), self.den)

    def floor_max(self, c) -> int:
        """floor of max_p c.p, exact."""
        from .numeric import floor_qi
        if not self.m:
            return max(self.dots(c)) // self.den
        return max(floor_qi(sum(ci * ri for ci, ri in zip(c, r)),
                            sum(ci * si for ci, si in zip(c, s)), self.m, self.den)
                   for r, s in zip(self.rows, self.irr_rows))

    def exceeds(self, c, rhs: int) -> bool:
        """Whether max_p c.p > rhs."""
        from .numeric import sign_qi
        t = rhs * self.den
        if not self.m:
            return max(self.dots(c)) > t
        return any(sign_qi(sum(ci * ri for ci, ri in zip(c, r)) - t,
                           sum(ci * si for ci, si in zip(c, s)), self.m) > 0
                   for r, s in zip(self.rows, self.irr_rows))
