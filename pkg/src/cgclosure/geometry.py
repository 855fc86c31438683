"""Exact polytopes over Q or Q(sqrt m) in small dimension.

A :class:`Polytope` always carries both descriptions: its vertex list and its
relative facets plus affine-hull equations. H-to-V conversion is incremental
half-space insertion (double description with the combinatorial adjacency
test); V-to-H conversion enumerates candidate facet hyperplanes through
affinely independent vertex subsets, which is fine at desk scale.
"""
from __future__ import annotations

import functools
import math
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import NamedTuple

from . import linalg as la
from .errors import DegenerateFace, InputError, IrrationalSubspace, OnBoundary, Unbounded
from .numeric import (
    QuadExt,
    ceil_quad,
    floor_qi,
    floor_quad,
    compare_quad,
    exact,
    exact_vector,
    field_of,
    is_rational,
    lower,
    sign,
    sign_qi,
    sqrt_lower,
    sqrt_upper,
    to_fraction,
    upper,
)

log = logging.getLogger(__name__)


class Halfspace(NamedTuple):
    normal: tuple
    rhs: object

    def value(self, x):
        return la.dot(self.normal, x) - self.rhs


def _cmp_vec(u, v):
    for a, b in zip(u, v):
        c = compare_quad(a, b)
        if c:
            return c
    return 0


vec_key = functools.cmp_to_key(_cmp_vec)


def positive_lower(x, bits=64) -> Fraction:
    """A rational 0 < q <= x for a positive scalar x."""
    if sign(x) <= 0:
        raise ValueError("expected a positive value")
    while True:
        lo = lower(x, bits)
        if lo > 0:
            return lo
        bits *= 2


def norm_upper(v) -> Fraction:
    return sqrt_upper(upper(la.norm_sq(v)))


def norm_lower(v) -> Fraction:
    return sqrt_lower(lower(la.norm_sq(v)))


def normalize_halfspace(a, b) -> Halfspace:
    """Positive rescaling: primitive integer normal if rational, else first nonzero = +-1."""
    a = tuple(a)
    if la.is_zero(a):
        return Halfspace(a, b)
    if la.is_rational_vector(a):
        fa = [to_fraction(x) for x in a]
        prim = la.primitive_integer(fa)
        i = next(i for i, x in enumerate(prim) if x)
        t = Fraction(prim[i]) / fa[i]
        return Halfspace(tuple(Fraction(x) for x in prim), t * b)
    i = next(i for i, x in enumerate(a) if x != 0)
    t = abs(a[i])
    return Halfspace(tuple(x / t for x in a), b / t)


# -- affine subspaces --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AffineSubspace:
    n: int
    point: tuple
    basis: tuple                   # lineality basis (rref rows)
    equations: tuple               # Halfspaces read as equalities

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_rational(self) -> bool:
        return (la.is_rational_vector(self.point)
                and all(la.is_rational_vector(b) for b in self.basis)
                and all(la.is_rational_vector(e.normal) and is_rational(e.rhs)
                        for e in self.equations))

    def contains(self, x) -> bool:
        return all(e.value(x) == 0 for e in self.equations)

    @functools.cached_property
    def projector(self):
        return la.projector(list(self.basis), self.n)

    def project_direction(self, v):
        """Orthogonal projection of a vector onto the lineality space."""
        return la.apply(self.projector, v)

    def project_point(self, x):
        return la.add(self.point, self.project_direction(la.sub(x, self.point)))

    @staticmethod
    def whole(n: int) -> "AffineSubspace":
        basis = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
        return AffineSubspace(n, tuple(Fraction(0) for _ in range(n)), basis, ())


def affine_hull(points, n=None):
    points = [tuple(p) for p in points]
    if not points:
        return None
    n = len(points[0]) if n is None else n
    p0 = points[0]
    diffs = [la.sub(p, p0) for p in points[1:]]
    diffs = [d for d in diffs if not la.is_zero(d)]
    basis, _ = la.rref(diffs, n) if diffs else ([], [])
    basis = tuple(tuple(r) for r in basis)
    eqs = []
    for a in la.nullspace(list(basis), n):
        h = normalize_halfspace(a, la.dot(a, p0))
        eqs.append(h)
    return AffineSubspace(n, p0, basis, tuple(eqs))


# -- polytopes ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Polytope:
    n: int
    vertices: tuple
    facets: tuple = ()
    hull: AffineSubspace | None = None

    @staticmethod
    def empty(n: int) -> "Polytope":
        return Polytope(n, (), (), None)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def dim(self) -> int:
        return -1 if self.is_empty else self.hull.dim

    @property
    def equations(self):
        return () if self.hull is None else self.hull.equations

    def inequalities(self):
        """Full H-description: facets plus both sides of every equation."""
        out = list(self.facets)
        for e in self.equations:
            out.append(e)
            out.append(Halfspace(tuple(-x for x in e.normal), -e.rhs))
        return out

    @property
    def field(self):
        for v in self.vertices:
            for x in v:
                f = field_of(x)
                if f is not None:
                    return f
        return None

    @property
    def is_rational(self) -> bool:
        return all(la.is_rational_vector(v) for v in self.vertices)

    def key(self):
        return tuple(self.vertices)

    def same_as(self, other: "Polytope") -> bool:
        return self.n == other.n and self.key() == other.key()

    def contains(self, x) -> bool:
        if self.is_empty:
            return False
        return (all(sign(h.value(x)) <= 0 for h in self.facets)
                and all(h.value(x) == 0 for h in self.equations))

    def contains_polytope(self, other: "Polytope") -> bool:
        return all(self.contains(v) for v in other.vertices)

    def support(self, c):
        """(max c.x, indices of maximizing vertices)."""
        if self.is_empty:
            raise InputError("support of an empty polytope")
        vals = [la.dot(c, v) for v in self.vertices]
        best = vals[0]
        for x in vals[1:]:
            if x > best:
                best = x
        return best, tuple(i for i, x in enumerate(vals) if x == best)

    def minimum(self, c):
        v, idx = self.support(tuple(-x for x in c))
        return -v, idx

    def on_boundary(self, x) -> bool:
        """x (assumed in the polytope) lies on the relative boundary."""
        return any(h.value(x) == 0 for h in self.facets) or self.dim == 0

    def intersect(self, halfspaces, equations=()) -> "Polytope":
        return dual_description(hrep=list(self.inequalities()) + list(halfspaces),
                                equations=equations, n=self.n)

    def barycenter(self):
        k = len(self.vertices)
        return tuple(sum((v[i] for v in self.vertices), Fraction(0)) / k for i in range(self.n))


# -- double description --------------------------------------------------------

def _dd(ineqs, n, box):
    """Insert half-spaces into the box [-box, box]^n. Returns [(point, tightset)]."""
    verts = []
    for signs in product((1, -1), repeat=n):
        p = tuple(Fraction(s * box) for s in signs)
        t = frozenset(-(2 * i + 1) if s > 0 else -(2 * i + 2) for i, s in enumerate(signs))
        verts.append((p, t))
    for idx, (a, b) in enumerate(ineqs):
        vals = [la.dot(a, p) - b for p, _ in verts]
        sg = [sign(x) for x in vals]
        if all(s <= 0 for s in sg):
            if any(s == 0 for s in sg):
                verts = [(p, t | {idx}) if s == 0 else (p, t) for (p, t), s in zip(verts, sg)]
            continue
        if all(s > 0 for s in sg):
            return []
        ins = [i for i, s in enumerate(sg) if s < 0]
        outs = [i for i, s in enumerate(sg) if s > 0]
        new = []
        for i in ins:
            ti = verts[i][1]
            for j in outs:
                common = ti & verts[j][1]
                if len(common) < n - 1:
                    continue
                if any(k != i and k != j and common <= verts[k][1] for k in range(len(verts))):
                    continue
                t = vals[i] / (vals[i] - vals[j])
                pi, pj = verts[i][0], verts[j][0]
                x = tuple(a_ + t * (b_ - a_) for a_, b_ in zip(pi, pj))
                new.append((x, common | {idx}))
        kept = []
        for (p, t), s in zip(verts, sg):
            if s < 0:
                kept.append((p, t))
            elif s == 0:
                kept.append((p, t | {idx}))
        verts = kept + new
    return verts


def _axis_box(ineqs, n):
    """A box size when every coordinate is bounded by axis-parallel inequalities."""
    lo = [None] * n
    hi = [None] * n
    for a, b in ineqs:
        nz = [i for i, x in enumerate(a) if x != 0]
        if len(nz) != 1:
            continue
        i = nz[0]
        bound = b / a[i]
        if sign(a[i]) > 0:
            hi[i] = bound if hi[i] is None or bound < hi[i] else hi[i]
        else:
            lo[i] = bound if lo[i] is None or bound > lo[i] else lo[i]
    if any(x is None for x in lo + hi):
        return None
    m = max(max(abs(ceil_quad(x)), abs(ceil_quad(-x))) for x in lo + hi)
    return m + 1


def dual_description(hrep=None, vrep=None, equations=(), n=None) -> Polytope:
    """Build a polytope from inequalities (normal, rhs) [+ equations] or from points."""
    if vrep is not None:
        return _from_vertices(vrep, n)
    ineqs = [(exact_vector(a), exact(b)) for a, b in hrep]
    for a, b in equations:
        a, b = exact_vector(a), exact(b)
        ineqs.append((a, b))
        ineqs.append((tuple(-x for x in a), -b))
    if n is None:
        if not ineqs:
            raise InputError("cannot infer dimension from an empty description")
        n = len(ineqs[0][0])
    clean = []
    for a, b in ineqs:
        if la.is_zero(a):
            if sign(b) < 0:
                return Polytope.empty(n)
            continue
        clean.append((a, b))
    # axis-parallel inequalities first: bounds the working polytope quickly
    clean.sort(key=lambda ab: sum(1 for x in ab[0] if x != 0))
    box = _axis_box(clean, n)
    if box is None:
        rec = _dd([(a, Fraction(0)) for a, _ in clean], n, 1)
        if any(not la.is_zero(p) for p, _ in rec):
            raise Unbounded("inequalities admit a recession direction")
        box = 64
        while True:
            verts = _dd(clean, n, box)
            if not any(min(t, default=0) < 0 for _, t in verts):
                break
            box *= 4
    else:
        verts = _dd(clean, n, box)
        if any(min(t, default=0) < 0 for _, t in verts):
            raise AssertionError("axis box was not large enough")
    if not verts:
        return Polytope.empty(n)
    points = sorted({p for p, _ in verts}, key=vec_key)
    hull = affine_hull(points, n)
    facets = _facets_from_tight_sets(clean, points)
    return Polytope(n, tuple(points), facets, hull)


def _facets_from_tight_sets(ineqs, points):
    allv = frozenset(range(len(points)))
    by_set = {}
    for a, b in ineqs:
        s = frozenset(i for i, p in enumerate(points) if la.dot(a, p) == b)
        if s and s != allv and s not in by_set:
            by_set[s] = normalize_halfspace(a, b)
    sets = sorted(by_set, key=len, reverse=True)
    maximal = []
    for s in sets:
        if not any(s < m for m in maximal):
            maximal.append(s)
    facets = [by_set[s] for s in maximal]
    facets.sort(key=lambda h: vec_key(h.normal))
    return tuple(facets)


def _from_vertices(points, n=None) -> Polytope:
    pts = sorted({exact_vector(p) for p in points}, key=vec_key)
    if not pts:
        if n is None:
            raise InputError("cannot infer dimension from an empty vertex list")
        return Polytope.empty(n)
    n = len(pts[0]) if n is None else n
    hull = affine_hull(pts, n)
    k = hull.dim
    if k == 0:
        return Polytope(n, (pts[0],), (), hull)
    _, coords = la.rref([list(b) for b in hull.basis], n)
    proj = [tuple(p[c] for c in coords) for p in pts]
    allv = frozenset(range(len(pts)))
    cands = {}
    if k == 1:
        vals = [q[0] for q in proj]
        lo = min(vals)
        hi = max(vals)
        cands[frozenset(i for i, v in enumerate(vals) if v == hi)] = ((Fraction(1),), hi)
        cands[frozenset(i for i, v in enumerate(vals) if v == lo)] = ((Fraction(-1),), -lo)
    else:
        for combo in combinations(range(len(pts)), k):
            q0 = proj[combo[0]]
            diffs = [la.sub(proj[c], q0) for c in combo[1:]]
            ns = la.nullspace(diffs, k)
            if len(ns) != 1:
                continue
            a = ns[0]
            b = la.dot(a, q0)
            vals = [la.dot(a, q) - b for q in proj]
            sg = [sign(v) for v in vals]
            if all(s <= 0 for s in sg):
                pass
            elif all(s >= 0 for s in sg):
                a = tuple(-x for x in a)
                b = -b
            else:
                continue
            tight = frozenset(i for i, s in enumerate(sg) if s == 0)
            if tight != allv and tight not in cands:
                cands[tight] = (a, b)
    facets = []
    tight_sets = []
    for tight, (a, b) in cands.items():
        full = [Fraction(0)] * n
        for c, x in zip(coords, a):
            full[c] = x
        facets.append(normalize_halfspace(full, b))
        tight_sets.append((tight, a))
    # vertices: points whose tight facet normals have full rank k
    verts = []
    for i, p in enumerate(pts):
        normals = [a for t, a in tight_sets if i in t]
        if normals and la.rank(normals) == k:
            verts.append(p)
    facets.sort(key=lambda h: vec_key(h.normal))
    return Polytope(n, tuple(verts), tuple(facets), hull)


def from_vertices(points, n=None) -> Polytope:
    return _from_vertices(points, n)


def from_inequalities(ineqs, equations=(), n=None) -> Polytope:
    return dual_description(hrep=ineqs, equations=equations, n=n)


# -- faces ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Face:
    parent: Polytope
    normal: tuple
    offset: object
    vertex_subset: tuple

    @property
    def is_proper(self) -> bool:
        return len(self.vertex_subset) < len(self.parent.vertices)

    @functools.cached_property
    def polytope(self) -> Polytope:
        return _from_vertices([self.parent.vertices[i] for i in self.vertex_subset], self.parent.n)


def pi_face(P: Polytope, pi) -> Face:
    pi = tuple(pi)
    if la.is_zero(pi):
        raise InputError("face normal must be nonzero")
    val, idx = P.support(pi)
    return Face(P, pi, val, idx)


def facets_as_faces(P: Polytope):
    return [pi_face(P, h.normal) for h in P.facets]


def face_stability_margin(P: Polytope, F: Face) -> Fraction:
    """A rational eps2 > 0 such that unit(pi') within eps2 of unit(pi) has its
    pi'-face inside F.

    For a non-face vertex w with normalized slack g_w = (pi0 - pi.w)/|pi| and
    the nearest face vertex v, u'.(v - w) >= g_w - eps*|v - w| > 0. So the
    minimum of g_w / min_v |v - w| is a valid margin; bounds are rounded down.
    """
    if not F.is_proper:
        raise DegenerateFace("face equals the polytope; no margin needed")
    pi_norm = norm_upper(F.normal)
    inside = [P.vertices[i] for i in F.vertex_subset]
    best = None
    for j, w in enumerate(P.vertices):
        if j in F.vertex_subset:
            continue
        slack = F.offset - la.dot(F.normal, w)
        g = positive_lower(slack) / pi_norm
        dist = min(norm_upper(la.sub(v, w)) for v in inside)
        cand = g / dist
        best = cand if best is None or cand < best else best
    return best


# -- lattices ------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectedLattice:
    """D = proj_W(Z^n) with integral preimages, and L = Z^n cap W^perp."""
    basis: tuple          # rational vectors in W
    preimages: tuple      # integer vectors, proj_W(preimages[i]) == basis[i]
    complement: tuple     # integer basis of Z^n cap W^perp
    projector: tuple = field(repr=False, default=())

    def coefficients(self, d):
        """Integer coordinates of d in the basis, or None if d is not in D."""
        if not self.basis:
            return () if la.is_zero(d) else None
        sol = la.solve_any([list(col) for col in zip(*self.basis)], list(d))
        if sol is None or any(to_fraction(s).denominator != 1 for s in sol):
            return None
        if la.apply([list(col) for col in zip(*self.basis)], sol) != tuple(d):
            return None
        return tuple(int(s) for s in sol)

    def preimage(self, d):
        k = self.coefficients(d)
        if k is None:
            raise InputError(f"{d} is not in the projected lattice")
        return self.combine_preimages(k)

    def combine_preimages(self, coeffs):
        n = len(self.projector)
        out = [0] * n
        for c, pre in zip(coeffs, self.preimages):
            for i in range(n):
                out[i] += c * pre[i]
        return tuple(out)

    def point(self, coeffs):
        n = len(self.projector)
        out = [Fraction(0)] * n
        for c, b in zip(coeffs, self.basis):
            for i in range(n):
                out[i] += c * b[i]
        return tuple(out)


def projected_lattice(V: AffineSubspace) -> ProjectedLattice:
    if not V.is_rational:
        raise IrrationalSubspace("projected lattice needs a rational subspace")
    n = V.n
    rows = [la.primitive_integer(b) for b in V.basis]
    proj = la.projector(list(V.basis), n)
    if not rows:
        eye = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return ProjectedLattice((), (), eye, tuple(proj))
    cols, r = la.column_unimodular(rows, n)
    pre = [cols[j] for j in range(r)]
    basis = [la.apply(proj, u) for u in pre]
    basis, pre = la.lll(basis, pre)
    comp = [cols[j] for j in range(r, n)]
    if comp:
        comp, _ = la.lll([tuple(Fraction(x) for x in c) for c in comp])
        comp = [tuple(int(x) for x in c) for c in comp]
    return ProjectedLattice(tuple(basis), tuple(tuple(int(x) for x in p) for p in pre),
                            tuple(comp), tuple(proj))


# -- interior radius -------------------------------------------------------------

def interior_radius(v, K, V: AffineSubspace) -> Fraction:
    """Rational r > 0 with the ball of radius r around v inside V contained in K."""
    poly = K if isinstance(K, Polytope) else getattr(K, "polytope", None)
    if poly is None:
        return K.interior_radius(v, V)
    if not poly.contains(v):
        raise InputError("point is not in the body")
    best = None
    for h in poly.facets:
        slack = h.rhs - la.dot(h.normal, v)
        if slack == 0:
            raise OnBoundary("point lies on the relative boundary")
        p = V.project_direction(h.normal)
        if la.is_zero(p):
            continue
        r = positive_lower(slack) / norm_upper(p)
        best = r if best is None or r < best else best
    if poly.dim == 0:
        raise OnBoundary("a point body has empty relative interior")
    return Fraction(1) if best is None else best


# -- lattice points of polytopes ------------------------------------------------------

def _eliminate_last(rows):
    """Fourier-Motzkin: project integer rows (a, b) meaning a.t <= b onto all but the last variable."""
    pos, neg, out = [], [], set()
    for a, b in rows:
        if a[-1] > 0:
            pos.append((a, b))
        elif a[-1] < 0:
            neg.append((a, b))
        else:
            out.add((a[:-1], b))
    for ap, bp in pos:
        for an, bn in neg:
            u, w = -an[-1], ap[-1]
            a = tuple(u * x + w * y for x, y in zip(ap[:-1], an[:-1]))
            b = u * bp + w * bn
            g = math.gcd(*a, b) if any(a) else 0
            if g > 1:
                a, b = tuple(x // g for x in a), b // g
            out.add((a, b))
    return sorted(out)


def _int_interval(rows, prefix):
    """Integer range of the next variable given the fixed prefix, or None if empty."""
    lo = hi = None
    for a, b in rows:
        last = a[-1]
        rest = b - sum(x * y for x, y in zip(a, prefix))
        if last == 0:
            if rest < 0:
                return None
        elif last > 0:
            t = rest // last
            hi = t if hi is None or t < hi else hi
        else:
            t = -(rest // -last)
            lo = t if lo is None or t > lo else lo
    if lo is None or hi is None:
        raise Unbounded("integer points of an unbounded region")
    return (lo, hi) if lo <= hi else None


def integer_points(ineqs, k: int):
    """Integer vectors t with a.t <= b for all (a, b), a bounded polyhedron in R^k.

    The first coordinate ranges over the projection of the polytope (one
    vertex enumeration); later coordinates over exact fibers read from
    Fourier-Motzkin projections, so no empty fiber is visited."""
    ineqs = [(exact_vector(a), exact(b)) for a, b in ineqs]
    if k == 0:
        return [()] if all(sign(b) >= 0 for _, b in ineqs) else []
    Q = dual_description(hrep=ineqs, n=k)
    if Q.is_empty:
        return []
    first = range(ceil_quad(min(v[0] for v in Q.vertices)),
                  floor_quad(max(v[0] for v in Q.vertices)) + 1)
    if not all(is_rational(x) for a, b in ineqs for x in a + (b,)):
        # irrational data: box scan with exact fibers on the last coordinate,
        # rows scaled to integer pairs (rational part, sqrt(m) part)
        m = next(x.m for a, b in ineqs for x in a + (b,) if not is_rational(x))
        qrows = []
        for a, b in ineqs:
            vals = [x if isinstance(x, QuadExt) else QuadExt(x, 0, m) for x in a + (b,)]
            den = la.lcm_denominators([v.rat for v in vals] + [v.irr for v in vals])
            qrows.append(([(int(v.rat * den), int(v.irr * den)) for v in vals[:-1]],
                          (int(vals[-1].rat * den), int(vals[-1].irr * den))))
        ranges = [range(ceil_quad(min(v[j] for v in Q.vertices)),
                        floor_quad(max(v[j] for v in Q.vertices)) + 1)
                  for j in range(k - 1)]
        out = []
        for prefix in product(*ranges):
            lo = hi = None
            for a, (R, S) in qrows:
                for (p_, q_), t in zip(a, prefix):
                    R -= p_ * t
                    S -= q_ * t
                p_, q_ = a[-1]
                if p_ == 0 and q_ == 0:
                    if sign_qi(R, S, m) < 0:
                        break
                    continue
                # (R + S r) / (p + q r) = (X + Y r) / Z
                X, Y, Z = R * p_ - S * q_ * m, S * p_ - R * q_, p_ * p_ - q_ * q_ * m
                if Z < 0:
                    X, Y, Z = -X, -Y, -Z
                if sign_qi(p_, q_, m) > 0:
                    t = floor_qi(X, Y, m, Z)
                    hi = t if hi is None or t < hi else hi
                else:
                    t = -floor_qi(-X, -Y, m, Z)
                    lo = t if lo is None or t > lo else lo
            else:
                if lo is not None and hi is not None and lo <= hi:
                    out.extend(prefix + (t,) for t in range(lo, hi + 1))
        return out
    rows = []
    for a, b in ineqs:
        m = la.lcm_denominators(list(a) + [b])
        rows.append((tuple(int(x * m) for x in a), int(b * m)))
    systems = {k: rows}
    for j in range(k - 1, 1, -1):
        systems[j] = _eliminate_last(systems[j + 1])
    out = []

    def walk(prefix):
        j = len(prefix)
        if j == k:
            out.append(prefix)
            return
        iv = _int_interval(systems[j + 1], prefix)
        if iv is None:
            return
        for t in range(iv[0], iv[1] + 1):
            walk(prefix + (t,))

    for t0 in first:
        if k == 1:
            out.append((t0,))
        else:
            walk((t0,))
    return out
