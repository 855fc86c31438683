"""Chvátal-Gomory cuts, cut pools and the deepest-cut search.

Restricted to a rational affine subspace V (with lineality W), a cut
``c.x <= floor(h_K(c))`` reads ``d.x <= floor(h_K(c)) - (c - d).x0`` with
``d = proj_W(c)``. Preimages of a fixed ``d`` differ by the lattice
``L = Z^n cap W^perp``; the search below walks L and certifies the minimum
of the restricted right-hand side in one of three ways:

* the cut already empties P (nothing deeper matters);
* the value reached the least point of its discrete grid that exceeds
  ``max_{K cap V} d.y - 1``, a hard lower bound for every preimage;
* every lattice point of the sublevel region that could still beat the
  incumbent has been enumerated (the region is a bounded polytope).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import geometry as geo
from . import linalg as la
from .body import as_body
from .errors import InputError, NoCutNeeded, Unbounded
from .numeric import QuadExt, floor_quad

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CGCut:
    c: tuple
    rhs: int
    certified: bool = field(default=True, compare=False)
    source: str = field(default="", compare=False)

    def __post_init__(self):
        if not all(isinstance(x, int) for x in self.c):
            raise InputError("cut normals must be integer")

    @property
    def halfspace(self) -> geo.Halfspace:
        return geo.Halfspace(tuple(Fraction(x) for x in self.c), Fraction(self.rhs))

    def satisfied_by(self, x) -> bool:
        return la.dot(self.c, x) <= self.rhs

    def to_json(self) -> dict:
        return {"c": list(self.c), "rhs": self.rhs, "certified": self.certified}

    @staticmethod
    def from_json(obj) -> "CGCut":
        return CGCut(tuple(int(x) for x in obj["c"]), int(obj["rhs"]),
                     bool(obj.get("certified", True)))


class CutPool:
    """At most one cut per normal; the smallest right-hand side wins."""

    def __init__(self, cuts=(), source: str = ""):
        self.source = source
        self._cuts: dict[tuple, CGCut] = {}
        for c in cuts:
            self.add(c)

    def add(self, cut: CGCut) -> bool:
        old = self._cuts.get(cut.c)
        if old is not None and old.rhs <= cut.rhs:
            return False
        self._cuts[cut.c] = cut
        return True

    def extend(self, cuts) -> int:
        return sum(self.add(c) for c in cuts)

    def __iter__(self):
        return iter(self._cuts[k] for k in sorted(self._cuts))

    def __len__(self):
        return len(self._cuts)

    def __contains__(self, cut):
        return cut.c in self._cuts and self._cuts[cut.c].rhs == cut.rhs

    def get(self, c):
        return self._cuts.get(tuple(c))

    def remove(self, c):
        self._cuts.pop(tuple(c), None)

    def copy(self) -> "CutPool":
        p = CutPool(source=self.source)
        p._cuts = dict(self._cuts)
        return p

    def halfspaces(self):
        return [c.halfspace for c in self]

    def polytope(self, n: int) -> geo.Polytope:
        return geo.dual_description(hrep=self.halfspaces(), n=n)

    def to_json(self):
        return [c.to_json() for c in self]


def cg_cut(K, c, source: str = "cg") -> CGCut:
    c = tuple(int(x) for x in c)
    if la.is_zero(c):
        raise InputError("the zero normal gives only the trivial cut 0 <= 0")
    K = as_body(K)
    return CGCut(c, K.floor_support(c), True, source)


# -- deepest cut ---------------------------------------------------------------

@dataclass(frozen=True)
class DeepestCut:
    cut: CGCut
    direction: tuple
    restricted_rhs: object
    certified: bool
    separates: bool            # the cut removes at least one vertex of P
    how: str                   # certification route or "best_found"
    searched: int

    def to_json(self) -> dict:
        out = self.cut.to_json()
        out.update({"d": [geo_str(x) for x in self.direction],
                    "restricted_rhs": geo_str(self.restricted_rhs),
                    "how": self.how, "searched": self.searched})
        return out


def geo_str(x) -> str:
    from .numeric import scalar_to_json
    v = scalar_to_json(x)
    return v if isinstance(v, str) else f"{v[0]}+({v[1]})sqrt"


def _grid_target(offset, step, lower_bound):
    """Least value offset + step*k strictly above lower_bound - 1."""
    k = floor_quad((lower_bound - 1 - offset) / step) + 1
    return offset + step * k


def _split_constant(K, L, x0):
    """Rebase L as (L1, L0) with every b in L0 constant on K and equal to that constant at x0.

    Along L0 the restricted rhs only changes through a fractional part, which
    the periodic argmin settles exactly; the search then runs over L1 alone."""
    poly = getattr(K, "polytope", None)
    if poly is None or not L:
        return L, []
    y0 = poly.vertices[0]
    rows = []
    for y in list(poly.vertices[1:]) + [x0]:
        w = la.sub(y, y0)
        vals = [la.dot(b, w) for b in L]
        rat = [v.rat if isinstance(v, QuadExt) else Fraction(v) for v in vals]
        irr = [v.irr if isinstance(v, QuadExt) else Fraction(0) for v in vals]
        for row in (rat, irr):
            if any(row):
                rows.append(la.primitive_integer(row))
    k = len(L)
    if not rows:
        return [], L
    cols, r = la.column_unimodular(rows, k)
    if r == k:
        return L, []
    n = len(L[0])

    def comb(t):
        return tuple(sum(tj * b[i] for tj, b in zip(t, L)) for i in range(n))

    return [comb(t) for t in cols[:r]], [comb(t) for t in cols[r:]]


def _search(P, K, d, c0, x0, lattice_L, cap, kv, exclude_zero=False):
    K = as_body(K)
    n = len(d)
    L = [tuple(b) for b in lattice_L]
    L1, L0 = _split_constant(K, L, x0)
    k = len(L1)

    def combo(t):
        c = list(c0)
        for tj, b in zip(t, L1):
            if tj:
                for i in range(n):
                    c[i] += tj * b[i]
        if L0:
            s_ = _periodic_argmin(K, tuple(c), x0, L0)
            for sj, b in zip(s_, L0):
                if sj:
                    for i in range(n):
                        c[i] += sj * b[i]
        return tuple(c)

    seen = set()
    best = None
    count = 0

    def visit(t):
        nonlocal best, count
        if t in seen:
            return
        seen.add(t)
        c = combo(t)
        if exclude_zero and la.is_zero(c):
            return
        count += 1
        fl = K.floor_support(c)
        r = fl - la.dot(la.sub(c, d), x0)
        key = (r, sum(abs(x) for x in c), c)
        if best is None or (r < best[0]) or (r == best[0] and key[1:] < best[3:]):
            best = (r, c, fl, key[1], key[2])

    min_p, _ = P.minimum(d)
    step = la.rational_gcd([Fraction(1)] + [la.dot(b, x0) for b in L])
    lb_poly = kv if kv is not None and not kv.is_empty else P
    lb = lb_poly.support(d)[0] if not la.is_zero(d) else Fraction(0)
    target = _grid_target(-la.dot(la.sub(c0, d), x0), step, lb)

    def certified():
        if best is None:
            return None
        if best[0] < min_p:
            return "empties"
        if best[0] <= target:
            return "grid_bound"
        return None

    if k == 0:
        visit(())
        how = ("periodic" if L0 else "unique_preimage") if best else None
        return best, how, count

    region_done = False
    b = 1
    prev = -1
    how = None
    while True:
        for t in product(range(-b, b + 1), repeat=k):
            if max(abs(x) for x in t) > prev:
                visit(t)
        how = certified()
        if how:
            break
        if not region_done and best is not None:
            region_done = True
            box = _sublevel_box(K, c0, d, x0, L1, best[0])
            if box is not None and _box_size(box) <= 200_000:
                for t in product(*[range(lo, hi + 1) for lo, hi in box]):
                    visit(t)
                how = certified() or "sublevel_enumerated"
                break
        if b >= cap:
            break
        prev = b
        b *= 2
    return best, how, count


def _periodic_argmin(K, c0, x0, L):
    """Exact minimizer when every b in L is constant on K and takes the same value at x0.

    Then h_K(c0 + Lt) = h_K(c0) + t.beta and the restricted rhs is
    h - frac(h + t.beta) - const, so the task is to maximize a fractional
    part over the group t.beta + Z = (1/q) Z."""
    poly = getattr(K, "polytope", None)
    if poly is None:
        return None
    y0 = poly.vertices[0]
    beta = []
    for b in L:
        v = la.dot(b, y0)
        if la.dot(b, x0) != v or any(la.dot(b, y) != v for y in poly.vertices[1:]):
            return None
        beta.append(Fraction(v))
    Q = la.lcm_denominators(beta)
    ints = [int(x * Q) for x in beta] + [Q]
    G, u = la.bezout(ints)
    q = Q // G
    h = poly.support(c0)[0] if not la.is_zero(c0) else Fraction(0)
    u0 = (h - floor_quad(h)) * q
    j = (q - 1 - floor_quad(u0)) % q
    t = [j * x for x in u[:-1]]
    t = [((x + q // 2) % q) - q // 2 for x in t]
    if all(x == 0 for x in t) and (la.is_zero(c0)):
        t[0] = q
    return tuple(t)


def _box_size(box):
    out = 1
    for lo, hi in box:
        out *= max(hi - lo + 1, 0)
    return out


def _sublevel_box(K, c0, d, x0, L, incumbent):
    """Integer bounding box of {t : G(c0 + L t) <= incumbent + 1}, or None if unbounded."""
    poly = getattr(K, "polytope", None)
    if poly is None:
        return None
    dx0 = la.dot(la.sub(c0, d), x0)
    ineqs = []
    for y in poly.vertices:
        diff = la.sub(y, x0)
        a = tuple(la.dot(b, diff) for b in L)
        rhs = incumbent + 1 - la.dot(c0, y) + dx0
        ineqs.append((a, rhs))
    try:
        region = geo.dual_description(hrep=ineqs, n=len(L))
    except Unbounded:
        return None
    if region.is_empty:
        return [(0, -1)] * len(L)
    box = []
    for j in range(len(L)):
        vals = [v[j] for v in region.vertices]
        box.append((-floor_quad(-min(vals)), floor_quad(max(vals))))
    return box


def _restricted_setup(P, V):
    if P.is_empty:
        raise InputError("deepest cut needs a nonempty polytope")
    V = V if V is not None else P.hull
    return V, geo.projected_lattice(V)


def body_cap_subspace(K, V):
    """K intersected with V when K is a polytope (gives the sharper lower bound)."""
    poly = getattr(as_body(K), "polytope", None)
    if poly is None or V is None:
        return None
    return poly.intersect([], equations=V.equations)


def deepest_cut(P: geo.Polytope, d, x0, K, search_bound: int = 64, V=None,
                lattice=None, K_cap_V=None, strict: bool = False, c0=None) -> DeepestCut:
    """Deepest CG cut among integral preimages of the lattice direction d.

    ``search_bound`` caps the doubling preimage search. ``strict`` raises
    NoCutNeeded when the best cut does not remove any vertex of P."""
    d = tuple(Fraction(x) for x in d)
    if la.is_zero(d):
        raise InputError("direction must be nonzero; use zero_direction_cut")
    V, lat = (V, lattice) if lattice is not None else _restricted_setup(P, V)
    if K_cap_V is None:
        K_cap_V = body_cap_subspace(K, V)
    if c0 is None:
        c0 = lat.preimage(d)
    best, how, count = _search(P, K, d, c0, x0, lat.complement, search_bound, K_cap_V)
    return _finish(P, d, best, how, count, strict)


def zero_direction_cut(P: geo.Polytope, x0, K, search_bound: int = 64, V=None,
                       lattice=None, K_cap_V=None, strict: bool = False) -> DeepestCut:
    """Deepest cut whose normal is orthogonal to V (restricted form 0 <= rhs)."""
    V, lat = (V, lattice) if lattice is not None else _restricted_setup(P, V)
    n = P.n
    d = tuple(Fraction(0) for _ in range(n))
    if K_cap_V is None:
        K_cap_V = body_cap_subspace(K, V)
    if not lat.complement:
        raise NoCutNeeded("V is full-dimensional; no normal projects to zero")
    best, how, count = _search(P, K, d, tuple(0 for _ in range(n)), x0, lat.complement,
                               search_bound, K_cap_V, exclude_zero=True)
    return _finish(P, d, best, how, count, strict)


def _finish(P, d, best, how, count, strict):
    if best is None:
        raise NoCutNeeded("no admissible preimage found")
    r, c, fl = best[0], best[1], best[2]
    max_p, _ = P.support(d) if not la.is_zero(d) else (Fraction(0), ())
    separates = r < max_p
    certified = how is not None
    if strict and not separates:
        raise NoCutNeeded("the deepest cut is implied by P")
    cut = CGCut(tuple(int(x) for x in c), fl, certified, "deepest")
    return DeepestCut(cut, d, r, certified, separates, how or "best_found", count)
