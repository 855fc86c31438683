"""Face-recursive CG closure of polytopes, plus a brute-force oracle.

For a polytope K the closure K' is assembled in three layers:

1. every facet F is closed recursively, and the cuts defining F' are lifted
   to CG cuts of K (together with the facet inequality itself and the
   equations of aff(K)); the resulting polytope P satisfies P cap F = F';
2. vertices of P on the relative boundary of K are then already in K';
3. a vertex v at distance r from the boundary can only be cut by CG cuts
   whose normal projects onto the lineality space W of V = aff(P) with
   length below 1/r, so the deepest cut for each such projection is added
   until nothing changes.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import geometry as geo
from . import linalg as la
from .body import PolytopeBody, as_body
from .cuts import CGCut, CutPool, body_cap_subspace, cg_cut, deepest_cut, zero_direction_cut
from .errors import DimensionTooLarge, InputError, NoCutNeeded
from .homogeneity import lift_cut, pin_to_rational_subspace
from .numeric import (floor_quad, is_rational, rational_to_json, scalar_to_json, sign, to_fraction,
                      vector_from_json, vector_to_json)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClosureConfig:
    max_rounds: int = 100
    search_cap: int = 64
    max_dim: int = 4
    floor_budget: int = 256
    lift_families: int = 64


@dataclass
class ClosureResult:
    body: geo.Polytope
    closure: geo.Polytope
    defining_cuts: CutPool
    certificate_log: list = field(default_factory=list)
    recursion_tree: dict = field(default_factory=dict)   # facet key -> (Face, ClosureResult)
    certified: bool = True
    rounds: int = 0
    cap_hit: bool = False

    @property
    def is_empty(self) -> bool:
        return self.closure.is_empty

    def faces(self):
        """All (face polytope, result) pairs in the recursion tree, depth first."""
        for face, sub in self.recursion_tree.values():
            yield face, sub
            yield from sub.faces()

    def to_json(self) -> dict:
        return {
            "closure": polytope_to_json(self.closure),
            "cuts": self.defining_cuts.to_json(),
            "certified": self.certified,
            "rounds": self.rounds,
            "cap_hit": self.cap_hit,
            "certificate_log": self.certificate_log,
            "faces": [{"normal": vector_to_json(face.normal), "offset": scalar_to_json(face.offset),
                       "result": sub.to_json()}
                      for face, sub in self.recursion_tree.values()],
        }

    @staticmethod
    def from_json(obj: dict, body) -> "ClosureResult":
        """Rebuild a result written by to_json, for a body given separately."""
        P_K = body.polytope if hasattr(body, "polytope") else body
        n = P_K.n
        c = obj["closure"]
        if c.get("empty"):
            closure = geo.Polytope.empty(n)
        else:
            m = field_of_polytope(P_K)
            closure = geo.from_vertices([vector_from_json(v, m) for v in c["vertices"]], n)
        pool = CutPool([CGCut.from_json(x) for x in obj["cuts"]], source="closure")
        tree = {}
        for entry in obj.get("faces", []):
            face = geo.pi_face(P_K, vector_from_json(entry["normal"], field_of_polytope(P_K)))
            tree[face.polytope.key()] = (face, ClosureResult.from_json(entry["result"], face.polytope))
        return ClosureResult(P_K, closure, pool, list(obj.get("certificate_log", [])), tree,
                             bool(obj.get("certified", True)), int(obj.get("rounds", 0)),
                             bool(obj.get("cap_hit", False)))


def field_of_polytope(P: geo.Polytope) -> int:
    from .numeric import DEFAULT_FIELD, field_of
    fields = {field_of(x) for v in P.vertices for x in v} - {None}
    return fields.pop() if fields else DEFAULT_FIELD


def polytope_to_json(P: geo.Polytope) -> dict:
    if P.is_empty:
        return {"empty": True, "vertices": [], "inequalities": [], "equations": []}
    return {
        "empty": False,
        "vertices": [vector_to_json(v) for v in P.vertices],
        "inequalities": [{"normal": vector_to_json(h.normal), "rhs": scalar_to_json(h.rhs)}
                         for h in P.facets],
        "equations": [{"normal": vector_to_json(h.normal), "rhs": scalar_to_json(h.rhs)}
                      for h in P.equations],
    }


def _unit(n, i, s=1):
    return tuple(s if j == i else 0 for j in range(n))


def _box_cuts(K, n):
    return [cg_cut(K, _unit(n, i, s), "box") for i in range(n) for s in (1, -1)]


def _point_closure(P: geo.Polytope) -> ClosureResult:
    p = P.vertices[0]
    n = P.n
    K = PolytopeBody(P)
    bad = [i for i, x in enumerate(p) if not (is_rational(x) and to_fraction(x).denominator == 1)]
    pool = CutPool(source="point")
    if bad:
        i = bad[0]
        pool.extend([cg_cut(K, _unit(n, i, 1), "point"), cg_cut(K, _unit(n, i, -1), "point")])
        closure = geo.Polytope.empty(n)
    else:
        pool.extend(_box_cuts(K, n))
        closure = P
    entry = {"phase": "point", "point": vector_to_json(p), "integral": not bad}
    return ClosureResult(P, closure, pool, [entry])


def _lift_into(pool, log_list, K, face, c, delta, phase, config):
    cert = lift_cut(K, face, c, delta, config.lift_families)
    pool.extend(cert.cuts)
    log_list.append({"phase": phase, "face_normal": vector_to_json(face.normal),
                     "c": list(cert.c), "k": cert.k,
                     "cuts": [cut.to_json() for cut in cert.cuts],
                     "alpha": scalar_to_json(cert.alpha),
                     "lambdas": [scalar_to_json(x) for x in cert.lambdas]})
    return cert


def _boundary_phase(P_K, memo, config, pool, entries, tree):
    K = PolytopeBody(P_K)
    pinned = pin_to_rational_subspace(K)
    pool.extend(pinned)
    for cut in pinned:
        entries.append({"phase": "pin", "cut": cut.to_json()})
    for cert in pinned.certificates:
        entries.append({"phase": "pin_certificate", "pi": vector_to_json(cert.pi),
                        "k": cert.k, "alpha": scalar_to_json(cert.alpha)})
    for h in P_K.facets:
        face = geo.pi_face(P_K, h.normal)
        sub = _closure(face.polytope, memo, config)
        tree[face.polytope.key()] = (face, sub)
        _lift_into(pool, entries, K, face, (0,) * P_K.n, Fraction(0), "facet", config)
        vs = sub.closure.vertices
        for cut in sub.defining_cuts:
            if vs and not any(la.dot(cut.c, v) == cut.rhs for v in vs):
                continue
            delta, _ = face.polytope.support(cut.c)
            _lift_into(pool, entries, K, face, cut.c, delta, "boundary", config)
    return sub_certified(tree)


def sub_certified(tree) -> bool:
    return all(sub.certified for _, sub in tree.values())


def _rounded_point(P: geo.Polytope, V: geo.AffineSubspace):
    b = P.barycenter()
    rounded = tuple(Fraction(math.floor(to_fraction(x) + Fraction(1, 2))) for x in b)
    return V.project_point(rounded)


def interior_vertices(P: geo.Polytope, K_poly: geo.Polytope):
    return [v for v in P.vertices if not K_poly.on_boundary(v)]


@dataclass(frozen=True)
class DirectionBound:
    bound: Fraction | None           # B_D = max 1/r, None with no interior vertex
    radii: tuple                     # (vertex, r) pairs
    candidates: tuple                # d in D with ||d|| < B_D (0 included)


def interior_direction_bound(current: geo.Polytope, K, V: geo.AffineSubspace,
                             lattice=None) -> DirectionBound:
    K = as_body(K)
    poly = getattr(K, "polytope", None)
    verts = (interior_vertices(current, poly) if poly is not None
             else [v for v in current.vertices if _inside_smooth(K, v)])
    if not verts:
        return DirectionBound(None, (), ())
    radii = tuple((v, geo.interior_radius(v, poly if poly is not None else K, V)) for v in verts)
    bound = max(1 / r for _, r in radii)
    lattice = lattice or geo.projected_lattice(V)
    if lattice.basis:
        coeffs = la.lattice_points_in_ball(list(lattice.basis), bound * bound)
        cands = [lattice.point(k) for k in coeffs]
    else:
        cands = [tuple(Fraction(0) for _ in range(current.n))]
    zero = tuple(Fraction(0) for _ in range(current.n))
    if zero not in cands:
        cands.append(zero)
    cands.sort(key=lambda d: (la.norm_sq(d), geo.vec_key(d)))
    return DirectionBound(bound, radii, tuple(cands))


def _inside_smooth(K, v):
    try:
        K.interior_radius(v)
        return True
    except Exception:
        return False


def _same_subspace(a: geo.AffineSubspace, b: geo.AffineSubspace) -> bool:
    return (a.dim == b.dim and a.contains(b.point)
            and all(a.project_direction(v) == tuple(v) for v in b.basis))


def _polar_rows(v, kv: geo.Polytope, basis):
    """Rows (a, b) over lattice coefficients k with a.k < b for every vertex y of K cap V.

    Rows are integral when the data is rational; otherwise b = 1 and the
    closed set is used (a superset, which is harmless)."""
    rows, strict = [], True
    for y in kv.vertices:
        w = la.sub(y, v)
        row = [la.dot(b, w) for b in basis]
        if all(is_rational(g) for g in row):
            m = la.lcm_denominators(row)
            rows.append((tuple(int(g * m) for g in row), m))
        else:
            rows.append((tuple(row), 1))
            strict = False
    return rows, strict


def vertex_directions(v, kv: geo.Polytope, lattice: geo.ProjectedLattice):
    """Lattice coefficient vectors k whose direction d could cut the vertex v.

    Yields the points of the polar set {k : d.(y - v) < 1 for y in K cap V}
    in growing sup-norm shells, shortest first within a shell, so callers can
    stop at the first separating cut. The zero vector comes first."""
    basis = lattice.basis
    if not basis:
        yield ()
        return
    dim = len(basis)
    rows, strict = _polar_rows(v, kv, basis)
    Q = geo.dual_description(hrep=rows, n=dim)
    reach = max((abs(floor_quad(x)) + 1 for u in Q.vertices for x in u), default=0)
    gram = [[la.dot(a, b) for b in basis] for a in basis]

    def norm(k):
        return sum(k[i] * gram[i][j] * k[j] for i in range(dim) for j in range(dim))

    def ok(k):
        if not strict:
            return True
        return all(sum(ki * a for ki, a in zip(k, row)) < m for row, m in rows)

    prev, size = -1, 1
    while prev < reach:
        size = min(max(size, 1), reach)
        box = []
        for i in range(dim):
            e = tuple(int(i == j) for j in range(dim))
            box += [(e, size), (tuple(-x for x in e), size)]
        fresh = [k for k in geo.integer_points(rows + box, dim)
                 if max(abs(x) for x in k) > prev and ok(k)]
        fresh.sort(key=lambda k: (norm(k), k))
        yield from fresh
        prev, size = size, 2 * size


def _separates(cut: CGCut, v) -> bool:
    return sign(la.dot(cut.c, v) - cut.rhs) > 0


def _interior_phase(P_K, pool, entries, config):
    """Cut interior vertices of P until every one survives all CG cuts.

    Each interior vertex is examined with its candidate directions, shortest
    first, and abandoned at the first cut that removes it; a vertex that
    survives its full candidate set is in K' and is remembered while V stays
    the same. The loop ends when a round adds no cut."""
    K = PolytopeBody(P_K)
    n = P_K.n
    certified = True
    rounds = 0
    cap_hit = False
    P = pool.polytope(n)
    seen, survivors, seen_V = set(), set(), None
    kf = la.IntFrame(P_K.vertices)
    while not P.is_empty:
        if rounds >= config.max_rounds:
            cap_hit = True
            break
        rounds += 1
        V = P.hull
        lat = geo.projected_lattice(V)
        kv = body_cap_subspace(K, V)
        verts = interior_vertices(P, P_K)
        if not verts:
            break
        bound = max(1 / geo.interior_radius(v, P_K, V) for v in verts)
        x0 = _rounded_point(P, V)
        if seen_V is None or not _same_subspace(seen_V, V):
            # the restricted cut for d depends on V only, so a direction
            # handled earlier cannot separate the (smaller) current P
            seen, survivors, seen_V = set(), set(), V
        fast = not lat.complement
        pf = la.IntFrame(P.vertices)
        new_cuts = []

        def record(d, how, cut):
            new_cuts.append(cut)
            entries.append({"phase": "interior", "round": rounds,
                            "d": [rational_to_json(x) for x in d],
                            "bound": rational_to_json(bound),
                            "how": how, "cut": cut.to_json()})

        for v in verts:
            key = tuple(v)
            if key in survivors or any(_separates(c, v) for c in new_cuts):
                continue
            cut_v = False
            for k in vertex_directions(v, kv, lat):
                if k in seen:
                    continue
                seen.add(k)
                if fast:
                    if not any(k):
                        continue
                    # no integer vector is orthogonal to V, so d has one preimage
                    c = lat.combine_preimages(k)
                    rhs = kf.floor_max(c)
                    if not pf.exceeds(c, rhs):
                        continue
                    cut = CGCut(c, rhs, True, "deepest")
                    if pool.add(cut):
                        record(lat.point(k), "unique_preimage", cut)
                    if _separates(cut, v):
                        cut_v = True
                        break
                    continue
                d = lat.point(k) if k else tuple(Fraction(0) for _ in range(n))
                try:
                    if la.is_zero(d):
                        dc = zero_direction_cut(P, x0, K, config.search_cap, V, lat, kv)
                    else:
                        dc = deepest_cut(P, d, x0, K, config.search_cap, V, lat, kv,
                                         c0=lat.combine_preimages(k))
                except NoCutNeeded:
                    continue
                if not dc.certified:
                    certified = False
                    entries.append({"phase": "uncertified", "d": [rational_to_json(x) for x in d]})
                if dc.separates and pool.add(dc.cut):
                    record(d, dc.how, dc.cut)
                if _separates(dc.cut, v):
                    cut_v = True
                    break
            if not cut_v:
                survivors.add(key)
        if not new_cuts:
            break
        P = pool.polytope(n)
    return P, certified, rounds, cap_hit


def _closure(P_K: geo.Polytope, memo, config) -> ClosureResult:
    key = P_K.key()
    if key in memo:
        return memo[key]
    if P_K.dim == 0:
        res = _point_closure(P_K)
        memo[key] = res
        return res
    K = PolytopeBody(P_K)
    pool = CutPool(source="closure")
    pool.extend(_box_cuts(K, P_K.n))
    entries, tree = [], {}
    certified = _boundary_phase(P_K, memo, config, pool, entries, tree)
    P, cert2, rounds, cap_hit = _interior_phase(P_K, pool, entries, config)
    res = ClosureResult(P_K, P, pool, entries, tree, certified and cert2 and not cap_hit,
                        rounds, cap_hit)
    memo[key] = res
    return res


def cg_closure(K, config: ClosureConfig | None = None) -> ClosureResult:
    config = config or ClosureConfig()
    K = as_body(K)
    if not isinstance(K, PolytopeBody):
        raise InputError("exact closure needs a polytope; use brute_force_closure for smooth bodies")
    if K.n > config.max_dim:
        raise DimensionTooLarge(f"dimension {K.n} exceeds {config.max_dim}")
    return _closure(K.polytope, {}, config)


# -- brute force oracle ------------------------------------------------------------

@dataclass(frozen=True)
class OracleResult:
    polytope: geo.Polytope
    bound: int
    stable: bool | None
    cuts: tuple = ()

    def to_json(self) -> dict:
        return {"closure": polytope_to_json(self.polytope), "bound": self.bound,
                "stable": self.stable, "exhaustive": False,
                "cuts": [c.to_json() for c in self.cuts]}


def _normals(n, B):
    """Primitive integer vectors with sup-norm <= B, shell by shell."""
    for s in range(1, B + 1):
        for c in product(range(-s, s + 1), repeat=n):
            if max(abs(x) for x in c) == s and math.gcd(*c) == 1:
                yield c


def _truncated(K, B, budget):
    n = K.n
    cuts = []
    current = None
    for s in range(1, B + 1):
        shell = [c for c in _normals(n, s) if max(abs(x) for x in c) == s]
        new = []
        for c in shell:
            cut = CGCut(c, K.floor_support(c, budget), True, "oracle")
            if current is None or current.is_empty or current.support(c)[0] > cut.rhs:
                new.append(cut)
        if current is not None and current.is_empty:
            break
        if new or current is None:
            cuts.extend(new)
            current = geo.dual_description(hrep=[c.halfspace for c in cuts], n=n)
    return current, tuple(cuts)


def brute_force_closure(K, B: int, check_stable: bool = True, budget: int = 256) -> OracleResult:
    if B < 1:
        raise InputError("bound must be at least 1")
    K = as_body(K)
    P, cuts = _truncated(K, B, budget)
    stable = None
    if check_stable:
        P2, _ = _truncated(K, 2 * B, budget)
        stable = P2.same_as(P)
    return OracleResult(P, B, stable, cuts)


# -- verification ----------------------------------------------------------------

@dataclass
class VerifyReport:
    checks: dict
    info: dict

    @property
    def passed(self) -> bool:
        return all(ok for ok, _ in self.checks.values())

    def to_json(self) -> dict:
        return {"passed": self.passed,
                "checks": {k: {"ok": ok, "detail": d} for k, (ok, d) in self.checks.items()},
                "info": self.info}


def _intersect_face(P: geo.Polytope, F: geo.Polytope) -> geo.Polytope:
    if P.is_empty:
        return P
    return P.intersect([], equations=list(F.equations))


def verify_closure(result: ClosureResult, K, B: int, oracle: OracleResult | None = None) -> VerifyReport:
    K = as_body(K)
    cl = result.closure
    checks, info = {}, {}
    bad = [v for v in cl.vertices if not K.contains(v)]
    checks["closure_in_body"] = (not bad, f"{len(bad)} vertices outside K")
    oracle = oracle or brute_force_closure(K, B, check_stable=False)
    rebuilt = result.defining_cuts.polytope(K.n)
    consistent = rebuilt.same_as(cl)
    inside = oracle.polytope.contains_polytope(rebuilt) if not rebuilt.is_empty else True
    checks["closure_in_oracle"] = (consistent and inside,
                                   "cuts reproduce the closure" if consistent else "cuts disagree with closure")
    invalid = [c.c for c in result.defining_cuts if c.rhs < K.floor_support(c.c)]
    checks["cuts_valid"] = (not invalid, f"{len(invalid)} invalid cuts")
    mismatched = []
    for face, sub in result.faces():
        if not _intersect_face(cl, face.polytope).same_as(sub.closure):
            mismatched.append(face.normal)
    checks["face_commutation"] = (not mismatched, f"{len(mismatched)} faces disagree")
    if cl.is_empty:
        info["oracle_in_closure"] = oracle.polytope.is_empty
    else:
        info["oracle_in_closure"] = cl.contains_polytope(oracle.polytope)
    info["oracle_bound"] = B
    return VerifyReport(checks, info)
