"""Convex bodies with an exact support oracle.

Polytopes answer support queries with exact scalars. The 2D smooth bodies
(balls and ellipses) answer with a :class:`CertifiedInterval` and a refiner;
their support values ``c.z + sqrt(c^T S c)`` usually leave Q(sqrt m).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import geometry as geo
from . import linalg as la
from .errors import InputError, OnBoundary, UndecidableMembership
from .numeric import (
    DEFAULT_FIELD,
    CertifiedInterval,
    QuadExt,
    exact_vector,
    field_of,
    floor_interval,
    floor_quad,
    scalar_from_json,
    scalar_to_json,
    sign,
    sqrt_bounds,
    sqrt_interval,
    sqrt_lower,
    sqrt_upper,
    to_fraction,
    upper,
    vector_from_json,
    vector_to_json,
)


@dataclass(frozen=True)
class SupportResult:
    value: object                       # exact scalar or CertifiedInterval
    face: geo.Face | None = None
    refine: Callable | None = None

    @property
    def is_exact(self) -> bool:
        return not isinstance(self.value, CertifiedInterval)


class ConvexBody:
    n: int
    kind: str

    def support(self, c) -> SupportResult:
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def floor_support(self, c, budget: int = 256) -> int:
        s = self.support(c)
        if s.is_exact:
            return floor_quad(s.value)
        return floor_interval(s.value, s.refine, budget)

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class PolytopeBody(ConvexBody):
    polytope: geo.Polytope

    def __post_init__(self):
        if self.polytope.is_empty:
            raise InputError("bodies must be nonempty")

    @property
    def n(self):
        return self.polytope.n

    @property
    def kind(self):
        return "QPolytope" if self.polytope.is_rational else "QuadPolytope"

    @property
    def field(self):
        return self.polytope.field

    def support(self, c) -> SupportResult:
        c = tuple(c)
        if la.is_zero(c):
            raise InputError("support direction must be nonzero")
        val, idx = self.polytope.support(c)
        return SupportResult(val, geo.Face(self.polytope, c, val, idx))

    def contains(self, x) -> bool:
        return self.polytope.contains(exact_vector(x))

    def to_json(self) -> dict:
        return {"type": "polytope", "field": self.field or DEFAULT_FIELD,
                "vertices": [vector_to_json(v) for v in self.polytope.vertices]}


@dataclass(frozen=True, eq=False)
class Ellipse2D(ConvexBody):
    """{x : (x-z)^T S^-1 (x-z) <= 1}; support is c.z + sqrt(c^T S c)."""
    center: tuple
    shape: tuple

    def __post_init__(self):
        if len(self.center) != 2 or len(self.shape) != 2:
            raise InputError("smooth bodies are two-dimensional")
        (a, b), (b2, d) = self.shape
        if b != b2 or a <= 0 or a * d - b * b <= 0:
            raise InputError("shape matrix must be symmetric positive definite")
        if not all(isinstance(x, (int, Fraction)) for x in self.center):
            raise InputError("smooth body data must be rational")

    n = 2
    kind = "Ellipse2D"

    def _quad(self, c):
        (a, b), (_, d) = self.shape
        return Fraction(a * c[0] * c[0] + 2 * b * c[0] * c[1] + d * c[1] * c[1])

    def support(self, c) -> SupportResult:
        c = tuple(c)
        if la.is_zero(c):
            raise InputError("support direction must be nonzero")
        offset = Fraction(la.dot(c, self.center))
        iv, refine = sqrt_interval(self._quad(c), offset)
        return SupportResult(iv, None, refine)

    def support_exact(self, c, m: int = DEFAULT_FIELD):
        """The support value as an exact scalar when it lies in Q(sqrt m), else None."""
        x = self._quad(c)
        offset = Fraction(la.dot(c, self.center))
        lo, hi = sqrt_bounds(x)
        if lo == hi:
            return offset + lo
        r, s = sqrt_bounds(x / m)
        if r == s:
            return QuadExt.make(offset, r, m)
        return None

    def _inverse_form(self, y):
        (a, b), (_, d) = self.shape
        det = a * d - b * b
        return (d * y[0] * y[0] - 2 * b * y[0] * y[1] + a * y[1] * y[1]) / det

    def contains(self, x) -> bool:
        x = exact_vector(x)
        fields = {field_of(t) for t in x} - {None}
        if len(fields) > 1:
            raise UndecidableMembership("coordinates from different quadratic fields")
        y = la.sub(x, self.center)
        return sign(self._inverse_form(y) - 1) <= 0

    def interior_radius(self, v, V=None) -> Fraction:
        """Lower bound for the inradius of a ball around v (restricting to V only shrinks
        the ball's footprint, so the full-space bound stays valid)."""
        (a, b), (_, d) = self.shape
        tr, det = Fraction(a + d), Fraction(a * d - b * b)
        # smallest eigenvalue of S, rounded down
        lam = (tr - sqrt_upper(tr * tr - 4 * det)) / 2
        if lam <= 0:
            lam = det / tr  # det/tr <= lambda_min for 2x2 SPD
        t = self._inverse_form(la.sub(exact_vector(v), self.center))
        t_hi = sqrt_upper(upper(t))
        if t_hi >= 1:
            raise OnBoundary("point is not in the interior")
        return sqrt_lower(lam) * (1 - t_hi)

    def to_json(self) -> dict:
        return {"type": "ellipse", "center": vector_to_json(self.center),
                "shape": [vector_to_json(r) for r in self.shape]}


class Ball(Ellipse2D):
    """Disk of rational radius around a rational center."""

    kind = "Ball"

    def __init__(self, center, radius):
        radius = Fraction(radius)
        if radius <= 0:
            raise InputError("radius must be positive")
        object.__setattr__(self, "radius", radius)
        r2 = radius * radius
        super().__init__(tuple(Fraction(x) for x in center), ((r2, Fraction(0)), (Fraction(0), r2)))

    def interior_radius(self, v, V=None) -> Fraction:
        y = la.sub(exact_vector(v), self.center)
        d = sqrt_upper(upper(la.norm_sq(y)))
        if d >= self.radius:
            raise OnBoundary("point is not in the interior")
        return self.radius - d

    def to_json(self) -> dict:
        return {"type": "ball", "center": vector_to_json(self.center),
                "radius": scalar_to_json(self.radius)}


def support(K: ConvexBody, c) -> SupportResult:
    return K.support(c)


def contains(K: ConvexBody, x) -> bool:
    return K.contains(x)


def polytope_body(vertices=None, inequalities=None, equations=()) -> PolytopeBody:
    if vertices is not None:
        return PolytopeBody(geo.from_vertices(vertices))
    return PolytopeBody(geo.from_inequalities(inequalities, equations))


def body_from_json(obj: dict) -> ConvexBody:
    try:
        kind = obj["type"]
    except (KeyError, TypeError) as e:
        raise InputError("body JSON needs a 'type' field") from e
    m = int(obj.get("field", DEFAULT_FIELD))
    if kind == "polytope":
        if "vertices" in obj:
            return PolytopeBody(geo.from_vertices([vector_from_json(v, m) for v in obj["vertices"]]))
        if "inequalities" in obj:
            ineqs = [(vector_from_json(h["normal"], m), scalar_from_json(h["rhs"], m))
                     for h in obj["inequalities"]]
            eqs = [(vector_from_json(h["normal"], m), scalar_from_json(h["rhs"], m))
                   for h in obj.get("equations", [])]
            return PolytopeBody(geo.from_inequalities(ineqs, eqs))
        raise InputError("polytope JSON needs 'vertices' or 'inequalities'")
    if kind == "ball":
        center = tuple(to_fraction(x) for x in vector_from_json(obj["center"], m))
        return Ball(center, to_fraction(scalar_from_json(obj["radius"], m)))
    if kind == "ellipse":
        center = tuple(to_fraction(x) for x in vector_from_json(obj["center"], m))
        shape = tuple(tuple(to_fraction(x) for x in vector_from_json(r, m)) for r in obj["shape"])
        return Ellipse2D(center, shape)
    raise InputError(f"unknown body type {kind!r}")


def as_body(K) -> ConvexBody:
    if isinstance(K, ConvexBody):
        return K
    if isinstance(K, geo.Polytope):
        return PolytopeBody(K)
    raise InputError(f"not a convex body: {K!r}")
