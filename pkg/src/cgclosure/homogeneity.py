"""Lifting cuts from a face F of K to CG cuts of K.

Given a cut ``c.x <= delta`` valid on the pi-face F, integer vectors
``a_i`` close to ``m_i * pi`` (with ``m_i`` large) make ``(c + a_i).x``
maximized on F, where it is at most ``delta + m_i*pi0 + eps``. So each
``(c + a_i).x <= floor(delta) + m_i*pi0`` is a CG cut of K, and a positive
combination with residuals cancelling gives ``(c + alpha*pi).x <= floor(delta)
+ alpha*pi0``. Constants are conservative; every certificate is rechecked
exactly against the support oracle, and later approximants are tried when a
check fails.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from . import geometry as geo
from . import kronecker as kr
from . import linalg as la
from .body import PolytopeBody, as_body
from .cuts import CGCut, CutPool, cg_cut
from .errors import (
    BudgetExhausted,
    CutInvalidOnFace,
    DegenerateFace,
    InputError,
    NotAFace,
)
from .numeric import (
    exact,
    exact_vector,
    floor_quad,
    is_rational,
    scalar_to_json,
    sign,
    to_fraction,
    vector_to_json,
)

log = logging.getLogger(__name__)

MAX_FAMILIES = 64


@dataclass(frozen=True)
class WorkingConstants:
    eps: Fraction
    eps1: Fraction
    eps2: Fraction | None      # None when F = K (every direction's face lies in F)
    N: int
    delta: object              # delta after the half-step for integral values
    pi: tuple                  # rescaled face normal
    pi0: object                # rescaled offset, in {-1, 0, 1}
    scale: object              # |pi0| used for rescaling (1 if pi0 = 0)
    neighborhood: str = "face vertices"


@dataclass(frozen=True)
class HomogeneityCertificate:
    c: tuple
    delta: object
    pi: tuple
    pi0: object
    a: tuple
    m: tuple
    cuts: tuple
    lambdas: tuple
    alpha: object
    constants: WorkingConstants = field(repr=False)

    @property
    def k(self) -> int:
        return len(self.cuts)

    @property
    def floor_delta(self) -> int:
        return floor_quad(self.delta)

    def combined(self):
        """The implied inequality (c + alpha*pi).x <= floor(delta) + alpha*pi0."""
        n = len(self.c)
        lhs = tuple(self.c[i] + self.alpha * self.pi[i] for i in range(n))
        return lhs, self.floor_delta + self.alpha * self.pi0

    def checks(self, K) -> dict:
        K = as_body(K)
        n = len(self.c)
        lam = self.lambdas
        comb = [sum((l * cut.c[i] for l, cut in zip(lam, self.cuts)), Fraction(0)) for i in range(n)]
        lhs, rhs = self.combined()
        eps1 = self.constants.eps1
        return {
            "lambdas_positive": all(sign(l) > 0 for l in lam) and sum(lam, Fraction(0)) == 1,
            "alpha_positive": sign(self.alpha) > 0
                              and self.alpha == sum((l * m for l, m in zip(lam, self.m)), Fraction(0)),
            "normal_combination": tuple(comb) == lhs,
            "rhs_combination": sum((l * cut.rhs for l, cut in zip(lam, self.cuts)), Fraction(0)) == rhs,
            "cuts_valid": all(K.floor_support(cut.c) <= cut.rhs for cut in self.cuts),
            "multipliers_large": all(m >= self.constants.N for m in self.m),
            "residuals_small": all(
                sign(la.norm_sq(la.sub(a, la.scale(m, self.pi))) - eps1 * eps1) < 0
                for a, m in zip(self.a, self.m)),
            "cuts_match": all(cut.c == tuple(ci + ai for ci, ai in zip(self.c, a))
                              and cut.rhs == self.floor_delta + m * self.pi0
                              for cut, a, m in zip(self.cuts, self.a, self.m)),
        }

    def verify(self, K) -> bool:
        return all(self.checks(K).values())

    def to_json(self) -> dict:
        k = self.constants
        return {
            "c": list(self.c), "delta": scalar_to_json(self.delta),
            "pi": vector_to_json(self.pi), "pi0": scalar_to_json(self.pi0),
            "family": [{"a": list(a), "m": m, "cut": cut.to_json()}
                       for a, m, cut in zip(self.a, self.m, self.cuts)],
            "lambdas": [scalar_to_json(l) for l in self.lambdas],
            "alpha": scalar_to_json(self.alpha),
            "constants": {"eps": scalar_to_json(k.eps), "eps1": scalar_to_json(k.eps1),
                          "eps2": None if k.eps2 is None else scalar_to_json(k.eps2),
                          "N": k.N},
        }


def _polytope_of(K):
    K = as_body(K)
    if not isinstance(K, PolytopeBody):
        raise InputError("lifting needs a polytope body")
    return K, K.polytope


def _abs(x):
    return -x if sign(x) < 0 else x


def _check_face(P: geo.Polytope, F: geo.Face):
    pi = exact_vector(F.normal)
    if la.is_zero(pi):
        raise NotAFace("face normal must be nonzero")
    val, idx = P.support(pi)
    if val != F.offset:
        raise NotAFace("pi.x <= pi0 does not support the body at F")
    if set(idx) != set(F.vertex_subset):
        raise NotAFace("vertex set differs from the pi-face")
    return pi, exact(F.offset), idx


def working_constants(K, F: geo.Face, c, delta) -> WorkingConstants:
    K, P = _polytope_of(K)
    pi, pi0, idx = _check_face(P, F)
    c = tuple(int(x) for x in c)
    delta = exact(delta)
    face_pts = [P.vertices[i] for i in idx]
    for v in face_pts:
        if sign(la.dot(c, v) - delta) > 0:
            raise CutInvalidOnFace(f"max over F of c.x exceeds delta at {v}")
    scale = Fraction(1)
    if sign(pi0) != 0:
        scale = _abs(pi0)
        pi = tuple(x / scale for x in pi)
        pi0 = pi0 / scale
    if is_rational(delta) and to_fraction(delta).denominator == 1:
        delta = delta + Fraction(1, 2)
    frac = delta - floor_quad(delta)
    eps = geo.positive_lower(1 - frac) / 4
    r_face = max((geo.norm_upper(v) for v in face_pts), default=Fraction(0))
    eps1 = eps / (r_face + 1)
    if len(idx) == len(P.vertices):
        return WorkingConstants(eps, eps1, None, 1, delta, pi, pi0, scale, "F = K")
    try:
        eps2 = geo.face_stability_margin(P, geo.Face(P, pi, pi0, tuple(idx)))
    except DegenerateFace:
        return WorkingConstants(eps, eps1, None, 1, delta, pi, pi0, scale, "F = K")
    c_norm = geo.norm_upper(c) if not la.is_zero(c) else Fraction(0)
    bound = 2 * (c_norm + eps1) / (eps2 * geo.norm_lower(pi))
    N = int(bound // 1) + 1
    return WorkingConstants(eps, eps1, eps2, N, delta, pi, pi0, scale)


def lift_cut(K, F: geo.Face, c, delta, max_families: int = MAX_FAMILIES) -> HomogeneityCertificate:
    K, P = _polytope_of(K)
    consts = working_constants(K, F, c, delta)
    c = tuple(int(x) for x in c)
    fd = floor_quad(consts.delta)
    pi, pi0 = consts.pi, consts.pi0
    if not is_rational(pi0) or to_fraction(pi0).denominator != 1:
        raise InputError("rescaled offset must be integral")
    pi0 = int(to_fraction(pi0))
    tried = 0
    for fam in kr.balanced_families(pi, consts.eps1, consts.N - 1):
        tried += 1
        if tried > max_families:
            break
        a_list = [ap.a for ap in fam.approximants]
        m_list = [ap.N for ap in fam.approximants]
        normals = [tuple(ci + ai for ci, ai in zip(c, a)) for a in a_list]
        if any(la.is_zero(v) for v in normals):
            continue
        cuts = tuple(CGCut(v, fd + m * pi0, True, "lift") for v, m in zip(normals, m_list))
        if not all(K.floor_support(cut.c) <= cut.rhs for cut in cuts):
            log.debug("family %d failed the support check; advancing", tried)
            continue
        alpha = sum((l * m for l, m in zip(fam.lambdas, m_list)), Fraction(0))
        cert = HomogeneityCertificate(c, consts.delta, pi, pi0, tuple(a_list), tuple(m_list),
                                      cuts, fam.lambdas, alpha, consts)
        return cert
    raise BudgetExhausted(f"no valid lifted family among the first {max_families}")


def lift_face_inequality(K, F: geo.Face) -> HomogeneityCertificate:
    """Lift c = 0, delta = 0: the cuts imply pi.x <= pi0."""
    n = len(F.normal)
    return lift_cut(K, F, (0,) * n, Fraction(0))


def pin_to_rational_subspace(K) -> CutPool:
    """CG cuts of K whose intersection lies in a rational affine subspace of aff(K).

    Rational hull equations e.x = b give the two cuts +-e directly; irrational
    ones are lifted from F = K with c = 0, delta = 0 in both orientations. The
    pool carries the certificates in ``pool.certificates``."""
    K, P = _polytope_of(K)
    pool = CutPool(source="pin")
    pool.certificates = []
    for eq in P.equations:
        e, b = exact_vector(eq.normal), exact(eq.rhs)
        if la.is_rational_vector(e) and is_rational(b):
            prim = la.primitive_integer(e)
            for s in (1, -1):
                pool.add(cg_cut(K, tuple(s * x for x in prim), "pin"))
            continue
        for s in (1, -1):
            normal = tuple(s * x for x in e)
            face = geo.pi_face(P, normal)
            cert = lift_face_inequality(K, face)
            pool.certificates.append(cert)
            pool.extend(cert.cuts)
    return pool
