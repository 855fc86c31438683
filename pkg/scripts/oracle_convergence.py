"""How fast the truncated closure (normals with sup-norm <= B) reaches K'.

For each body, prints the vertex count, squared diameter and area of the
oracle polytope for B = 1, 2, 4, ... and whether it already equals the exact
closure (polytopes only).
"""
import argparse
from fractions import Fraction

from cgclosure import linalg as la
from cgclosure.body import Ball, polytope_body
from cgclosure.closure import brute_force_closure, cg_closure
from cgclosure.numeric import QuadExt
from cgclosure.plot import polygon_order

F = Fraction
R2 = QuadExt(0, 1, 2)

BODIES = {
    "segment_sqrt2": lambda: polytope_body([(0, 0), (1, R2)]),
    "square_three_halves": lambda: polytope_body([(0, 0), (F(3, 2), 0), (0, F(3, 2)), (F(3, 2), F(3, 2))]),
    "sqrt2_triangle": lambda: polytope_body([(0, 0), (2 * R2, 0), (0, 1 + R2)]),
    "ball_three_halves": lambda: Ball((0, 0), F(3, 2)),
    "ball_seven_thirds": lambda: Ball((F(1, 3), 0), F(7, 3)),
}


def area(P):
    if P.is_empty or P.dim < 2:
        return Fraction(0)
    vs = polygon_order(P)
    return abs(sum(vs[i][0] * vs[(i + 1) % len(vs)][1] - vs[(i + 1) % len(vs)][0] * vs[i][1]
                   for i in range(len(vs)))) / 2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-bound", type=int, default=32)
    ap.add_argument("bodies", nargs="*", default=list(BODIES))
    args = ap.parse_args()
    for name in args.bodies:
        K = BODIES[name]()
        exact = cg_closure(K).closure if hasattr(K, "polytope") else None
        print(name)
        B = 1
        while B <= args.max_bound:
            P = brute_force_closure(K, B, check_stable=False).polytope
            diam = max((la.norm_sq(la.sub(a, b)) for a in P.vertices for b in P.vertices), default=None)
            hit = "" if exact is None else f" equals_exact={P.same_as(exact)}"
            print(f"  B={B:3d} vertices={len(P.vertices):2d} diam^2={diam} area={area(P)}{hit}")
            B *= 2


if __name__ == "__main__":
    main()
