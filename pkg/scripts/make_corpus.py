"""Write the regression corpus: instances/*.json plus expected/*.json.

An expected file is written only when the exact closure agrees with the
brute-force oracle at the instance bound and the oracle is stable at twice
that bound. Smooth bodies get hand-checked expectations (see BALL_EXPECTED).
"""
import argparse
import json
import random
from fractions import Fraction
from pathlib import Path

from cgclosure import geometry as geo
from cgclosure.body import Ball, Ellipse2D, PolytopeBody
from cgclosure.closure import brute_force_closure, cg_closure, polytope_to_json
from cgclosure.numeric import QuadExt

F = Fraction
R2 = QuadExt(0, 1, 2)

# r = 3/2: floor(r) = 1 and floor(r sqrt2) = 2 (4 <= 9/2 < 9); the eight cuts meet in [-1,1]^2
BALL_EXPECTED = {"vertices": [["-1", "-1"], ["-1", "1"], ["1", "-1"], ["1", "1"]]}


def polytope(verts):
    return PolytopeBody(geo.from_vertices(verts))


def fixed_instances():
    h = F(1, 2)
    yield "unit_square", polytope([(0, 0), (1, 0), (0, 1), (1, 1)]), "exact", 4
    yield "square_three_halves", polytope([(0, 0), (F(3, 2), 0), (0, F(3, 2)), (F(3, 2), F(3, 2))]), "exact", 3
    yield "triangle_halves", polytope([(h, h), (F(5, 2), h), (h, F(5, 2))]), "exact", 4
    yield "segment_sqrt2", polytope([(0, 0), (1, R2)]), "exact", 8
    yield "thin_triangle_empty", polytope([(F(1, 3), F(1, 3)), (F(2, 3), F(1, 3)), (F(1, 3), F(2, 3))]), "exact", 2
    yield "square_at_height_half", polytope([(0, 0, h), (1, 0, h), (0, 1, h), (1, 1, h)]), "exact", 2
    yield "simplex_3d", polytope([(0, 0, 0), (F(5, 2), 0, 0), (0, F(5, 2), 0), (0, 0, F(5, 2))]), "exact", 4
    yield "ball_three_halves", Ball((0, 0), F(3, 2)), "oracle", 1
    yield "ellipse_tilted", Ellipse2D((F(1, 2), 0), ((3, 1), (1, 2))), "oracle", 4


def random_instances(seed, count_q, count_quad):
    rng = random.Random(seed)

    def pts(quad):
        out = []
        for _ in range(4):
            v = [F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(2)]
            if quad:
                v[0] = v[0] + QuadExt(0, F(rng.randint(-2, 2), rng.randint(1, 3)))
            out.append(tuple(v))
        return out

    made = 0
    while made < count_q + count_quad:
        quad = made >= count_q
        P = geo.from_vertices(pts(quad))
        if P.dim < 2 or (quad and P.is_rational):
            continue
        name = f"random_{'sqrt2' if quad else 'q'}_{made:02d}"
        made += 1
        yield name, PolytopeBody(P), "exact", 24 if quad else 12


def expected_for(K, mode, bound):
    if mode == "oracle":
        return BALL_EXPECTED if isinstance(K, Ball) else None
    res = cg_closure(K)
    orc = brute_force_closure(K, bound)
    if not (res.certified and orc.stable and orc.polytope.same_as(res.closure)):
        return None
    c = polytope_to_json(res.closure)
    return {"empty": True} if c["empty"] else {"vertices": c["vertices"]}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", default="corpus")
    ap.add_argument("--seed", type=int, default=2026)
    ap.add_argument("--random-q", type=int, default=4)
    ap.add_argument("--random-sqrt2", type=int, default=3)
    args = ap.parse_args()
    root = Path(args.dir)
    (root / "instances").mkdir(parents=True, exist_ok=True)
    (root / "expected").mkdir(parents=True, exist_ok=True)
    items = list(fixed_instances()) + list(random_instances(args.seed, args.random_q, args.random_sqrt2))
    for name, K, mode, bound in items:
        inst = {"name": name, "body": K.to_json(), "mode": mode, "bound": bound}
        (root / "instances" / f"{name}.json").write_text(json.dumps(inst, indent=1) + "\n")
        exp = expected_for(K, mode, bound)
        side = root / "expected" / f"{name}.json"
        if exp is None:
            side.unlink(missing_ok=True)
            print(f"{name}: no expected block (oracle not stable or disagrees)")
        else:
            side.write_text(json.dumps(exp, indent=1) + "\n")
            print(f"{name}: expected written")


if __name__ == "__main__":
    main()
