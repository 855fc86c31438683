"""Random closures with timing, certification and oracle checks.

    python scripts/stress.py --dim 2 --count 20
    python scripts/stress.py --dim 2 --sqrt2 --count 10 --bound 20
    python scripts/stress.py --dim 3 --count 5 --radius 3 --den 2

Each line reports the closure size, wall time, whether every deepest cut was
certified, and whether verify_closure passed at the given bound.
"""
import argparse
import random
import time
from fractions import Fraction

from cgclosure import geometry as geo
from cgclosure.body import PolytopeBody
from cgclosure.closure import cg_closure, verify_closure
from cgclosure.numeric import QuadExt


def random_body(rng, n, radius, den, sqrt2):
    while True:
        pts = []
        for _ in range(n + 2):
            v = [Fraction(rng.randint(-radius, radius), rng.randint(1, den)) for _ in range(n)]
            if sqrt2:
                v[0] = v[0] + QuadExt(0, Fraction(rng.randint(-2, 2), rng.randint(1, 3)))
            pts.append(tuple(v))
        P = geo.from_vertices(pts)
        if P.dim == n and (not sqrt2 or not P.is_rational):
            return PolytopeBody(P)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--radius", type=int, default=3)
    ap.add_argument("--den", type=int, default=3)
    ap.add_argument("--sqrt2", action="store_true")
    ap.add_argument("--bound", type=int, default=8)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    worst, failures = 0.0, 0
    for i in range(args.count):
        K = random_body(rng, args.dim, args.radius, args.den, args.sqrt2)
        t = time.perf_counter()
        res = cg_closure(K)
        seconds = time.perf_counter() - t
        rep = verify_closure(res, K, args.bound)
        worst = max(worst, seconds)
        failures += not (rep.passed and res.certified)
        print(f"{i:3d} vertices={len(res.closure.vertices):2d} cuts={len(res.defining_cuts):4d} "
              f"time={seconds:6.2f}s certified={res.certified} verify={rep.passed} "
              f"oracle_in_closure={rep.info['oracle_in_closure']}")
    print(f"worst {worst:.2f}s, {failures} failures")


if __name__ == "__main__":
    main()
