"""Render SVG pictures for every 2D corpus instance into figures/.

Polytopes show the exact closure with its defining cuts; smooth bodies show
the oracle polytope at the instance bound.
"""
import argparse
import json
from pathlib import Path

from cgclosure.body import body_from_json
from cgclosure.closure import brute_force_closure, cg_closure
from cgclosure.plot import plot2d


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", default="corpus")
    ap.add_argument("--out", default="figures")
    ap.add_argument("--max-cuts", type=int, default=40, help="draw at most this many cuts (smallest normals first)")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)
    for path in sorted(Path(args.corpus, "instances").glob("*.json")):
        inst = json.loads(path.read_text())
        K = body_from_json(inst["body"])
        if K.n != 2:
            continue
        if inst.get("mode", "exact") == "exact":
            res = cg_closure(K)
            cuts, closure = list(res.defining_cuts), res.closure
        else:
            res = brute_force_closure(K, inst.get("bound", 1), check_stable=False)
            cuts, closure = list(res.cuts), res.polytope
        cuts.sort(key=lambda c: (max(abs(x) for x in c.c), c.c))
        svg = plot2d(K, cuts[:args.max_cuts], closure, title=inst.get("name"))
        (out / f"{path.stem}.svg").write_text(svg)
        print(f"{path.stem}: {len(cuts)} cuts, {min(len(cuts), args.max_cuts)} drawn")


if __name__ == "__main__":
    main()
