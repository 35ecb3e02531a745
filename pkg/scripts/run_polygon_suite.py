"""Build trees in random simple polygons and the tight family; print a CSV
row per instance and a summary line."""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass

from bdtree import verify as V
from bdtree.generators import gen_random_polygon, gen_tight
from bdtree.polygon import Polygon, classify_vertices
from bdtree.tree_builder import MarkedInstance, build_tree


@dataclass
class PolygonSuiteConfig:
    instances: int = 500
    min_vertices: int = 8
    max_vertices: int = 60
    seed: int = 0
    tight_max: int = 12


def run_one(kind, inst, writer):
    poly = Polygon(tuple(inst.polygon))
    t0 = time.perf_counter()
    tree = build_tree(MarkedInstance(poly, frozenset(inst.a_indices), inst.v1, inst.v2))
    dt = time.perf_counter() - t0
    marks = [poly[inst.v1], poly[inst.v2]]
    r = V.check_tree(tree.points, tree.edges)
    r.extend(V.check_inscribed(tree.points, tree.edges, poly.vertices))
    r.extend(V.check_degrees(tree.points, tree.edges, V.reflex_points(poly.vertices), marks))
    deg = tree.degrees()
    reflex = {poly[i] for i in classify_vertices(poly).reflex}
    deg3 = sum(1 for p, d in zip(tree.points, deg) if d == 3)
    writer.writerow([kind, inst.seed if inst.seed is not None else "", len(poly), len(reflex),
                     len(tree.points), deg3, f"{dt * 1000:.2f}", int(r.ok)])
    return r.ok


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    cfg = PolygonSuiteConfig()
    for name, value in vars(cfg).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=int, default=value)
    cfg = PolygonSuiteConfig(**vars(ap.parse_args(argv)))
    w = csv.writer(sys.stdout)
    w.writerow(["kind", "seed", "vertices", "reflex", "tree_vertices", "degree3", "build_ms", "valid"])
    ok = 0
    t0 = time.perf_counter()
    span = cfg.max_vertices - cfg.min_vertices + 1
    for k in range(cfg.instances):
        ok += run_one("random", gen_random_polygon(cfg.min_vertices + k % span, cfg.seed + k), w)
    for n in range(1, cfg.tight_max + 1):
        ok += run_one("tight", gen_tight(n), w)
    total = cfg.instances + cfg.tight_max
    print(f"# {ok}/{total} valid in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return 0 if ok == total else 1


if __name__ == "__main__":
    sys.exit(main())
