"""Write SVG figures: the tight polygon with its tree, a random polygon
with its tree, and the encompassing-tree pipeline (box, extensions, slit
polygon Q, final tree)."""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from bdtree.encompass import encompass
from bdtree.generators import gen_random_polygon, gen_random_segments, gen_tight
from bdtree.polygon import Polygon, classify_vertices
from bdtree.svg import encompass_svg, polygon_tree_svg
from bdtree.tree_builder import MarkedInstance, build_tree


@dataclass
class FigureConfig:
    out: str = "figures"
    tight_n: int = 3
    polygon_n: int = 30
    segments_n: int = 8
    seed: int = 1


def polygon_figure(inst) -> str:
    poly = Polygon(tuple(inst.polygon))
    tree = build_tree(MarkedInstance(poly, frozenset(inst.a_indices), inst.v1, inst.v2))
    reflex = [poly[i] for i in classify_vertices(poly).reflex]
    return polygon_tree_svg(poly.vertices, tree.points, tree.edges, reflex, [poly[inst.v1], poly[inst.v2]])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    cfg = FigureConfig()
    for name, value in vars(cfg).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(value), default=value)
    cfg = FigureConfig(**vars(ap.parse_args(argv)))
    os.makedirs(cfg.out, exist_ok=True)
    figures = {
        "tight.svg": polygon_figure(gen_tight(cfg.tight_n)),
        "random_polygon.svg": polygon_figure(gen_random_polygon(cfg.polygon_n, cfg.seed)),
    }
    segs = gen_random_segments(cfg.segments_n, cfg.seed, span=100).segments
    res = encompass(segs)
    box = res.subdivision.box.vertices
    ext = [(b.end, b.hit) for b in res.subdivision.barriers]
    t0, t = res.t0, res.tree
    figures["encompass_extensions.svg"] = encompass_svg(segs, t.points, (), box, ext)
    figures["encompass_slit.svg"] = encompass_svg(segs, t.points, (), box, ext, res.slit.q.vertices)
    figures["encompass_t0.svg"] = encompass_svg(segs, t0.points, t0.edges, box, ext, res.slit.q.vertices)
    figures["encompass_final.svg"] = encompass_svg(segs, t.points, t.edges)
    for name, svg in figures.items():
        with open(os.path.join(cfg.out, name), "w", encoding="utf-8") as fh:
            fh.write(svg)
        print(os.path.join(cfg.out, name))
    return 0


if __name__ == "__main__":
    sys.exit(main())
