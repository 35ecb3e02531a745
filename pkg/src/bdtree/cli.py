"""Command line: build, verify, generate.

Exit codes: 0 all checks pass, 1 a verification failed (or the encompass
retry cap was hit), 2 the input could not be used.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import verify as V
from .encompass import EncompassConfig, InvalidInput, RetryExhausted, encompass
from .files import (
    InputError,
    PolygonInstance,
    ResultFile,
    SegmentsInstance,
    instance_from_dict,
    instance_to_dict,
    loads,
    write_json,
)
from .geom import GeometryError, to_coord
from .generators import gen_random_polygon, gen_random_segments, gen_tight
from .polygon import InvalidPolygon, Polygon, classify_vertices
from .svg import encompass_svg, polygon_tree_svg
from .tree_builder import InvalidInstance, MarkedInstance, build_tree, drop_removable, select_default_marks

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class CommandError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def cmd_tree_in_polygon(inst: PolygonInstance) -> tuple[ResultFile, str]:
    poly = Polygon(tuple(inst.polygon))
    try:
        poly.validate()
    except InvalidPolygon as exc:
        raise CommandError(f"invalid polygon: {exc}") from exc
    marked = MarkedInstance(poly, frozenset(inst.a_indices), inst.v1, inst.v2)
    try:
        if inst.v1 is None and inst.v2 is None:
            marked = select_default_marks(marked)
        marked.validate()
    except InvalidInstance as exc:
        raise CommandError(f"invalid instance: {exc}") from exc
    tree = drop_removable(build_tree(marked), marked)
    marks = [m for m in marked.marks if m not in marked.removable]
    mark_pts = [poly[i] for i in marks]
    cls = classify_vertices(poly)
    report = V.check_tree(tree.points, tree.edges)
    report.extend(V.check_inscribed(tree.points, tree.edges, poly.vertices))
    report.extend(V.check_degrees(tree.points, tree.edges, [poly[i] for i in cls.reflex], mark_pts))
    index = {p: i for i, p in enumerate(poly.vertices)}
    deg = tree.degrees()
    vertices = [
        {
            "polygon_index": index[p],
            "degree": deg[k],
            "class": "reflex" if index[p] in cls.reflex else "convex",
            "mark": index[p] in marks,
        }
        for k, p in enumerate(tree.points)
    ]
    trace = {"marks": marks, "helper_marks_removed": sorted(marked.removable), "reflex_count": len(cls.reflex)}
    result = ResultFile("polygon-result", list(tree.points), list(tree.edges), vertices, report.to_list(), trace)
    svg = polygon_tree_svg(poly.vertices, tree.points, tree.edges, [poly[i] for i in cls.reflex], mark_pts)
    return result, svg


def cmd_encompass(inst: SegmentsInstance, config: EncompassConfig) -> tuple[ResultFile, str]:
    try:
        res = encompass(inst.segments, config)
    except InvalidInput as exc:
        raise CommandError(f"invalid input: {exc}") from exc
    except RetryExhausted as exc:
        sys.stderr.write(json.dumps(exc.dump, indent=1, sort_keys=True) + "\n")
        raise CommandError(str(exc), EXIT_FAIL) from exc
    tree = res.tree
    report = V.check_encompassing(tree.points, tree.edges, inst.segments)
    deg = tree.degrees()
    tips = {b.tip for b in res.subdivision.barriers}
    vertices = [
        {"segment": k // 2, "role": "tip" if p in tips else "extended", "degree": deg[k]}
        for k, p in enumerate(tree.points)
    ]
    result = ResultFile("segments-result", list(tree.points), list(tree.edges), vertices, report.to_list(), res.trace())
    extensions = [(b.end, b.hit) for b in res.subdivision.barriers]
    svg = encompass_svg(inst.segments, tree.points, tree.edges, res.subdivision.box.vertices, extensions)
    return result, svg


def cmd_verify(result: ResultFile, inst: PolygonInstance | SegmentsInstance) -> V.Report:
    """Re-run the checks from the files alone, independently of the builders."""
    report = V.Report()
    if isinstance(inst, PolygonInstance):
        if result.kind != "polygon-result":
            raise CommandError("result/instance kind mismatch")
        polygon = inst.polygon
        expected = {polygon[i] for i in inst.a_indices}
        report.add("vertex-set", set(result.points) == expected, "tree vertices must be exactly A")
        report.extend(V.check_tree(result.points, result.edges))
        report.extend(V.check_inscribed(result.points, result.edges, polygon))
        marks = [i for i in (inst.v1, inst.v2) if i is not None]
        if not marks:
            marks = list(result.trace.get("marks", []))
        mark_pts = [polygon[i] for i in marks if 0 <= i < len(polygon) and polygon[i] in expected]
        report.extend(V.check_degrees(result.points, result.edges, V.reflex_points(polygon), mark_pts))
    else:
        if result.kind != "segments-result":
            raise CommandError("result/instance kind mismatch")
        expected = {p for s in inst.segments for p in s}
        report.add("vertex-set", set(result.points) == expected and len(result.points) == len(expected),
                   "tree vertices must be exactly the endpoints")
        report.extend(V.check_encompassing(result.points, result.edges, inst.segments))
    return report


def _emit(result: ResultFile, svg: str, args) -> int:
    text = write_json(args.json, result.to_dict())
    if not args.json:
        sys.stdout.write(text)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(svg)
    failed = [c for c in result.report if not c["passed"]]
    for c in failed:
        sys.stderr.write(f"FAIL {c['name']}: {c['detail']}\n")
    return EXIT_FAIL if failed else EXIT_OK


def _read(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc}") from exc


def _load_instance(path: str):
    return instance_from_dict(_read(path))


def _run(args) -> int:
    if args.cmd == "tree":
        inst = _load_instance(args.instance)
        if not isinstance(inst, PolygonInstance):
            raise CommandError("tree expects a polygon-instance")
        return _emit(*cmd_tree_in_polygon(inst), args)
    if args.cmd == "encompass":
        inst = _load_instance(args.instance)
        if not isinstance(inst, SegmentsInstance):
            raise CommandError("encompass expects a segments-instance")
        config = EncompassConfig(
            margin=to_coord(args.margin) if args.margin else (inst.margin if inst.margin is not None else 1),
            epsilon=to_coord(args.epsilon) if args.epsilon else inst.epsilon,
            max_retries=args.max_retries,
        )
        if config.margin <= 0 or (config.epsilon is not None and config.epsilon <= 0):
            raise CommandError("margin and epsilon must be positive")
        return _emit(*cmd_encompass(inst, config), args)
    if args.cmd == "verify":
        result = ResultFile.from_dict(_read(args.result))
        inst = _load_instance(args.instance)
        report = cmd_verify(result, inst)
        for c in report.checks:
            status = "PASS" if c.passed else "FAIL"
            sys.stdout.write(f"{status} {c.name}" + (f": {c.detail}" if c.detail and not c.passed else "") + "\n")
        return EXIT_OK if report.ok else EXIT_FAIL
    if args.cmd == "gen-tight":
        inst = gen_tight(args.n)
    elif args.cmd == "gen-polygon":
        inst = gen_random_polygon(args.n, args.seed)
    elif args.cmd == "gen-segments":
        inst = gen_random_segments(args.n, args.seed)
    else:  # pragma: no cover - argparse enforces the choices
        raise CommandError(f"unknown command {args.cmd}")
    text = write_json(args.json, instance_to_dict(inst))
    if not args.json:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bdtree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True)

    def outputs(p, svg=True):
        p.add_argument("--json", metavar="PATH", help="write JSON here instead of stdout")
        if svg:
            p.add_argument("--svg", metavar="PATH", help="also write an SVG figure")

    p = sub.add_parser("tree", help="bounded-degree tree inside a polygon")
    p.add_argument("instance")
    outputs(p)
    p = sub.add_parser("encompass", help="max-degree-3 encompassing tree of segments")
    p.add_argument("instance")
    p.add_argument("--epsilon", metavar="Q", help="initial slit width (rational), default from feature size")
    p.add_argument("--margin", metavar="Q", help="bounding box margin (rational), default 1")
    p.add_argument("--max-retries", type=int, default=32, metavar="N")
    outputs(p)
    p = sub.add_parser("verify", help="re-check a result file against its instance")
    p.add_argument("result")
    p.add_argument("instance")
    p = sub.add_parser("gen-tight", help="spiked polygon forcing degree 3 at every reflex vertex")
    p.add_argument("n", type=int)
    outputs(p, svg=False)
    for name, helptext in (("gen-polygon", "random simple polygon instance"), ("gen-segments", "random disjoint segments")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("n", type=int)
        p.add_argument("--seed", type=int, default=0, metavar="N")
        outputs(p, svg=False)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except CommandError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except (InputError, GeometryError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
