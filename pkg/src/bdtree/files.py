"""JSON instance and result files.

Coordinates are written as exact strings: a decimal when the rational
terminates (``"0.125"``), otherwise ``"p/q"``.  On input, integers, decimal
strings, ``"p/q"`` strings and JSON numbers are accepted; JSON numbers are
read from their decimal text, never through binary floats.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .geom import Point, format_coord, to_coord


class InputError(ValueError):
    pass


@dataclass
class PolygonInstance:
    polygon: list[Point]
    a_indices: list[int]
    v1: int | None = None
    v2: int | None = None
    seed: int | None = None

    kind = "polygon-instance"


@dataclass
class SegmentsInstance:
    segments: list[tuple[Point, Point]]
    seed: int | None = None
    epsilon: Any = None
    margin: Any = None

    kind = "segments-instance"


def point_to_json(p: Point) -> list[str]:
    return [format_coord(p[0]), format_coord(p[1])]


def point_from_json(obj) -> Point:
    if not isinstance(obj, (list, tuple)) or len(obj) != 2:
        raise InputError(f"a point must be an [x, y] pair, got {obj!r}")
    try:
        return Point(to_coord(obj[0]), to_coord(obj[1]))
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"bad coordinate in {obj!r}: {exc}") from exc


def instance_to_dict(inst: PolygonInstance | SegmentsInstance) -> dict:
    if isinstance(inst, PolygonInstance):
        d: dict[str, Any] = {
            "kind": inst.kind,
            "polygon": [point_to_json(p) for p in inst.polygon],
            "a_indices": sorted(inst.a_indices),
            "v1": inst.v1,
            "v2": inst.v2,
        }
    else:
        d = {
            "kind": inst.kind,
            "segments": [[point_to_json(p), point_to_json(q)] for p, q in inst.segments],
        }
        for key in ("epsilon", "margin"):
            value = getattr(inst, key)
            if value is not None:
                d[key] = format_coord(to_coord(value))
    if inst.seed is not None:
        d["seed"] = inst.seed
    return d


def _index(obj, n: int, what: str) -> int | None:
    if obj is None:
        return None
    if isinstance(obj, bool) or not isinstance(obj, int) or not 0 <= obj < n:
        raise InputError(f"{what} must be a vertex index in [0, {n}), got {obj!r}")
    return obj


def instance_from_dict(d: dict) -> PolygonInstance | SegmentsInstance:
    if not isinstance(d, dict):
        raise InputError("instance must be a JSON object")
    kind = d.get("kind")
    if kind == PolygonInstance.kind:
        if "segments" in d:
            raise InputError("polygon-instance must not carry segments")
        raw = d.get("polygon")
        if not isinstance(raw, list) or len(raw) < 3:
            raise InputError("polygon needs at least 3 vertices")
        poly = [point_from_json(p) for p in raw]
        n = len(poly)
        a_raw = d.get("a_indices")
        if a_raw is None:
            a = list(range(n))
        else:
            if not isinstance(a_raw, list):
                raise InputError("a_indices must be a list")
            a = [_index(i, n, "a_indices entry") for i in a_raw]
            if len(set(a)) != len(a):
                raise InputError("a_indices has duplicates")
        return PolygonInstance(poly, a, _index(d.get("v1"), n, "v1"), _index(d.get("v2"), n, "v2"), d.get("seed"))
    if kind == SegmentsInstance.kind:
        if "polygon" in d:
            raise InputError("segments-instance must not carry a polygon")
        raw = d.get("segments")
        if not isinstance(raw, list) or not raw:
            raise InputError("segments must be a non-empty list")
        segs = []
        for s in raw:
            if not isinstance(s, list) or len(s) != 2:
                raise InputError(f"a segment must be [[x1, y1], [x2, y2]], got {s!r}")
            segs.append((point_from_json(s[0]), point_from_json(s[1])))
        extra = {}
        for key in ("epsilon", "margin"):
            if d.get(key) is not None:
                try:
                    extra[key] = to_coord(d[key])
                except (ValueError, TypeError, ZeroDivisionError) as exc:
                    raise InputError(f"bad {key}: {exc}") from exc
        return SegmentsInstance(segs, d.get("seed"), **extra)
    raise InputError(f"unknown instance kind {kind!r}")


def loads(text: str) -> dict:
    try:
        return json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def dumps(d: dict) -> str:
    """Canonical serialisation: byte-identical for equal content."""
    return json.dumps(d, indent=1, sort_keys=True) + "\n"


def read_instance(path: str) -> PolygonInstance | SegmentsInstance:
    with open(path, encoding="utf-8") as fh:
        return instance_from_dict(loads(fh.read()))


def write_json(path: str | None, d: dict) -> str:
    text = dumps(d)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


@dataclass
class ResultFile:
    kind: str
    points: list[Point]
    edges: list[tuple[int, int]]
    vertices: list[dict] = field(default_factory=list)
    report: list[dict] = field(default_factory=list)
    trace: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "points": [point_to_json(p) for p in self.points],
            "edges": [list(e) for e in self.edges],
            "vertices": self.vertices,
            "report": self.report,
            "trace": self.trace,
        }

    @classmethod
    def from_dict(cls, d: dict) -> ResultFile:
        if not isinstance(d, dict) or d.get("kind") not in ("polygon-result", "segments-result"):
            raise InputError("not a result file")
        try:
            edges = [(int(i), int(j)) for i, j in d["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad edge list: {exc}") from exc
        return cls(
            d["kind"],
            [point_from_json(p) for p in d.get("points", [])],
            edges,
            d.get("vertices", []),
            d.get("report", []),
            d.get("trace", {}),
        )
