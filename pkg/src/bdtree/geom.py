"""Exact rational primitives: points, segments, orientation, intersection, hulls.

Coordinates are plain ``int`` when integral and ``gmpy2.mpq`` otherwise, so
integer inputs stay on the fast path while every derived point (ray hits,
offsets) remains exact.  Both types compare and hash consistently.
"""
from __future__ import annotations

from enum import IntEnum
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Union

from gmpy2 import mpq

Coord = Union[int, "mpq"]

_MPQ = type(mpq(0))


class GeometryError(ValueError):
    pass


class NoIntersection(GeometryError):
    pass


class OverlapNotPoint(GeometryError):
    pass


def to_coord(value) -> Coord:
    """Convert ``value`` to an exact coordinate.

    Accepts ints, ``mpq``, ``Fraction``, floats (taken at their exact binary
    value) and strings such as ``"3"``, ``"-0.125"`` or ``"7/3"``.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a coordinate")
    if isinstance(value, int):
        return value
    if isinstance(value, _MPQ):
        q = value
    elif isinstance(value, Fraction):
        q = mpq(value.numerator, value.denominator)
    elif isinstance(value, float):
        f = Fraction(value)
        q = mpq(f.numerator, f.denominator)
    elif isinstance(value, str):
        f = Fraction(value.strip())
        q = mpq(f.numerator, f.denominator)
    else:
        q = mpq(value)
    if q.denominator == 1:
        return int(q.numerator)
    return q


def as_fraction(c: Coord) -> Fraction:
    if isinstance(c, int):
        return Fraction(c)
    return Fraction(int(c.numerator), int(c.denominator))


class Point(NamedTuple):
    x: Coord
    y: Coord

    def __repr__(self) -> str:
        return f"Point({format_coord(self.x)}, {format_coord(self.y)})"


class Segment(NamedTuple):
    p: Point
    q: Point


def pt(x, y) -> Point:
    return Point(to_coord(x), to_coord(y))


def _norm(c) -> Coord:
    if isinstance(c, _MPQ) and c.denominator == 1:
        return int(c.numerator)
    return c


def make_point(x, y) -> Point:
    """Point from already-exact arithmetic results (normalises integral mpq)."""
    return Point(_norm(x), _norm(y))


def format_coord(c: Coord) -> str:
    """Exact decimal string when the value terminates, else ``"p/q"``."""
    if isinstance(c, int):
        return str(c)
    num, den = int(c.numerator), int(c.denominator)
    d, twos, fives = den, 0, 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{num}/{den}"
    digits = max(twos, fives)
    scaled = num * (10**digits) // den
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


class Orientation(IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


CCW = Orientation.CCW
CW = Orientation.CW
COLLINEAR = Orientation.COLLINEAR


def cross(a: Point, b: Point, c: Point) -> Coord:
    """Twice the signed area of triangle abc."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def orient(a: Point, b: Point, c: Point) -> Orientation:
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if d > 0:
        return CCW
    if d < 0:
        return CW
    return COLLINEAR


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True when ``p`` lies on the closed segment ab."""
    if cross(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def strictly_between(p: Point, a: Point, b: Point) -> bool:
    """True when ``p`` lies in the relative interior of segment ab."""
    return p != a and p != b and on_segment(p, a, b)


def _bbox_disjoint(a: Point, b: Point, c: Point, d: Point) -> bool:
    return (
        max(a[0], b[0]) < min(c[0], d[0])
        or max(c[0], d[0]) < min(a[0], b[0])
        or max(a[1], b[1]) < min(c[1], d[1])
        or max(c[1], d[1]) < min(a[1], b[1])
    )


PROPER = "proper"
ANY = "any"


def segments_intersect(s1: Segment, s2: Segment, mode: str = ANY) -> bool:
    """PROPER: the interiors cross at a single point transversally.
    ANY: the closed segments share at least one point."""
    a, b = s1
    c, d = s2
    if _bbox_disjoint(a, b, c, d):
        return False
    o1 = cross(a, b, c)
    o2 = cross(a, b, d)
    o3 = cross(c, d, a)
    o4 = cross(c, d, b)
    if mode == PROPER:
        return ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and (
            (o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)
        )
    if mode != ANY:
        raise ValueError(f"unknown mode {mode!r}")
    if ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and ((o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)):
        return True
    return (
        (o1 == 0 and on_segment(c, a, b))
        or (o2 == 0 and on_segment(d, a, b))
        or (o3 == 0 and on_segment(a, c, d))
        or (o4 == 0 and on_segment(b, c, d))
    )


def intersection_point(s1: Segment, s2: Segment) -> Point:
    a, b = s1
    c, d = s2
    if not segments_intersect(s1, s2, ANY):
        raise NoIntersection(f"{s1} and {s2} do not meet")
    rx, ry = b[0] - a[0], b[1] - a[1]
    sx, sy = d[0] - c[0], d[1] - c[1]
    den = rx * sy - ry * sx
    if den == 0:
        # collinear: they meet, so either a single shared endpoint or an overlap
        shared = {p for p in (a, b) if on_segment(p, c, d)} | {p for p in (c, d) if on_segment(p, a, b)}
        if len(shared) == 1:
            return shared.pop()
        raise OverlapNotPoint(f"{s1} and {s2} overlap along a segment")
    t = mpq((c[0] - a[0]) * sy - (c[1] - a[1]) * sx) / den
    return make_point(a[0] + t * rx, a[1] + t * ry)


def line_intersection(a: Point, b: Point, c: Point, d: Point) -> Point | None:
    """Intersection of the infinite lines ab and cd, None when parallel."""
    rx, ry = b[0] - a[0], b[1] - a[1]
    sx, sy = d[0] - c[0], d[1] - c[1]
    den = rx * sy - ry * sx
    if den == 0:
        return None
    t = mpq((c[0] - a[0]) * sy - (c[1] - a[1]) * sx) / den
    return make_point(a[0] + t * rx, a[1] + t * ry)


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Strict hull vertices in counterclockwise order (monotone chain).

    Collinear boundary points are dropped; use :func:`on_hull_boundary` for
    membership of such points.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def on_hull_boundary(p: Point, hull: Sequence[Point]) -> bool:
    """Whether ``p`` lies on the boundary of the CCW hull cycle ``hull``."""
    if len(hull) == 1:
        return p == hull[0]
    if len(hull) == 2:
        return on_segment(p, hull[0], hull[1])
    return any(on_segment(p, hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull)))


def signed_area2(vertices: Sequence[Point]) -> Coord:
    """Twice the signed area (shoelace)."""
    n = len(vertices)
    s = 0
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return _norm(s)


def dist2_point_segment(p: Point, a: Point, b: Point) -> Coord:
    """Squared Euclidean distance from ``p`` to the closed segment ab (exact)."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    px, py = p[0] - a[0], p[1] - a[1]
    ll = dx * dx + dy * dy
    if ll == 0:
        return _norm(px * px + py * py)
    t = mpq(px * dx + py * dy) / ll
    if t <= 0:
        return _norm(px * px + py * py)
    if t >= 1:
        qx, qy = p[0] - b[0], p[1] - b[1]
        return _norm(qx * qx + qy * qy)
    cx, cy = px - t * dx, py - t * dy
    return _norm(cx * cx + cy * cy)


__all__ = [
    "ANY",
    "CCW",
    "COLLINEAR",
    "CW",
    "Coord",
    "GeometryError",
    "NoIntersection",
    "Orientation",
    "OverlapNotPoint",
    "PROPER",
    "Point",
    "Segment",
    "as_fraction",
    "convex_hull",
    "cross",
    "dist2_point_segment",
    "format_coord",
    "intersection_point",
    "line_intersection",
    "make_point",
    "on_hull_boundary",
    "on_segment",
    "orient",
    "pt",
    "segments_intersect",
    "signed_area2",
    "strictly_between",
    "to_coord",
]
