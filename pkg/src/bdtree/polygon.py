"""Simple polygons: classification, visibility, ray shooting and splitting."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from gmpy2 import mpq

from .geom import (
    Coord,
    GeometryError,
    Point,
    cross,
    make_point,
    on_segment,
    signed_area2,
    strictly_between,
)


class InvalidPolygon(GeometryError):
    pass


class InvalidChord(GeometryError):
    pass


def _bbox_apart(a, b, c, d) -> bool:
    return (
        max(a[0], b[0]) < min(c[0], d[0])
        or max(c[0], d[0]) < min(a[0], b[0])
        or max(a[1], b[1]) < min(c[1], d[1])
        or max(c[1], d[1]) < min(a[1], b[1])
    )


@dataclass(frozen=True)
class Polygon:
    """Counterclockwise vertex cycle.  Construction does not validate;
    call :meth:`validate` (or :func:`make_polygon`) for untrusted input."""

    vertices: tuple[Point, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def __getitem__(self, i: int) -> Point:
        return self.vertices[i % len(self.vertices)]

    def edges(self) -> Iterator[tuple[Point, Point]]:
        vs = self.vertices
        n = len(vs)
        for i in range(n):
            yield vs[i], vs[(i + 1) % n]

    def edge(self, i: int) -> tuple[Point, Point]:
        n = len(self.vertices)
        return self.vertices[i % n], self.vertices[(i + 1) % n]

    def area2(self) -> Coord:
        return signed_area2(self.vertices)

    def index(self, p: Point) -> int:
        return self.vertices.index(p)

    def validate(self) -> None:
        vs = self.vertices
        if len(vs) < 3:
            raise InvalidPolygon("a polygon needs at least 3 vertices")
        if len(set(vs)) != len(vs):
            raise InvalidPolygon("repeated vertex")
        if not is_simple(vs):
            raise InvalidPolygon("boundary self-intersects")
        if self.area2() <= 0:
            raise InvalidPolygon("vertices are not in counterclockwise order")


def make_polygon(points: Sequence[Point], *, orient_ccw: bool = False) -> Polygon:
    """Build and validate a polygon; optionally reverse a clockwise input."""
    vs = tuple(points)
    if orient_ccw and len(vs) >= 3 and signed_area2(vs) < 0:
        vs = vs[::-1]
    p = Polygon(vs)
    p.validate()
    return p


def is_simple(vs: Sequence[Point]) -> bool:
    """Non-adjacent edges are disjoint; adjacent edges meet only at their vertex."""
    n = len(vs)
    if n < 3:
        return False
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        if a == b:
            return False
        for j in range(i + 1, n):
            c, d = vs[j], vs[(j + 1) % n]
            if _bbox_apart(a, b, c, d):
                continue
            if j == i + 1 or (i == 0 and j == n - 1):
                s_, x, y = (b, a, d) if j == i + 1 else (a, b, c)
                # adjacent edges fold onto each other only when collinear and same-directed
                if cross(s_, x, y) == 0 and (x[0] - s_[0]) * (y[0] - s_[0]) + (x[1] - s_[1]) * (y[1] - s_[1]) > 0:
                    return False
                continue
            o1 = cross(a, b, c)
            o2 = cross(a, b, d)
            o3 = cross(c, d, a)
            o4 = cross(c, d, b)
            if o1 * o2 < 0 and o3 * o4 < 0:
                return False
            if (
                (o1 == 0 and on_segment(c, a, b))
                or (o2 == 0 and on_segment(d, a, b))
                or (o3 == 0 and on_segment(a, c, d))
                or (o4 == 0 and on_segment(b, c, d))
            ):
                return False
    return True


@dataclass(frozen=True)
class VertexClassification:
    reflex: frozenset[int]
    convex: frozenset[int]


def classify_vertices(p: Polygon) -> VertexClassification:
    """A vertex is reflex when the boundary turns clockwise there; flat
    vertices count as convex."""
    vs = p.vertices
    n = len(vs)
    reflex = set()
    for i in range(n):
        if cross(vs[i - 1], vs[i], vs[(i + 1) % n]) < 0:
            reflex.add(i)
    return VertexClassification(frozenset(reflex), frozenset(range(n)) - reflex)


def reflex_indices(p: Polygon) -> list[int]:
    return sorted(classify_vertices(p).reflex)


def is_convex(p: Polygon) -> bool:
    return not classify_vertices(p).reflex


def point_in_polygon(p: Polygon, x: Point) -> int:
    """1 strictly inside, 0 on the boundary, -1 outside (crossing number)."""
    inside = False
    px, py = x
    for a, b in p.edges():
        if on_segment(x, a, b):
            return 0
        ay, by = a[1], b[1]
        if (ay > py) != (by > py):
            # x-coordinate of the edge at height py, compared without division
            c = cross(a, b, x)
            if (c > 0) == (by > ay):
                inside = not inside
    return 1 if inside else -1


def _midpoint(a: Point, b: Point) -> Point:
    return make_point(mpq(a[0] + b[0]) / 2, mpq(a[1] + b[1]) / 2)


def _collinear_contact(a: Point, b: Point, u: Point, w: Point):
    """Overlap of collinear closed segments ab and uw: None, a point, or
    the string "overlap" when it has positive length."""
    k = 0 if a[0] != b[0] else 1
    lo1, hi1 = sorted((a, b), key=lambda p: p[k])
    lo2, hi2 = sorted((u, w), key=lambda p: p[k])
    lo = lo1 if lo1[k] >= lo2[k] else lo2
    hi = hi1 if hi1[k] <= hi2[k] else hi2
    if lo[k] > hi[k]:
        return None
    if lo[k] == hi[k]:
        return lo
    return "overlap"


def touches_only_at_ends(p: Polygon, a: Point, b: Point) -> bool:
    """Whether the closed segment ab meets the boundary of ``p`` only at a and b."""
    vs = p.vertices
    n = len(vs)
    for i in range(n):
        u, w = vs[i], vs[(i + 1) % n]
        if _bbox_apart(a, b, u, w):
            continue
        o1 = cross(a, b, u)
        o2 = cross(a, b, w)
        if o1 == 0 and o2 == 0:
            c = _collinear_contact(a, b, u, w)
            if c == "overlap" or (c is not None and c != a and c != b):
                return False
            continue
        if (o1 > 0 and o2 > 0) or (o1 < 0 and o2 < 0):
            continue
        o3 = cross(u, w, a)
        o4 = cross(u, w, b)
        if (o3 > 0 and o4 > 0) or (o3 < 0 and o4 < 0):
            continue
        # the segments meet in exactly one point; it must be a or b
        if not (on_segment(a, u, w) or on_segment(b, u, w)):
            return False
    return True


def sees(p: Polygon, a: Point, b: Point) -> bool:
    """Whether ab is a polygon edge or runs through the open interior of ``p``.

    Any boundary contact other than at ``a`` or ``b`` blocks sight, including
    grazing a vertex or sliding along an edge.
    """
    if a == b:
        return False
    vs = p.vertices
    n = len(vs)
    for i in range(n):
        u, w = vs[i], vs[(i + 1) % n]
        if (u == a and w == b) or (u == b and w == a):
            return True
    if not touches_only_at_ends(p, a, b):
        return False
    return point_in_polygon(p, _midpoint(a, b)) == 1


@dataclass(frozen=True)
class RayHit:
    q: Point
    edge_index: int
    direction: tuple[Coord, Coord]


def _dyadic_fractions() -> Iterator[mpq]:
    yield mpq(1, 2)
    k = 2
    while True:
        den = 1 << k
        for num in range(1, den, 2):
            yield mpq(num, den)
        k += 1


def cone_contains(p: Polygon, r_index: int, d: tuple[Coord, Coord]) -> bool:
    """Whether direction ``d`` from vertex ``r_index`` leaves both sub-angles
    strictly below pi."""
    r = p[r_index]
    u = (p[r_index + 1][0] - r[0], p[r_index + 1][1] - r[1])
    w = (p[r_index - 1][0] - r[0], p[r_index - 1][1] - r[1])
    return u[0] * d[1] - u[1] * d[0] > 0 and d[0] * w[1] - d[1] * w[0] > 0


def cast_ray(p: Polygon, origin_index: int, d: tuple[Coord, Coord]) -> tuple[Point, int] | None:
    """First boundary point hit by the ray from vertex ``origin_index``.

    Returns (point, edge index), or None when the first hit is a vertex or
    the ray runs along an edge.
    """
    vs = p.vertices
    n = len(vs)
    r = vs[origin_index]
    dx, dy = d
    best_t = None
    best_edge = -1
    vertex_hit = False
    for i in range(n):
        u, w = vs[i], vs[(i + 1) % n]
        if u == r or w == r:
            continue
        ex, ey = w[0] - u[0], w[1] - u[1]
        rux, ruy = u[0] - r[0], u[1] - r[1]
        den = dx * ey - dy * ex
        if den == 0:
            if rux * dy - ruy * dx != 0:
                continue
            for x in (u, w):
                t = mpq((x[0] - r[0]) * dx + (x[1] - r[1]) * dy) / (dx * dx + dy * dy)
                if t > 0 and (best_t is None or t <= best_t):
                    best_t, best_edge, vertex_hit = t, i, True
            continue
        t_num = rux * ey - ruy * ex
        s_num = rux * dy - ruy * dx
        if den < 0:
            t_num, s_num, den = -t_num, -s_num, -den
        if t_num <= 0 or s_num < 0 or s_num > den:
            continue
        t = mpq(t_num) / den
        at_vertex = s_num == 0 or s_num == den
        if best_t is None or t < best_t:
            best_t, best_edge, vertex_hit = t, i, at_vertex
        elif t == best_t:
            vertex_hit = vertex_hit or at_vertex
    if best_t is None:
        raise InvalidPolygon("ray escaped the polygon")
    if vertex_hit:
        return None
    return make_point(r[0] + best_t * dx, r[1] + best_t * dy), best_edge


def shoot_ray(p: Polygon, r_index: int) -> RayHit:
    """Shoot a ray from reflex vertex ``r_index`` into the interior so both
    angles at r become convex, landing in the interior of a boundary edge.

    Directions are positive combinations of the two reversed incident edge
    vectors, which span exactly the feasible cone; the midpoint combination
    is tried first, then dyadic alternatives until the hit avoids vertices.
    """
    n = len(p)
    r_index %= n
    r = p[r_index]
    nxt, prv = p[r_index + 1], p[r_index - 1]
    if cross(prv, r, nxt) >= 0:
        raise InvalidChord(f"vertex {r_index} is not reflex")
    u = (nxt[0] - r[0], nxt[1] - r[1])
    w = (prv[0] - r[0], prv[1] - r[1])
    for t in _dyadic_fractions():
        d = tuple(make_point(-(t * u[0] + (1 - t) * w[0]), -(t * u[1] + (1 - t) * w[1])))
        hit = cast_ray(p, r_index, d)
        if hit is not None:
            q, edge = hit
            return RayHit(q, edge, d)
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class SplitResult:
    p1: Polygon
    p2: Polygon
    r_index_in_p1: int
    r_index_in_p2: int
    q_point: Point


def split(p: Polygon, r_index: int, q: Point, edge_index: int, *, check: bool = True) -> SplitResult:
    """Cut ``p`` along the chord from vertex ``r_index`` to ``q``.

    For q on edge j both parts start at q: p1 = [q, v_{j+1}, ..., r] and
    p2 = [q, r, ..., v_j].
    """
    vs = p.vertices
    n = len(vs)
    r_index %= n
    edge_index %= n
    r = vs[r_index]
    u, w = vs[edge_index], vs[(edge_index + 1) % n]
    if check:
        if not strictly_between(q, u, w):
            raise InvalidChord("q is not in the open interior of the given edge")
        if r_index in (edge_index, (edge_index + 1) % n):
            raise InvalidChord("chord would run along an edge incident to r")
        if not (touches_only_at_ends(p, r, q) and point_in_polygon(p, _midpoint(r, q)) == 1):
            raise InvalidChord("open chord r-q is not in the interior")
    part1 = [q]
    i = (edge_index + 1) % n
    while True:
        part1.append(vs[i])
        if i == r_index:
            break
        i = (i + 1) % n
    part2 = [q, r]
    i = (r_index + 1) % n
    while True:
        part2.append(vs[i])
        if i == edge_index:
            break
        i = (i + 1) % n
    return SplitResult(Polygon(tuple(part1)), Polygon(tuple(part2)), len(part1) - 1, 1, q)
