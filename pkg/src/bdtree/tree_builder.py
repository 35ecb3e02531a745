"""Non-crossing bounded-degree trees inscribed in a simple polygon.

The construction recurses on the number of reflex vertices: a convex
polygon gets a boundary-ordered path between the two marked vertices;
otherwise a reflex vertex r is cut off by a ray into the interior and the
two halves are solved with r listed in both.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .geom import GeometryError, Point, segments_intersect
from .polygon import Polygon, classify_vertices, sees, shoot_ray, split


class InvalidInstance(GeometryError):
    pass


class TooFewVertices(InvalidInstance):
    pass


class BuildError(GeometryError):
    """Internal invariant broken during construction (a bug, not bad input)."""


@dataclass(frozen=True)
class MarkedInstance:
    polygon: Polygon
    a_set: frozenset[int]
    v1: int | None = None
    v2: int | None = None
    # vertices added only to carry marks; they are leaves and may be dropped
    removable: frozenset[int] = frozenset()

    @property
    def marks(self) -> tuple[int, ...]:
        return tuple(v for v in (self.v1, self.v2) if v is not None)

    def validate(self) -> None:
        n = len(self.polygon)
        if any(not 0 <= i < n for i in self.a_set):
            raise InvalidInstance("a_set index out of range")
        cls = classify_vertices(self.polygon)
        missing = cls.reflex - self.a_set
        if missing:
            raise InvalidInstance(f"a_set must contain every reflex vertex; missing {sorted(missing)}")
        marks = self.marks
        if len(set(marks)) != len(marks):
            raise InvalidInstance("marked vertices must be distinct")
        for m in marks:
            if m not in self.a_set:
                raise InvalidInstance(f"mark {m} is not in a_set")
            if m in cls.reflex:
                raise InvalidInstance(f"mark {m} is a reflex vertex")


@dataclass(frozen=True)
class GeomTree:
    points: tuple[Point, ...]
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def from_point_edges(cls, points: Sequence[Point], pairs: Iterable[tuple[Point, Point]]) -> GeomTree:
        index = {p: i for i, p in enumerate(points)}
        edges = set()
        for a, b in pairs:
            i, j = index[a], index[b]
            edges.add((min(i, j), max(i, j)))
        return cls(tuple(points), tuple(sorted(edges)))

    def degrees(self) -> list[int]:
        deg = [0] * len(self.points)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def segments(self) -> list[tuple[Point, Point]]:
        return [(self.points[i], self.points[j]) for i, j in self.edges]

    def without(self, drop: Iterable[int]) -> GeomTree:
        """Delete vertices (and their edges), reindexing the rest."""
        drop = set(drop)
        keep = [i for i in range(len(self.points)) if i not in drop]
        remap = {old: new for new, old in enumerate(keep)}
        edges = tuple(
            sorted((remap[i], remap[j]) for i, j in self.edges if i not in drop and j not in drop)
        )
        return GeomTree(tuple(self.points[i] for i in keep), edges)


def select_default_marks(inst: MarkedInstance) -> MarkedInstance:
    """Choose v1, v2 when the caller did not.

    With at least two convex members of a_set, the lexicographically smallest
    and largest are marked.  Otherwise the polygon's lexicographic extreme
    vertices (always convex) are added, marked and flagged removable.
    """
    if not inst.a_set:
        raise TooFewVertices("a_set is empty")
    p = inst.polygon
    cls = classify_vertices(p)
    convex_members = sorted((i for i in inst.a_set if i in cls.convex), key=lambda i: p[i])
    if len(convex_members) >= 2:
        return MarkedInstance(p, inst.a_set, convex_members[0], convex_members[-1], inst.removable)
    lo = min(range(len(p)), key=lambda i: p[i])
    hi = max(range(len(p)), key=lambda i: p[i])
    added = frozenset({lo, hi}) - inst.a_set
    return MarkedInstance(p, inst.a_set | {lo, hi}, lo, hi, inst.removable | added)


def build_convex_path(poly: Polygon, a: Iterable[Point], marks: Sequence[Point] = ()) -> list[tuple[Point, Point]]:
    """Path through every point of ``a`` inside a convex polygon.

    With two marks the path runs v1, then the a-vertices on the CCW chain
    from v1 to v2, then those on the CW chain (in order from the v1 side),
    ending at v2.  With one mark it starts there and follows the boundary.
    """
    vs = poly.vertices
    n = len(vs)
    members = set(a)
    if len(members) < 2:
        return []
    pos = {p: i for i, p in enumerate(vs)}
    if len(marks) == 2:
        v1, v2 = marks
        i1, i2 = pos[v1], pos[v2]
        ccw_chain = []
        i = (i1 + 1) % n
        while i != i2:
            if vs[i] in members:
                ccw_chain.append(vs[i])
            i = (i + 1) % n
        cw_chain = []
        i = (i1 - 1) % n
        while i != i2:
            if vs[i] in members:
                cw_chain.append(vs[i])
            i = (i - 1) % n
        order = [v1, *ccw_chain, *cw_chain, v2]
    else:
        start = marks[0] if marks else min(members)
        i0 = pos[start]
        order = [vs[(i0 + k) % n] for k in range(n) if vs[(i0 + k) % n] in members]
    path = list(zip(order, order[1:]))
    _assert_noncrossing(path)
    return path


def _assert_noncrossing(edges: Sequence[tuple[Point, Point]]) -> None:
    for i in range(len(edges)):
        a, b = edges[i]
        for j in range(i + 1, len(edges)):
            c, d = edges[j]
            if {a, b} & {c, d}:
                continue
            if segments_intersect((a, b), (c, d)):
                raise BuildError(f"path edges {edges[i]} and {edges[j]} cross")


def _build(poly: Polygon, a: frozenset[Point], marks: tuple[Point, ...]) -> list[tuple[Point, Point]]:
    if len(a) <= 1:
        return []
    if len(a) == 2:
        x, y = sorted(a)
        if sees(poly, x, y):
            return [(x, y)]
    cls = classify_vertices(poly)
    if not cls.reflex:
        return build_convex_path(poly, a, marks)
    r_index = min(cls.reflex, key=lambda i: poly[i])
    r = poly[r_index]
    hit = shoot_ray(poly, r_index)
    parts = split(poly, r_index, hit.q, hit.edge_index)
    sides = []
    for sub in (parts.p1, parts.p2):
        verts = set(sub.vertices)
        sub_a = frozenset(x for x in a if x in verts)
        sides.append((sub, sub_a, tuple(m for m in marks if m in sub_a)))
    (p1, a1, m1), (p2, a2, m2) = sides
    if m1 and m2:
        # marks on different sides: r becomes a leaf on both, degree 2
        return _build(p1, a1, m1 + (r,)) + _build(p2, a2, m2 + (r,))
    if m2:
        (p1, a1, m1), (p2, a2, m2) = (p2, a2, m2), (p1, a1, m1)
    t1 = _build(p1, a1, m1)
    reflex2 = {p2[i] for i in classify_vertices(p2).reflex}
    candidates = sorted(x for x in a2 if x != r and x not in reflex2)
    side_marks = (r, candidates[0]) if candidates else (r,)
    return t1 + _build(p2, a2, side_marks)


def build_tree(inst: MarkedInstance) -> GeomTree:
    """Tree on the a_set vertices, inscribed in the polygon, with degree at
    most 3 at reflex vertices, at most 2 at convex ones and exactly 1 at
    the marks (when |a_set| >= 2)."""
    inst.validate()
    p = inst.polygon
    a = frozenset(p[i] for i in inst.a_set)
    marks = tuple(p[i] for i in inst.marks)
    edges = _build(p, a, marks)
    points = [p[i] for i in sorted(inst.a_set)]
    tree = GeomTree.from_point_edges(points, edges)
    if len(tree.edges) != max(len(points) - 1, 0):
        raise BuildError(f"expected {len(points) - 1} edges, got {len(tree.edges)}")
    return tree


def drop_removable(tree: GeomTree, inst: MarkedInstance) -> GeomTree:
    """Remove the helper marks that :func:`select_default_marks` added."""
    if not inst.removable:
        return tree
    extra = {inst.polygon[i] for i in inst.removable}
    return tree.without(i for i, q in enumerate(tree.points) if q in extra)
