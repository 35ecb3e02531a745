"""Independent validators and a brute-force existence oracle.

Nothing here calls into the builders or the polygon module; every check is
written directly against the exact predicates in :mod:`bdtree.geom`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from gmpy2 import mpq

from .geom import ANY, PROPER, Point, cross, make_point, on_segment, orient, segments_intersect


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def extend(self, other: Report) -> Report:
        self.checks.extend(other.checks)
        return self

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_list(self) -> list[dict]:
        return [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks]


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def check_tree(points: Sequence[Point], edges: Sequence[tuple[int, int]]) -> Report:
    report = Report()
    n = len(points)
    bad = [e for e in edges if not (0 <= e[0] < n and 0 <= e[1] < n) or e[0] == e[1]]
    if bad:
        report.add("edges-valid", False, f"invalid edges {bad[:3]}")
        return report
    dsu = _DSU(n)
    cycle_edge = None
    for i, j in edges:
        if not dsu.union(i, j) and cycle_edge is None:
            cycle_edge = (i, j)
    report.add("acyclic", cycle_edge is None, "" if cycle_edge is None else f"cycle closed by edge {cycle_edge}")
    roots = {dsu.find(i) for i in range(n)}
    report.add("connected", len(roots) <= 1, "" if len(roots) <= 1 else f"{len(roots)} components (disconnected)")
    report.add(
        "edge-count",
        len(edges) == max(n - 1, 0),
        f"{len(edges)} edges on {n} vertices",
    )
    return report


def _degrees(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    deg = [0] * n
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    return deg


def reflex_points(vertices: Sequence[Point]) -> set[Point]:
    n = len(vertices)
    return {vertices[i] for i in range(n) if orient(vertices[i - 1], vertices[i], vertices[(i + 1) % n]) < 0}


def check_degrees(
    points: Sequence[Point],
    edges: Sequence[tuple[int, int]],
    reflex: Iterable[Point],
    marks: Iterable[Point] = (),
) -> Report:
    """Reflex vertices at most 3, others at most 2, marks exactly 1."""
    reflex = set(reflex)
    marks = set(marks)
    deg = _degrees(len(points), edges)
    report = Report()
    over = [(points[i], d) for i, d in enumerate(deg) if d > (3 if points[i] in reflex else 2)]
    report.add("degree-bounds", not over, "" if not over else f"over bound: {over[:3]}")
    wrong_marks = [(p, deg[i]) for i, p in enumerate(points) if p in marks and deg[i] != 1]
    if marks:
        missing = marks - set(points)
        report.add(
            "marks-are-leaves",
            not wrong_marks and not missing,
            "" if not (wrong_marks or missing) else f"marks with degree != 1: {wrong_marks[:3]} missing: {sorted(missing)[:3]}",
        )
    return report


def _winding(vertices: Sequence[Point], x: Point) -> int | None:
    """Winding number of the closed polyline about x, None when x is on it."""
    wn = 0
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        if on_segment(x, a, b):
            return None
        if a[1] <= x[1]:
            if b[1] > x[1] and cross(a, b, x) > 0:
                wn += 1
        elif b[1] <= x[1] and cross(a, b, x) < 0:
            wn -= 1
    return wn


def edge_inscribed(vertices: Sequence[Point], a: Point, b: Point) -> bool:
    """Polygon edge, or an open segment in the open interior of the polygon."""
    n = len(vertices)
    for i in range(n):
        u, w = vertices[i], vertices[(i + 1) % n]
        if {u, w} == {a, b}:
            return True
    for v in vertices:
        if v != a and v != b and on_segment(v, a, b):
            return False
    for i in range(n):
        u, w = vertices[i], vertices[(i + 1) % n]
        if segments_intersect((a, b), (u, w), PROPER):
            return False
        # a or b in the interior of an edge with ab running along it
        for x in (a, b):
            if x != u and x != w and on_segment(x, u, w):
                y = b if x == a else a
                if cross(u, w, y) == 0:
                    return False
    mid = make_point(mpq(a[0] + b[0]) / 2, mpq(a[1] + b[1]) / 2)
    wn = _winding(vertices, mid)
    return wn is not None and wn != 0


def check_noncrossing(points: Sequence[Point], edges: Sequence[tuple[int, int]]) -> Report:
    """Edges meet only at shared endpoints, and no edge passes through a vertex."""
    report = Report()
    bad = None
    segs = [(points[i], points[j]) for i, j in edges]
    for (e1, s1), (e2, s2) in combinations(zip(edges, segs), 2):
        shared = set(e1) & set(e2)
        if not shared:
            if segments_intersect(s1, s2, ANY):
                bad = (e1, e2)
                break
        else:
            k = shared.pop()
            p = points[k]
            x = s1[0] if s1[1] == p else s1[1]
            y = s2[0] if s2[1] == p else s2[1]
            if cross(p, x, y) == 0 and (x[0] - p[0]) * (y[0] - p[0]) + (x[1] - p[1]) * (y[1] - p[1]) > 0:
                bad = (e1, e2)
                break
    if bad is None:
        used = {i for e in edges for i in e}
        for (i, j), (a, b) in zip(edges, segs):
            for k in used:
                if k != i and k != j and on_segment(points[k], a, b):
                    bad = ((i, j), k)
                    break
            if bad:
                break
    report.add("non-crossing", bad is None, "" if bad is None else f"crossing/touching: {bad}")
    return report


def check_inscribed(points: Sequence[Point], edges: Sequence[tuple[int, int]], polygon: Sequence[Point]) -> Report:
    report = Report()
    vset = set(polygon)
    stray = [p for p in points if p not in vset]
    report.add("vertices-on-polygon", not stray, "" if not stray else f"not polygon vertices: {stray[:3]}")
    outside = [(i, j) for i, j in edges if not edge_inscribed(polygon, points[i], points[j])]
    report.add("inscribed", not outside, "" if not outside else f"edges not inscribed: {outside[:3]}")
    report.extend(check_noncrossing(points, edges))
    return report


def check_encompassing(
    points: Sequence[Point], edges: Sequence[tuple[int, int]], segments: Sequence[tuple[Point, Point]]
) -> Report:
    report = Report()
    index = {p: i for i, p in enumerate(points)}
    eset = {(min(i, j), max(i, j)) for i, j in edges}
    missing = []
    for k, (p, q) in enumerate(segments):
        i, j = index.get(p), index.get(q)
        if i is None or j is None or (min(i, j), max(i, j)) not in eset:
            missing.append(k)
    report.add("segments-present", not missing, "" if not missing else f"missing segments {missing[:5]}")
    deg = _degrees(len(points), edges)
    worst = max(deg, default=0)
    report.add("max-degree-3", worst <= 3, f"max degree {worst}")
    report.extend(check_noncrossing(points, edges))
    crossing = []
    for e in edges:
        a, b = points[e[0]], points[e[1]]
        for k, s in enumerate(segments):
            if {a, b} == set(s):
                continue
            if segments_intersect((a, b), s, PROPER):
                crossing.append((e, k))
    report.add("no-segment-crossing", not crossing, "" if not crossing else f"edges crossing segments {crossing[:3]}")
    report.extend(check_tree(points, edges))
    return report


def visibility_edges(polygon: Sequence[Point], a_points: Sequence[Point]) -> list[tuple[int, int]]:
    return [
        (i, j)
        for i, j in combinations(range(len(a_points)), 2)
        if edge_inscribed(polygon, a_points[i], a_points[j])
    ]


def is_valid_witness(
    polygon: Sequence[Point],
    a_points: Sequence[Point],
    marks: Iterable[Point],
    edges: Sequence[tuple[int, int]],
) -> bool:
    """Every tree constraint at once: inscribed non-crossing spanning tree with degree bounds."""
    report = check_tree(a_points, edges)
    report.extend(check_inscribed(a_points, edges, polygon))
    report.extend(check_degrees(a_points, edges, reflex_points(polygon), marks))
    return report.ok


def enumerate_valid_trees(
    polygon: Sequence[Point], a_points: Sequence[Point], marks: Iterable[Point] = (), limit: int = 9
) -> Iterator[tuple[tuple[int, int], ...]]:
    """Every inscribed spanning tree on ``a_points`` meeting the degree rules.

    Recursive include/exclude over visibility edges with degree, crossing and
    cycle pruning.
    """
    k = len(a_points)
    if k > limit:
        raise TooLarge(f"|A| = {k} exceeds the brute-force limit {limit}")
    if k <= 1:
        yield ()
        return
    marks = set(marks)
    reflex = reflex_points(polygon)
    cap = [1 if p in marks else (3 if p in reflex else 2) for p in a_points]
    cand = visibility_edges(polygon, a_points)
    segs = [(a_points[i], a_points[j]) for i, j in cand]
    m = len(cand)
    conflicts = [set() for _ in range(m)]
    for x, y in combinations(range(m), 2):
        if set(cand[x]) & set(cand[y]):
            continue
        if segments_intersect(segs[x], segs[y], ANY):
            conflicts[x].add(y)
            conflicts[y].add(x)
    need = k - 1
    deg = [0] * k
    chosen: list[int] = []

    def component(labels, i):
        while labels[i] != i:
            i = labels[i]
        return i

    def rec(pos: int, labels: list[int]):
        if len(chosen) == need:
            if all(deg[i] == 1 for i, p in enumerate(a_points) if p in marks):
                yield tuple(cand[x] for x in chosen)
            return
        if m - pos < need - len(chosen):
            return
        i, j = cand[pos]
        ri, rj = component(labels, i), component(labels, j)
        if (
            ri != rj
            and deg[i] < cap[i]
            and deg[j] < cap[j]
            and not any(c in conflicts[pos] for c in chosen)
        ):
            new = list(labels)
            new[ri] = rj
            deg[i] += 1
            deg[j] += 1
            chosen.append(pos)
            yield from rec(pos + 1, new)
            chosen.pop()
            deg[i] -= 1
            deg[j] -= 1
        yield from rec(pos + 1, labels)

    yield from rec(0, list(range(k)))


def brute_force_inscribed_tree_exists(
    polygon: Sequence[Point], a_points: Sequence[Point], marks: Iterable[Point] = (), limit: int = 9
) -> bool:
    return next(enumerate_valid_trees(polygon, a_points, marks, limit), None) is not None
