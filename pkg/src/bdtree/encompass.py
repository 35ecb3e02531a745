"""Bounded-degree encompassing trees for disjoint segments.

Pipeline: bounding box, hull-guided segment extension into a barrier
network, a thin simple polygon hugging the network from inside, a
bounded-degree inscribed tree on that polygon, the tree mapped back to the
segment endpoints, and finally the segments themselves inserted with one
cycle edge removed per insertion.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import combinations
from typing import Sequence

from gmpy2 import mpq

from .geom import (
    ANY,
    Coord,
    GeometryError,
    Point,
    convex_hull,
    cross,
    dist2_point_segment,
    format_coord,
    line_intersection,
    make_point,
    on_hull_boundary,
    on_segment,
    segments_intersect,
    to_coord,
)
from .polygon import Polygon, classify_vertices, is_simple
from .tree_builder import GeomTree, MarkedInstance, build_tree

log = logging.getLogger(__name__)


class InvalidInput(GeometryError):
    pass


class ExtensionStuck(GeometryError):
    pass


class SimplifyInvalid(GeometryError):
    pass


class VisibilityMismatch(GeometryError):
    pass


class RetryExhausted(GeometryError):
    def __init__(self, message: str, dump: dict):
        super().__init__(message)
        self.dump = dump


Seg = tuple[Point, Point]


@dataclass(frozen=True)
class Barrier:
    segment: int
    tip: Point  # endpoint that is not extended
    end: Point  # extended endpoint
    hit: Point  # where the extension meets the existing structure
    target: tuple[str, int]  # ("box", side) or ("barrier", segment index)


@dataclass
class BarrierSubdivision:
    box: Polygon
    barriers: list[Barrier]

    @property
    def order(self) -> list[int]:
        return [b.segment for b in self.barriers]

    def structure_edges(self) -> list[tuple[Point, Point, tuple[str, int]]]:
        box = self.box.vertices
        edges = [(box[i], box[(i + 1) % 4], ("box", i)) for i in range(4)]
        for b in self.barriers:
            edges.append((b.tip, b.end, ("barrier", b.segment)))
            edges.append((b.end, b.hit, ("barrier", b.segment)))
        return edges


@dataclass
class SlitPolygon:
    q: Polygon
    tip_of: dict[int, int]
    side_of: dict[int, int]
    epsilon: Coord


@dataclass
class EncompassConfig:
    margin: Coord = 1
    epsilon: Coord | None = None
    max_retries: int = 32


@dataclass
class EncompassResult:
    tree: GeomTree
    t0: GeomTree
    subdivision: BarrierSubdivision
    slit: SlitPolygon
    epsilon: Coord
    retries: int
    attempts: list[str] = field(default_factory=list)

    def trace(self) -> dict:
        return {
            "extension_order": self.subdivision.order,
            "attachments": [
                {"segment": b.segment, "extended_endpoint": list(map(format_coord, b.end)),
                 "hit": list(map(format_coord, b.hit)), "target": list(b.target)}
                for b in self.subdivision.barriers
            ],
            "epsilon": format_coord(self.epsilon),
            "retries": self.retries,
            "slit_polygon_vertices": len(self.slit.q),
        }


def validate_segments(segments: Sequence[Seg]) -> None:
    """Reject degenerate, touching or crossing segments and collinear endpoint triples."""
    if not segments:
        raise InvalidInput("no segments")
    for k, (p, q) in enumerate(segments):
        if p == q:
            raise InvalidInput(f"segment {k} has zero length")
    for i, j in combinations(range(len(segments)), 2):
        if segments_intersect(segments[i], segments[j], ANY):
            raise InvalidInput(f"segments {i} and {j} intersect")
    pts = [p for s in segments for p in s]
    for a, b, c in combinations(range(len(pts)), 3):
        if cross(pts[a], pts[b], pts[c]) == 0:
            raise InvalidInput(
                f"collinear endpoints {pts[a]!r}, {pts[b]!r}, {pts[c]!r} "
                f"(segments {a // 2}, {b // 2}, {c // 2})"
            )


def bounding_box(segments: Sequence[Seg], margin: Coord = 1, *, nudge: bool = True) -> Polygon:
    """Axis-aligned rectangle around all endpoints, ``margin`` away.

    With ``nudge`` the vertical margin is enlarged in steps of margin/64
    until no corner is collinear with two endpoints.  Moving a corner
    vertically meets each endpoint line at most once (those lines are never
    vertical through a corner, which lies left or right of all endpoints),
    so the loop terminates.
    """
    margin = to_coord(margin)
    if margin <= 0:
        raise ValueError("margin must be positive")
    pts = [p for s in segments for p in s]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    mx = margin
    k = 0
    while True:
        my = to_coord(margin + mpq(margin) * k / 64)
        lo_x, hi_x, lo_y, hi_y = min(xs) - mx, max(xs) + mx, min(ys) - my, max(ys) + my
        corners = [Point(lo_x, lo_y), Point(hi_x, lo_y), Point(hi_x, hi_y), Point(lo_x, hi_y)]
        if not nudge or not any(
            cross(a, b, c) == 0 for a, b in combinations(pts, 2) for c in corners
        ):
            return Polygon(tuple(corners))
        k += 1


def _ray_hit(origin: Point, d: tuple[Coord, Coord], edges) -> tuple[Point, int] | None:
    """Nearest hit of the ray on ``edges``; None when it lands on an edge
    endpoint or runs along an edge."""
    dx, dy = d
    best_t = None
    best = -1
    at_vertex = False
    for idx, (u, w, _) in enumerate(edges):
        ex, ey = w[0] - u[0], w[1] - u[1]
        rux, ruy = u[0] - origin[0], u[1] - origin[1]
        den = dx * ey - dy * ex
        if den == 0:
            if rux * dy - ruy * dx == 0:
                for x in (u, w):
                    t = mpq((x[0] - origin[0]) * dx + (x[1] - origin[1]) * dy) / (dx * dx + dy * dy)
                    if t > 0 and (best_t is None or t <= best_t):
                        best_t, best, at_vertex = t, idx, True
            continue
        t_num = rux * ey - ruy * ex
        s_num = rux * dy - ruy * dx
        if den < 0:
            t_num, s_num, den = -t_num, -s_num, -den
        if t_num <= 0 or s_num < 0 or s_num > den:
            continue
        t = mpq(t_num) / den
        vert = s_num == 0 or s_num == den
        if best_t is None or t < best_t:
            best_t, best, at_vertex = t, idx, vert
        elif t == best_t:
            at_vertex = True
    if best_t is None or at_vertex:
        return None
    return make_point(origin[0] + best_t * dx, origin[1] + best_t * dy), best


def extend_all(segments: Sequence[Seg], box: Polygon) -> BarrierSubdivision:
    """Extend every segment, one at a time, until it meets the box or an
    earlier extended segment.

    Candidates are (segment, endpoint) pairs whose endpoint lies on the hull
    of the remaining endpoints, tried in lexicographic order of the
    endpoint; the extension must not touch any remaining segment and must
    land in the interior of a structure edge.  If no hull candidate works
    every pair is tried.
    """
    box_v = box.vertices
    edges: list[tuple[Point, Point, tuple[str, int]]] = [
        (box_v[i], box_v[(i + 1) % 4], ("box", i)) for i in range(4)
    ]
    vertices = set(box_v)
    remaining = set(range(len(segments)))
    barriers: list[Barrier] = []

    def attempt(k: int, a: Point, b: Point) -> Barrier | None:
        hit = _ray_hit(a, (a[0] - b[0], a[1] - b[1]), edges)
        if hit is None:
            return None
        x, idx = hit
        if x in vertices:
            return None
        for j in remaining:
            if j != k and segments_intersect((a, x), segments[j], ANY):
                return None
        return Barrier(k, b, a, x, edges[idx][2])

    while remaining:
        pts = [p for j in remaining for p in segments[j]]
        hull = convex_hull(pts)
        cands = []
        wide = []
        for j in remaining:
            p, q = segments[j]
            for a, b in ((p, q), (q, p)):
                (cands if on_hull_boundary(a, hull) else wide).append((a, j, b))
        cands.sort()
        wide.sort()
        chosen = None
        for a, j, b in cands + wide:
            chosen = attempt(j, a, b)
            if chosen is not None:
                break
        if chosen is None:
            raise ExtensionStuck(f"no extendable segment among {sorted(remaining)}")
        barriers.append(chosen)
        remaining.discard(chosen.segment)
        edges.append((chosen.tip, chosen.end, ("barrier", chosen.segment)))
        edges.append((chosen.end, chosen.hit, ("barrier", chosen.segment)))
        vertices.update((chosen.tip, chosen.end, chosen.hit))
    return BarrierSubdivision(box, barriers)


def _angle_cmp(d1, d2) -> int:
    h1 = 0 if (d1[1] > 0 or (d1[1] == 0 and d1[0] > 0)) else 1
    h2 = 0 if (d2[1] > 0 or (d2[1] == 0 and d2[0] > 0)) else 1
    if h1 != h2:
        return h1 - h2
    c = d1[0] * d2[1] - d1[1] * d2[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


def boundary_walk(sub: BarrierSubdivision) -> list[Point]:
    """Vertex sequence of the free face, counterclockwise, with each barrier
    traversed once per side (a weakly simple polygon)."""
    box = sub.box.vertices
    on_box: dict[int, list[Point]] = {i: [box[i], box[(i + 1) % 4]] for i in range(4)}
    on_barrier: dict[int, list[Point]] = {}
    for b in sub.barriers:
        on_barrier[b.segment] = [b.tip, b.end, b.hit]
    for b in sub.barriers:
        kind, idx = b.target
        (on_box if kind == "box" else on_barrier)[idx].append(b.hit)
    adj: dict[Point, set[Point]] = {}

    def link(chain: list[Point], origin: Point) -> None:
        chain = sorted(set(chain), key=lambda p: (p[0] - origin[0]) ** 2 + (p[1] - origin[1]) ** 2)
        for u, w in zip(chain, chain[1:]):
            adj.setdefault(u, set()).add(w)
            adj.setdefault(w, set()).add(u)

    for i, chain in on_box.items():
        link(chain, box[i])
    for b in sub.barriers:
        link(on_barrier[b.segment], b.tip)
    order = {
        v: sorted(nb, key=cmp_to_key(lambda p, q, v=v: _angle_cmp((p[0] - v[0], p[1] - v[1]), (q[0] - v[0], q[1] - v[1]))))
        for v, nb in adj.items()
    }
    start = box[0]
    first = min(adj[start], key=lambda p: (p[1] - start[1], -(p[0] - start[0])))  # east neighbour
    walk = [start]
    prev, cur = start, first
    while not (prev == start and cur == first and len(walk) > 1):
        walk.append(cur)
        nb = order[cur]
        nxt = nb[nb.index(prev) - 1]
        prev, cur = cur, nxt
        if len(walk) > 8 * len(adj) + 8:
            raise GeometryError("boundary walk did not close")
    walk.pop()
    return walk


def _l1_unit(d) -> tuple:
    s = abs(d[0]) + abs(d[1])
    return mpq(d[0]) / s, mpq(d[1]) / s


def simplify(sub: BarrierSubdivision, segments: Sequence[Seg], epsilon: Coord) -> SlitPolygon:
    """Simple polygon Q inside the barrier network, within ``epsilon`` of it.

    Tips stay exact (they become the reflex vertices); every convex corner
    of the walk is replaced by a point pushed into its sector; flat walk
    vertices are dropped except one occurrence of each extended endpoint,
    which gets a vertex bent slightly toward its barrier so it is strictly
    convex.  The result is validated, never assumed.
    """
    epsilon = to_coord(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    walk = boundary_walk(sub)
    m = len(walk)
    tips = {b.tip: b.segment for b in sub.barriers}
    ends = {b.end: b.segment for b in sub.barriers}
    half = mpq(epsilon) / 2
    out: list = []  # Point, or ("side", segment, prev walk pt, next walk pt)
    seen_end: set[int] = set()
    for k in range(m):
        u, v, w = walk[k - 1], walk[k], walk[(k + 1) % m]
        if u == w:
            if v not in tips:
                raise SimplifyInvalid(f"dead end at non-tip {v!r}")
            out.append(v)
            continue
        c = cross(v, w, u)
        if c > 0:
            d_out = _l1_unit((w[0] - v[0], w[1] - v[1]))
            d_in = _l1_unit((u[0] - v[0], u[1] - v[1]))
            out.append(make_point(v[0] + half * (d_out[0] + d_in[0]), v[1] + half * (d_out[1] + d_in[1])))
        elif c == 0:
            j = ends.get(v)
            if j is not None and j not in seen_end:
                seen_end.add(j)
                out.append(("side", j, u, w))
        else:
            raise SimplifyInvalid(f"reflex corner at non-tip {v!r}")
    n_out = len(out)
    qv: list[Point] = []
    side_points: dict[int, Point] = {}
    for k, item in enumerate(out):
        if isinstance(item, Point):
            qv.append(item)
            continue
        _, j, u, w = item
        prev_q = out[k - 1]
        next_q = out[(k + 1) % n_out]
        if not isinstance(prev_q, Point) or not isinstance(next_q, Point):
            raise SimplifyInvalid("adjacent side markers")
        a = next(b.end for b in sub.barriers if b.segment == j)
        normal = (-(w[1] - u[1]), w[0] - u[0])
        z = line_intersection(a, Point(a[0] + normal[0], a[1] + normal[1]), prev_q, next_q)
        if z is None or cross(u, w, z) <= 0:
            raise SimplifyInvalid(f"no room for the side vertex of segment {j}")
        side = make_point(mpq(a[0] + z[0]) / 2, mpq(a[1] + z[1]) / 2)
        side_points[j] = side
        qv.append(side)
    q = Polygon(tuple(qv))
    index = {p: i for i, p in enumerate(qv)}
    if len(index) != len(qv):
        raise SimplifyInvalid("repeated vertex in Q")
    tip_of = {j: index[t] for t, j in tips.items()}
    side_of = {j: index[p] for j, p in side_points.items()}
    if set(side_of) != set(tip_of):
        raise SimplifyInvalid("some segment lacks a side vertex")
    slit = SlitPolygon(q, tip_of, side_of, epsilon)
    _validate_slit(slit, sub)
    return slit


def _validate_slit(slit: SlitPolygon, sub: BarrierSubdivision) -> None:
    q = slit.q
    if q.area2() <= 0:
        raise SimplifyInvalid("Q is not counterclockwise")
    if not is_simple(q.vertices):
        raise SimplifyInvalid("Q is not simple")
    reflex = classify_vertices(q).reflex
    if reflex != set(slit.tip_of.values()):
        raise SimplifyInvalid(f"reflex vertices of Q are {sorted(reflex)}, expected the tips")
    eps2 = slit.epsilon * slit.epsilon
    struct = sub.structure_edges()
    for v in q.vertices:
        if min(dist2_point_segment(v, a, b) for a, b, _ in struct) > eps2:
            raise SimplifyInvalid(f"Q vertex {v!r} is farther than epsilon from the barriers")
    tips = {q[i] for i in slit.tip_of.values()}
    for x, y in q.edges():
        for a, b, _ in struct:
            if not segments_intersect((x, y), (a, b), ANY):
                continue
            # only allowed contact: a Q edge leaving a tip, off the barrier's line
            if not any(
                t in tips and on_segment(t, a, b) and cross(a, b, o) != 0 for t, o in ((x, y), (y, x))
            ):
                raise SimplifyInvalid(f"Q edge {x!r}-{y!r} touches the barrier network")


def feature_size(sub: BarrierSubdivision) -> Coord:
    """Smallest L-infinity distance between distinct structure vertices."""
    pts = set(sub.box.vertices)
    for b in sub.barriers:
        pts.update((b.tip, b.end, b.hit))
    pts = sorted(pts)
    best = None
    for p, r in combinations(pts, 2):
        d = max(abs(p[0] - r[0]), abs(p[1] - r[1]))
        if best is None or d < best:
            best = d
    return best


def build_t0(slit: SlitPolygon, segments: Sequence[Seg]) -> GeomTree:
    """Inscribed tree on Q (tips and side vertices), mapped back to the
    segment endpoints.  Points are ordered [s0.p, s0.q, s1.p, ...]."""
    q = slit.q
    a_set = frozenset(slit.tip_of.values()) | frozenset(slit.side_of.values())
    sides = sorted(slit.side_of.values(), key=lambda i: q[i])
    if len(sides) >= 2:
        inst = MarkedInstance(q, a_set, sides[0], sides[-1])
    else:
        inst = MarkedInstance(q, a_set, sides[0])
    tq = build_tree(inst)
    back: dict[Point, Point] = {}
    for j, i in slit.tip_of.items():
        back[q[i]] = q[i]
    for j, i in slit.side_of.items():
        tip = q[slit.tip_of[j]]
        p0, p1 = segments[j]
        back[q[i]] = p1 if p0 == tip else p0
    points = [p for s in segments for p in s]
    pairs = [(back[tq.points[i]], back[tq.points[j]]) for i, j in tq.edges]
    t0 = GeomTree.from_point_edges(points, pairs)
    _check_mapped(t0, segments)
    return t0


def _check_mapped(t0: GeomTree, segments: Sequence[Seg]) -> None:
    segs = t0.segments()
    if len(t0.edges) != len(t0.points) - 1:
        raise VisibilityMismatch("mapped edge count changed")
    for (e1, s1), (e2, s2) in combinations(zip(t0.edges, segs), 2):
        if set(e1) & set(e2):
            continue
        if segments_intersect(s1, s2, ANY):
            raise VisibilityMismatch(f"mapped edges {s1} and {s2} meet")
    for x, y in segs:
        for p, r in segments:
            if {x, y} == {p, r}:
                continue
            if not segments_intersect((x, y), (p, r), ANY):
                continue
            shared = {x, y} & {p, r}
            if not shared:
                raise VisibilityMismatch(f"mapped edge {x!r}-{y!r} meets segment {p!r}-{r!r}")
            # sharing one endpoint: any other contact would need 3 collinear endpoints
            o = y if x in shared else x
            s_other = r if p in shared else p
            if cross(p, r, o) == 0 or cross(x, y, s_other) == 0:
                raise VisibilityMismatch(f"mapped edge {x!r}-{y!r} runs along segment {p!r}-{r!r}")


def add_segments_with_swaps(
    t0: GeomTree, segments: Sequence[Seg], order: Sequence[int], tips: dict[int, Point] | None = None
) -> GeomTree:
    """Insert each segment; when it closes a cycle drop the cycle edge at
    the endpoint whose degree is now larger (ties: at the tip)."""
    index = {p: i for i, p in enumerate(t0.points)}
    adj: dict[int, set[int]] = {i: set() for i in range(len(t0.points))}
    for i, j in t0.edges:
        adj[i].add(j)
        adj[j].add(i)
    for k in order:
        p, r = segments[k]
        tip = tips[k] if tips else r
        u_pt, v_pt = (r, p) if p == tip else (p, r)
        u, v = index[u_pt], index[v_pt]
        if v in adj[u]:
            continue
        path = _tree_path(adj, u, v)
        adj[u].add(v)
        adj[v].add(u)
        if len(adj[u]) > len(adj[v]):
            x, y = u, path[1]
        else:
            x, y = v, path[-2]
        adj[x].discard(y)
        adj[y].discard(x)
    edges = tuple(sorted((i, j) for i in adj for j in adj[i] if i < j))
    return GeomTree(t0.points, edges)


def _tree_path(adj: dict[int, set[int]], s: int, t: int) -> list[int]:
    parent = {s: None}
    dq = deque([s])
    while dq:
        x = dq.popleft()
        if x == t:
            break
        for y in sorted(adj[x]):
            if y not in parent:
                parent[y] = x
                dq.append(y)
    if t not in parent:
        raise GeometryError("tree is disconnected")
    path = [t]
    while path[-1] != s:
        path.append(parent[path[-1]])
    return path[::-1]


def encompass(segments: Sequence[Seg], config: EncompassConfig | None = None) -> EncompassResult:
    """Max-degree-3 non-crossing spanning tree on the endpoints containing every segment."""
    config = config or EncompassConfig()
    segments = [(Point(*map(to_coord, p)), Point(*map(to_coord, q))) for p, q in segments]
    validate_segments(segments)
    box = bounding_box(segments, config.margin)
    sub = extend_all(segments, box)
    eps = to_coord(config.epsilon) if config.epsilon is not None else to_coord(mpq(feature_size(sub)) / 16)
    attempts: list[str] = []
    for retry in range(config.max_retries + 1):
        try:
            slit = simplify(sub, segments, eps)
            t0 = build_t0(slit, segments)
        except (SimplifyInvalid, VisibilityMismatch) as exc:
            attempts.append(f"epsilon={format_coord(eps)}: {exc}")
            log.info("retry %d: %s", retry, exc)
            eps = to_coord(mpq(eps) / 2)
            continue
        tips = {b.segment: b.tip for b in sub.barriers}
        tree = add_segments_with_swaps(t0, segments, sub.order, tips)
        return EncompassResult(tree, t0, sub, slit, eps, retry, attempts)
    dump = {
        "segments": [[list(map(format_coord, p)), list(map(format_coord, q))] for p, q in segments],
        "extension_order": sub.order,
        "attempts": attempts,
    }
    raise RetryExhausted(f"gave up after {config.max_retries} retries", dump)
