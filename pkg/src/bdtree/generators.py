"""Instance generators: the spiked tight family, random simple polygons,
random convex polygons and random disjoint segment sets."""
from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

from gmpy2 import mpq

from .files import PolygonInstance, SegmentsInstance
from .geom import Point, cross, make_point, segments_intersect
from .polygon import Polygon, classify_vertices, is_simple, sees


class GenerationFailed(RuntimeError):
    pass


def circle_point(theta: float, max_den: int = 10**6) -> Point:
    """Rational point on the unit circle near angle ``theta``.

    Uses the parameterisation ((1-t^2)/(1+t^2), 2t/(1+t^2)) with t a rational
    approximation of tan(theta/2), so the point is exactly on the circle.
    """
    theta = math.remainder(theta, 2 * math.pi)
    if abs(abs(theta) - math.pi) < 1e-12:
        return Point(-1, 0)
    f = Fraction(math.tan(theta / 2)).limit_denominator(max_den)
    t = mpq(f.numerator, f.denominator)
    den = 1 + t * t
    return make_point((1 - t * t) / den, 2 * t / den)


def tight_polygon(n: int, gamma: mpq) -> tuple[list[Point], dict[int, tuple[int, int]]]:
    """Regular (2n+2)-gon with spikes at w_2, w_4, ..., w_{2n}.

    Returns the vertex list and, per spiked k, the indices of (tip, reflex).
    The tip sits half an edge beyond w_k along the edge w_{k-1} -> w_k, and
    the reflex vertex is w_k pulled towards the centre by ``gamma``.
    """
    m = 2 * n + 2
    w = {k: circle_point(2 * math.pi * (k - 1) / m) for k in range(1, m + 1)}
    verts: list[Point] = []
    spikes: dict[int, tuple[int, int]] = {}
    for k in range(1, m + 1):
        if k % 2 == 0 and k <= 2 * n:
            prev, cur = w[k - 1], w[k]
            tip = make_point(cur[0] + mpq(cur[0] - prev[0]) / 2, cur[1] + mpq(cur[1] - prev[1]) / 2)
            inner = make_point((1 - gamma) * cur[0], (1 - gamma) * cur[1])
            spikes[k] = (len(verts), len(verts) + 1)
            verts.extend([tip, inner])
        else:
            verts.append(w[k])
    return verts, spikes


def gen_tight(n: int) -> PolygonInstance:
    """Polygon with n reflex vertices on which every valid tree gives each
    reflex vertex degree exactly 3.

    Each spike tip must see only its own reflex vertex and w_{k-1}; this is
    checked with :func:`sees` and the spike is thinned until it holds.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    m = 2 * n + 2
    gamma = mpq(1, 8 * m)
    for _ in range(40):
        verts, spikes = tight_polygon(n, gamma)
        if _tight_ok(verts, spikes, n):
            break
        gamma /= 2
    else:
        raise GenerationFailed(f"could not build a valid tight polygon for n={n}")
    a = set()
    for tip, inner in spikes.values():
        a.update((tip, inner))
    w_last2 = len(verts) - 2
    w_last = len(verts) - 1
    a.update((w_last2, w_last))
    return PolygonInstance(verts, sorted(a), w_last2, w_last)


def _tight_ok(verts: list[Point], spikes: dict[int, tuple[int, int]], n: int) -> bool:
    if not is_simple(verts):
        return False
    poly = Polygon(tuple(verts))
    if poly.area2() <= 0:
        return False
    reflex = classify_vertices(poly).reflex
    if reflex != {inner for _, inner in spikes.values()}:
        return False
    for tip, inner in spikes.values():
        before = tip - 1
        visible = {j for j in range(len(verts)) if j != tip and sees(poly, verts[tip], verts[j])}
        if visible != {inner, before}:
            return False
    return True


def _general_position(points: list[Point]) -> bool:
    return all(cross(a, b, c) != 0 for a, b, c in combinations(points, 3))


def _two_opt(pts: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Uncross a cyclic order by repeated 2-opt moves.

    Each move strictly shortens the tour, so the loop terminates; points are
    in general position so crossings are always proper.
    """
    n = len(pts)
    order = list(pts)
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            a, b = order[i], order[i + 1]
            for j in range(i + 2, n if i > 0 else n - 1):
                c, d = order[j], order[(j + 1) % n]
                if segments_intersect((a, b), (c, d), "proper"):
                    order[i + 1 : j + 1] = reversed(order[i + 1 : j + 1])
                    changed = True
                    a, b = order[i], order[i + 1]
    return order


def random_simple_polygon(n: int, rng: random.Random, span: int | None = None) -> list[Point]:
    if n < 3:
        raise ValueError("n must be >= 3")
    span = span or max(20, 8 * n)
    for _ in range(100):
        pts = set()
        while len(pts) < n:
            pts.add((rng.randint(0, span), rng.randint(0, span)))
        pts = sorted(pts)
        rng.shuffle(pts)
        points = [Point(x, y) for x, y in pts]
        if not _general_position(points):
            continue
        order = [Point(*p) for p in _two_opt(points)]
        if not is_simple(order):
            continue
        poly = Polygon(tuple(order))
        if poly.area2() < 0:
            order.reverse()
        return order
    raise GenerationFailed(f"no simple polygon with {n} vertices after 100 attempts")


def gen_random_polygon(n: int, seed: int, *, with_marks: bool = True) -> PolygonInstance:
    """Random simple polygon; A is every reflex vertex, each convex vertex
    with probability 1/2, and the two lexicographic extremes."""
    rng = random.Random(seed)
    verts = random_simple_polygon(n, rng)
    poly = Polygon(tuple(verts))
    cls = classify_vertices(poly)
    lo = min(range(n), key=lambda i: verts[i])
    hi = max(range(n), key=lambda i: verts[i])
    a = set(cls.reflex) | {lo, hi}
    for i in sorted(cls.convex):
        if rng.random() < 0.5:
            a.add(i)
    v1 = v2 = None
    if with_marks:
        convex_a = sorted(i for i in a if i in cls.convex)
        v1, v2 = rng.sample(convex_a, 2)
    return PolygonInstance(verts, sorted(a), v1, v2, seed)


def gen_random_convex(n: int, seed: int) -> PolygonInstance:
    """n distinct rational points on the unit circle in CCW order; A = all
    vertices, two random marks."""
    if n < 3:
        raise ValueError("n must be >= 3")
    rng = random.Random(seed)
    ks = sorted(rng.sample(range(-4000, 4001), n))
    verts = []
    for k in ks:
        t = mpq(k, 1000)
        den = 1 + t * t
        verts.append(make_point((1 - t * t) / den, 2 * t / den))
    v1, v2 = rng.sample(range(n), 2)
    return PolygonInstance(verts, list(range(n)), v1, v2, seed)


def gen_random_segments(n: int, seed: int, *, span: int = 1000, max_tries: int = 20000) -> SegmentsInstance:
    """Rejection-sample n pairwise disjoint segments with no three endpoints
    collinear."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    max_len = max(20, int(span / math.sqrt(n)))
    segs: list[tuple[Point, Point]] = []
    endpoints: list[Point] = []
    tries = 0
    while len(segs) < n:
        tries += 1
        if tries > max_tries:
            raise GenerationFailed(f"placed only {len(segs)} of {n} segments")
        p = Point(rng.randint(0, span), rng.randint(0, span))
        q = Point(
            min(span, max(0, p[0] + rng.randint(-max_len, max_len))),
            min(span, max(0, p[1] + rng.randint(-max_len, max_len))),
        )
        if p == q or p in endpoints or q in endpoints:
            continue
        if any(segments_intersect((p, q), s) for s in segs):
            continue
        if any(cross(p, q, e) == 0 for e in endpoints):
            continue
        if any(cross(a, b, x) == 0 for a, b in combinations(endpoints, 2) for x in (p, q)):
            continue
        segs.append((p, q))
        endpoints.extend((p, q))
    return SegmentsInstance(segs, seed)
