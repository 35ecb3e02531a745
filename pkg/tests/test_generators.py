from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdtree.files import dumps, instance_to_dict
from bdtree.generators import (
    circle_point,
    gen_random_convex,
    gen_random_polygon,
    gen_random_segments,
    gen_tight,
)
from bdtree.geom import cross, segments_intersect
from bdtree.polygon import Polygon, classify_vertices, is_convex, is_simple, sees


@given(st.floats(-10, 10))
def test_circle_point_exact(theta):
    x, y = circle_point(theta)
    assert x * x + y * y == 1


class TestTight:
    @pytest.mark.parametrize("n,verts,a_size", [(1, 5, 4), (3, 11, 8)])
    def test_sizes(self, n, verts, a_size):
        inst = gen_tight(n)
        assert len(inst.polygon) == verts == 3 * n + 2
        assert len(inst.a_indices) == a_size
        assert len(classify_vertices(Polygon(tuple(inst.polygon))).reflex) == n

    def test_marks_are_last_two(self):
        inst = gen_tight(4)
        assert (inst.v1, inst.v2) == (len(inst.polygon) - 2, len(inst.polygon) - 1)

    @pytest.mark.parametrize("n", [1, 2, 5, 12])
    def test_visibility_restriction(self, n):
        inst = gen_tight(n)
        poly = Polygon(tuple(inst.polygon))
        poly.validate()
        reflex = classify_vertices(poly).reflex
        for r in reflex:
            tip = r - 1
            seen = {j for j in range(len(poly)) if j != tip and sees(poly, poly[tip], poly[j])}
            assert seen == {r, tip - 1}

    def test_base_is_convex(self):
        inst = gen_tight(3)
        reflex = classify_vertices(Polygon(tuple(inst.polygon))).reflex
        base = [p for i, p in enumerate(inst.polygon) if i not in reflex and i + 1 not in reflex]
        assert is_convex(Polygon(tuple(base)))

    def test_n_zero_rejected(self):
        with pytest.raises(ValueError):
            gen_tight(0)


class TestRandom:
    def test_polygon_deterministic(self):
        assert dumps(instance_to_dict(gen_random_polygon(30, 5))) == dumps(instance_to_dict(gen_random_polygon(30, 5)))

    def test_segments_deterministic(self):
        assert dumps(instance_to_dict(gen_random_segments(15, 5))) == dumps(instance_to_dict(gen_random_segments(15, 5)))

    @settings(max_examples=30)
    @given(st.integers(3, 60), st.integers(0, 10**6))
    def test_polygon_valid(self, n, seed):
        inst = gen_random_polygon(n, seed)
        assert is_simple(inst.polygon)
        poly = Polygon(tuple(inst.polygon))
        poly.validate()
        cls = classify_vertices(poly)
        a = set(inst.a_indices)
        assert cls.reflex <= a
        lo = min(range(n), key=lambda i: inst.polygon[i])
        hi = max(range(n), key=lambda i: inst.polygon[i])
        assert {lo, hi} <= a
        assert inst.v1 != inst.v2 and {inst.v1, inst.v2} <= a - cls.reflex

    @given(st.integers(3, 40), st.integers(0, 10**6))
    def test_convex_valid(self, n, seed):
        inst = gen_random_convex(n, seed)
        poly = Polygon(tuple(inst.polygon))
        poly.validate()
        assert is_convex(poly)

    @settings(max_examples=30)
    @given(st.integers(1, 30), st.integers(0, 10**6))
    def test_segments_disjoint_general_position(self, n, seed):
        segs = gen_random_segments(n, seed).segments
        assert len(segs) == n
        for s, t in combinations(segs, 2):
            assert not segments_intersect(s, t)
        pts = [p for s in segs for p in s]
        assert len(set(pts)) == 2 * n
        for a, b, c in combinations(pts, 3):
            assert cross(a, b, c) != 0

    def test_polygon_too_small(self):
        with pytest.raises(ValueError):
            gen_random_polygon(2, 0)
