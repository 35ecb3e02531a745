import random
from math import pi

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bdtree import verify as V
from bdtree.generators import circle_point, gen_random_convex, gen_random_polygon, gen_tight
from bdtree.geom import pt
from bdtree.polygon import Polygon, classify_vertices
from bdtree.tree_builder import (
    GeomTree,
    InvalidInstance,
    MarkedInstance,
    TooFewVertices,
    build_convex_path,
    build_tree,
    drop_removable,
    select_default_marks,
)


def full_report(poly, tree, marks):
    r = V.check_tree(tree.points, tree.edges)
    r.extend(V.check_inscribed(tree.points, tree.edges, poly.vertices))
    r.extend(V.check_degrees(tree.points, tree.edges, V.reflex_points(poly.vertices), marks))
    return r


def edge_set(pairs):
    return {frozenset(e) for e in pairs}


def hexagon():
    # rational points close to a regular hexagon
    return Polygon(tuple(circle_point(2 * pi * k / 6) for k in range(6)))


class TestMarks:
    def test_square_lex_extremes(self, square):
        m = select_default_marks(MarkedInstance(square, frozenset(range(4))))
        assert (square[m.v1], square[m.v2]) == (pt(0, 0), pt(1, 1))
        assert not m.removable

    def test_two_convex_members_forced(self, L):
        m = select_default_marks(MarkedInstance(L, frozenset({1, 3, 4})))
        assert {m.v1, m.v2} == {1, 4}

    def test_reflex_only_adds_extremes(self, L):
        m = select_default_marks(MarkedInstance(L, frozenset({3})))
        assert {m.v1, m.v2} == {0, 2}
        assert m.removable == frozenset({0, 2})
        tree = drop_removable(build_tree(m), m)
        assert tree.points == (pt(1, 1),) and tree.edges == ()

    def test_too_few(self, square):
        with pytest.raises(TooFewVertices):
            select_default_marks(MarkedInstance(square, frozenset()))

    def test_single_convex_member(self, square):
        m = select_default_marks(MarkedInstance(square, frozenset({1})))
        assert m.removable == frozenset({0, 2})
        tree = drop_removable(build_tree(m), m)
        assert tree.points == (square[1],) and tree.edges == ()

    def test_reflex_mark_rejected(self, L):
        with pytest.raises(InvalidInstance):
            MarkedInstance(L, frozenset(range(6)), 3, 0).validate()

    def test_a_must_contain_reflex(self, L):
        with pytest.raises(InvalidInstance):
            MarkedInstance(L, frozenset({0, 1}), 0, 1).validate()


class TestConvexPath:
    def test_square(self, square):
        path = build_convex_path(square, square.vertices, (square[0], square[2]))
        assert edge_set(path) == edge_set([(square[0], square[1]), (square[1], square[3]), (square[3], square[2])])

    def test_two_vertices(self, square):
        assert edge_set(build_convex_path(square, (square[0], square[2]), (square[0], square[2]))) == edge_set(
            [(square[0], square[2])]
        )

    def test_hexagon_opposite_marks(self):
        h = hexagon()
        path = build_convex_path(h, h.vertices, (h[0], h[3]))
        tree = GeomTree.from_point_edges(h.vertices, path)
        assert len(tree.edges) == 5
        assert full_report(h, tree, [h[0], h[3]]).ok
        assert sorted(tree.degrees()) == [1, 1, 2, 2, 2, 2]

    def test_single_mark_starts_there(self, square):
        path = build_convex_path(square, square.vertices, (square[2],))
        tree = GeomTree.from_point_edges(square.vertices, path)
        assert tree.degrees()[2] == 1 and max(tree.degrees()) == 2

    @given(st.integers(3, 30), st.integers(0, 10**6))
    def test_build_tree_equals_convex_path(self, n, seed):
        inst = gen_random_convex(n, seed)
        poly = Polygon(tuple(inst.polygon))
        marked = MarkedInstance(poly, frozenset(inst.a_indices), inst.v1, inst.v2)
        tree = build_tree(marked)
        path = build_convex_path(poly, poly.vertices, (poly[inst.v1], poly[inst.v2]))
        assert edge_set(tree.segments()) == edge_set(path)


class TestBuildTree:
    def test_L_all(self, L):
        m = select_default_marks(MarkedInstance(L, frozenset(range(6))))
        tree = build_tree(m)
        assert len(tree.edges) == 5
        deg = dict(zip(tree.points, tree.degrees()))
        assert deg[pt(1, 1)] <= 3
        assert deg[L[m.v1]] == deg[L[m.v2]] == 1
        assert full_report(L, tree, [L[m.v1], L[m.v2]]).ok

    def test_two_marks_only(self, square):
        tree = build_tree(MarkedInstance(square, frozenset({0, 2}), 0, 2))
        assert tree.edges == ((0, 1),)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
    def test_tight_all_reflex_degree_three(self, n):
        inst = gen_tight(n)
        poly = Polygon(tuple(inst.polygon))
        tree = build_tree(MarkedInstance(poly, frozenset(inst.a_indices), inst.v1, inst.v2))
        reflex = {poly[i] for i in classify_vertices(poly).reflex}
        deg = dict(zip(tree.points, tree.degrees()))
        assert all(deg[r] == 3 for r in reflex)

    @given(st.integers(6, 30), st.integers(0, 10**6))
    def test_random_polygon_properties(self, n, seed):
        inst = gen_random_polygon(n, seed)
        poly = Polygon(tuple(inst.polygon))
        tree = build_tree(MarkedInstance(poly, frozenset(inst.a_indices), inst.v1, inst.v2))
        assert len(tree.edges) == len(inst.a_indices) - 1
        assert sum(tree.degrees()) == 2 * (len(inst.a_indices) - 1)
        assert full_report(poly, tree, [poly[inst.v1], poly[inst.v2]]).ok

    @given(st.integers(6, 24), st.integers(0, 10**6))
    def test_random_default_marks(self, n, seed):
        inst = gen_random_polygon(n, seed, with_marks=False)
        poly = Polygon(tuple(inst.polygon))
        rng = random.Random(seed)
        reflex = classify_vertices(poly).reflex
        a = set(reflex) | {i for i in range(n) if rng.random() < 0.3}
        if len(a) < 2:
            return
        m = select_default_marks(MarkedInstance(poly, frozenset(a)))
        tree = drop_removable(build_tree(m), m)
        marks = [poly[i] for i in m.marks if i not in m.removable]
        assert {p for p in tree.points} == {poly[i] for i in a}
        assert full_report(poly, tree, marks).ok
