"""Bounded-degree trees inside simple polygons and encompassing trees of segments."""
from .encompass import EncompassConfig, EncompassResult, encompass
from .geom import Point, Segment, orient, pt
from .polygon import Polygon, classify_vertices, make_polygon, sees, shoot_ray, split
from .tree_builder import GeomTree, MarkedInstance, build_tree, select_default_marks

__all__ = [
    "EncompassConfig",
    "EncompassResult",
    "GeomTree",
    "MarkedInstance",
    "Point",
    "Polygon",
    "Segment",
    "build_tree",
    "classify_vertices",
    "encompass",
    "make_polygon",
    "orient",
    "pt",
    "sees",
    "select_default_marks",
    "shoot_ray",
    "split",
]
