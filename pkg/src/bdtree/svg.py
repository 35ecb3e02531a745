"""Plain SVG 1.1 figures.  Presentation only; floats are used for drawing."""
from __future__ import annotations

from typing import Iterable, Sequence

from .geom import Point

Pts = Sequence[Point]


def _f(c) -> float:
    return float(c)


class Figure:
    def __init__(self, points: Iterable[Point], size: int = 600):
        pts = list(points)
        xs = [_f(p[0]) for p in pts] or [0.0]
        ys = [_f(p[1]) for p in pts] or [0.0]
        self.x0, self.x1 = min(xs), max(xs)
        self.y0, self.y1 = min(ys), max(ys)
        span = max(self.x1 - self.x0, self.y1 - self.y0) or 1.0
        pad = 0.05 * span
        self.x0 -= pad
        self.y0 -= pad
        self.x1 += pad
        self.y1 += pad
        self.scale = size / max(self.x1 - self.x0, self.y1 - self.y0)
        self.w = round((self.x1 - self.x0) * self.scale)
        self.h = round((self.y1 - self.y0) * self.scale)
        self.items: list[str] = []

    def xy(self, p: Point) -> str:
        x = (_f(p[0]) - self.x0) * self.scale
        y = (self.y1 - _f(p[1])) * self.scale
        return f"{x:.2f},{y:.2f}"

    def polygon(self, pts: Pts, fill: str = "#e6e6e6", stroke: str = "#555", width: float = 1.0) -> None:
        coords = " ".join(self.xy(p) for p in pts)
        self.items.append(
            f'<polygon points="{coords}" fill="{fill}" stroke="{stroke}" stroke-width="{width}"/>'
        )

    def line(self, a: Point, b: Point, stroke: str = "#000", width: float = 1.0, dash: str | None = None) -> None:
        (x1, y1), (x2, y2) = self.xy(a).split(","), self.xy(b).split(",")
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(
            f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{stroke}" '
            f'stroke-width="{width}" stroke-linecap="round"{extra}/>'
        )

    def dot(self, p: Point, r: float = 3.0, fill: str = "#000") -> None:
        x, y = self.xy(p).split(",")
        self.items.append(f'<circle cx="{x}" cy="{y}" r="{r}" fill="{fill}"/>')

    def render(self) -> str:
        body = "\n".join(self.items)
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.w}" height="{self.h}" '
            f'viewBox="0 0 {self.w} {self.h}">\n'
            f'<rect width="{self.w}" height="{self.h}" fill="#fff"/>\n{body}\n</svg>\n'
        )


def polygon_tree_svg(polygon: Pts, tree_points: Pts, edges: Sequence[tuple[int, int]],
                     reflex: Iterable[Point] = (), marks: Iterable[Point] = ()) -> str:
    """Polygon shaded, tree edges dashed, reflex vertices red, marks blue."""
    fig = Figure(polygon)
    fig.polygon(polygon)
    for i, j in edges:
        fig.line(tree_points[i], tree_points[j], stroke="#1f4fb4", width=2.5, dash="7,4")
    reflex, marks = set(reflex), set(marks)
    for p in tree_points:
        fig.dot(p, 4.0, "#c62828" if p in reflex else ("#1565c0" if p in marks else "#222"))
    return fig.render()


def encompass_svg(segments: Sequence[tuple[Point, Point]], tree_points: Pts, edges: Sequence[tuple[int, int]],
                  box: Pts | None = None, extensions: Sequence[tuple[Point, Point]] = (),
                  slit: Pts | None = None) -> str:
    """Segments bold, tree edges dashed; optionally the box, extensions and Q."""
    pts = [p for s in segments for p in s] + list(box or [])
    fig = Figure(pts)
    if box:
        fig.polygon(box, fill="#fafafa", stroke="#999")
    if slit:
        fig.polygon(slit, fill="#dddddd", stroke="#bbb", width=0.5)
    for a, b in extensions:
        fig.line(a, b, stroke="#aaa", width=1.0)
    seg_keys = {frozenset(s) for s in segments}
    for i, j in edges:
        if frozenset((tree_points[i], tree_points[j])) not in seg_keys:
            fig.line(tree_points[i], tree_points[j], stroke="#1f4fb4", width=2.0, dash="7,4")
    for a, b in segments:
        fig.line(a, b, stroke="#000", width=4.0)
    for p in tree_points:
        fig.dot(p, 3.0)
    return fig.render()
