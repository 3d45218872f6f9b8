"""Exact rational planar geometry: convex hulls, polygonal norms, polarity."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

Point = tuple  # (Fraction, Fraction)


class GeometryError(ValueError):
    pass


def as_point(p) -> Point:
    x, y = p
    return (Fraction(x), Fraction(y))


def cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def det(a: Point, b: Point) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def convex_hull(points: Iterable) -> list[Point]:
    """Counterclockwise hull vertices (monotone chain), collinear points dropped."""
    pts = sorted(set(as_point(p) for p in points))
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


def polygon_area(poly: Sequence[Point]) -> Fraction:
    n = len(poly)
    return sum((det(poly[i], poly[(i + 1) % n]) for i in range(n)), Fraction(0)) / 2


def clip(poly: Sequence[Point], a, b, c) -> list[Point]:
    """Part of a convex polygon where ``a x + b y + c >= 0``."""
    out: list[Point] = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp = a * p[0] + b * p[1] + c
        fq = a * q[0] + b * q[1] + c
        if fp >= 0:
            out.append(p)
        if (fp > 0 and fq < 0) or (fp < 0 and fq > 0):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    # drop repeated vertices produced by clipping through a corner
    dedup: list[Point] = []
    for p in out:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def integrate_quadratic(poly: Sequence[Point], f: Callable[[Point], Fraction]) -> Fraction:
    """Exact integral of a quadratic ``f`` over a convex polygon.

    The edge-midpoint rule ``|T| (f(m12) + f(m23) + f(m31)) / 3`` is exact for
    quadratics on a triangle.
    """
    total = Fraction(0)
    if len(poly) < 3:
        return total
    p0 = poly[0]
    for i in range(1, len(poly) - 1):
        p1, p2 = poly[i], poly[i + 1]
        area = cross(p0, p1, p2) / 2
        if area == 0:
            continue
        mids = [
            ((p0[0] + p1[0]) / 2, (p0[1] + p1[1]) / 2),
            ((p1[0] + p2[0]) / 2, (p1[1] + p2[1]) / 2),
            ((p2[0] + p0[0]) / 2, (p2[1] + p0[1]) / 2),
        ]
        total += area * sum((f(m) for m in mids), Fraction(0)) / 3
    return total


class PolygonalNorm:
    """Norm whose unit ball is a centrally symmetric convex polygon.

    ``vertices`` are rational and listed counterclockwise; each one is an
    extreme point.
    """

    def __init__(self, vertices: Iterable):
        verts = [as_point(v) for v in vertices]
        hull = convex_hull(verts)
        if len(hull) < 3 or polygon_area(hull) == 0:
            raise GeometryError("unit ball is degenerate (contained in a line)")
        if len(hull) != len(set(verts)):
            raise GeometryError("all listed points must be extreme points of the unit ball")
        if set((-x, -y) for x, y in hull) != set(hull):
            raise GeometryError("unit ball must be centrally symmetric")
        # start at the vertex with smallest angle in [0, 2pi) for a canonical order
        start = min(range(len(hull)), key=lambda i: _angle_key(hull[i]))
        self.vertices: tuple[Point, ...] = tuple(hull[start:] + hull[:start])
        self._normals = tuple(self._facet_normals())
        self._fnormals = np.array([[float(a), float(b)] for a, b in self._normals])

    def _facet_normals(self):
        n = len(self.vertices)
        for i in range(n):
            p, q = self.vertices[i], self.vertices[(i + 1) % n]
            d = det(p, q)
            if d <= 0:
                raise GeometryError("origin must lie strictly inside the unit ball")
            # f with <p, f> = <q, f> = 1
            yield ((q[1] - p[1]) / d, (p[0] - q[0]) / d)

    @property
    def facet_normals(self) -> tuple[Point, ...]:
        """Vertices of the polar body, one per edge, counterclockwise."""
        return self._normals

    def __len__(self) -> int:
        return len(self.vertices)

    def norm(self, v) -> Fraction:
        """Exact norm of a rational vector."""
        v = as_point(v)
        return max(v[0] * f[0] + v[1] * f[1] for f in self._normals)

    def __call__(self, x) -> np.ndarray:
        return np.max(np.asarray(x, dtype=float) @ self._fnormals.T, axis=-1)

    def contains(self, v) -> bool:
        return self.norm(v) <= 1

    def area(self) -> Fraction:
        return polygon_area(self.vertices)

    def scaled(self, s) -> "PolygonalNorm":
        s = Fraction(s)
        return PolygonalNorm([(s * x, s * y) for x, y in self.vertices])

    def linear_image(self, M) -> "PolygonalNorm":
        M = [[Fraction(v) for v in row] for row in M]
        return PolygonalNorm(
            [(M[0][0] * x + M[0][1] * y, M[1][0] * x + M[1][1] * y) for x, y in self.vertices]
        )

    def float_vertices(self) -> np.ndarray:
        return np.array([[float(x), float(y)] for x, y in self.vertices])

    def __eq__(self, other) -> bool:
        return isinstance(other, PolygonalNorm) and set(self.vertices) == set(other.vertices)

    def __hash__(self) -> int:
        return hash(frozenset(self.vertices))

    def __repr__(self) -> str:
        return "PolygonalNorm([" + ", ".join(f"({x}, {y})" for x, y in self.vertices) + "])"


def _angle_key(p: Point):
    return float(np.arctan2(float(p[1]), float(p[0])) % (2 * np.pi))


def polar(P: PolygonalNorm) -> PolygonalNorm:
    """Unit ball of the dual norm."""
    return PolygonalNorm(P.facet_normals)


def rotate90(P: PolygonalNorm) -> PolygonalNorm:
    return PolygonalNorm([(-y, x) for x, y in P.vertices])


def isoperimetrix(P: PolygonalNorm) -> PolygonalNorm:
    """Polar body rotated by a quarter turn; its edges are parallel to the vertices of ``P``."""
    return rotate90(polar(P))


def l1_norm() -> PolygonalNorm:
    return PolygonalNorm([(1, 0), (0, 1), (-1, 0), (0, -1)])


def regular_polygon_norm(k: int, denominator: int = 10**6) -> PolygonalNorm:
    """Rational approximation of a regular ``2k``-gon inscribed in the unit circle."""
    pts = []
    for i in range(2 * k):
        th = np.pi * i / k
        pts.append(
            (
                Fraction(np.cos(th)).limit_denominator(denominator),
                Fraction(np.sin(th)).limit_denominator(denominator),
            )
        )
    # enforce exact central symmetry
    half = pts[:k]
    return PolygonalNorm(half + [(-x, -y) for x, y in half])
