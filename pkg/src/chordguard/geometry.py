"""Convex-polygon primitives for the pursuit arena.

Everything here operates on plain ``(x, y)`` tuples and is tolerant to
double-precision noise at the 1e-9 scale (coordinates are assumed to be
O(10^3) in magnitude).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

Point = tuple[float, float]

TOL = 1e-9


class GeometryError(Exception):
    """Base class for geometric failures."""


class EmptyWorkspace(GeometryError):
    """Inward offset left nothing to play in."""


class PointOutside(GeometryError):
    """A query point was required to be inside the polygon."""


class NotConvex(GeometryError):
    """Vertex list does not describe a strictly convex polygon."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"polygon is not convex at vertex index {index}")


def sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def add(a: Point, b: Point) -> Point:
    return (a[0] + b[0], a[1] + b[1])


def scale(a: Point, k: float) -> Point:
    return (a[0] * k, a[1] * k)


def dot(a: Point, b: Point) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Point, b: Point) -> float:
    return a[0] * b[1] - a[1] * b[0]


def norm(a: Point) -> float:
    return math.hypot(a[0], a[1])


def dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def unit(a: Point) -> Point:
    n = norm(a)
    if n <= TOL:
        raise GeometryError("cannot normalize a near-zero vector")
    return (a[0] / n, a[1] / n)


def perp_left(a: Point) -> Point:
    """Rotate a vector 90 degrees counter-clockwise."""
    return (-a[1], a[0])


class Side(Enum):
    POSITIVE = 1
    NEGATIVE = -1
    ON_LINE = 0


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon with counter-clockwise vertices.

    Collinear vertices are merged on construction; near-duplicate vertices
    (within 1e-9) are rejected by the merge as well.
    """

    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = _clean_vertices(list(self.vertices))
        if len(verts) < 3:
            raise NotConvex(0, "fewer than 3 non-collinear vertices")
        n = len(verts)
        for i in range(n):
            a, b, c = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
            if cross(sub(b, a), sub(c, b)) <= TOL:
                raise NotConvex((i + 1) % n)
        object.__setattr__(self, "vertices", tuple(verts))

    @property
    def edges(self) -> list[tuple[Point, Point]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def contains(self, p: Point, tol: float = TOL) -> bool:
        for a, b in self.edges:
            if cross(sub(b, a), sub(p, a)) < -tol:
                return False
        return True

    def distance_to_boundary(self, p: Point) -> float:
        return min(_point_segment_distance(p, a, b) for a, b in self.edges)

    def area(self) -> float:
        v = self.vertices
        s = 0.0
        for i in range(len(v)):
            s += cross(v[i], v[(i + 1) % len(v)])
        return 0.5 * s

    def bounding_box(self) -> tuple[float, float, float, float]:
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))


@dataclass(frozen=True)
class Chord:
    """Maximal in-polygon segment; endpoints lie on the boundary."""

    a: Point
    b: Point

    @property
    def length(self) -> float:
        return dist(self.a, self.b)

    @property
    def direction(self) -> Point:
        return unit(sub(self.b, self.a))


def _clean_vertices(verts: list[Point]) -> list[Point]:
    """Drop duplicates and merge collinear runs, preserving order."""
    out: list[Point] = []
    for v in verts:
        if not out or dist(out[-1], v) > TOL:
            out.append((float(v[0]), float(v[1])))
    while len(out) > 1 and dist(out[0], out[-1]) <= TOL:
        out.pop()
    changed = True
    while changed and len(out) >= 3:
        changed = False
        for i in range(len(out)):
            a = out[i - 1]
            b = out[i]
            c = out[(i + 1) % len(out)]
            if abs(cross(sub(b, a), sub(c, b))) <= TOL:
                out.pop(i)
                changed = True
                break
    return out


def _point_segment_distance(p: Point, a: Point, b: Point) -> float:
    return dist(p, closest_point_on_segment_endpoints(p, a, b))


def closest_point_on_segment_endpoints(p: Point, a: Point, b: Point) -> Point:
    ab = sub(b, a)
    denom = dot(ab, ab)
    if denom <= TOL * TOL:
        return a
    t = dot(sub(p, a), ab) / denom
    t = min(1.0, max(0.0, t))
    return add(a, scale(ab, t))


def closest_point_on_segment(p: Point, s: Chord) -> Point:
    """Nearest point of the closed segment to ``p`` (endpoint-clamped)."""
    return closest_point_on_segment_endpoints(p, s.a, s.b)


def side_of(p: Point, line: Chord, tol: float = TOL) -> Side:
    """Classify a point against the directed line through the chord."""
    v = cross(sub(line.b, line.a), sub(p, line.a))
    if abs(v) <= tol:
        return Side.ON_LINE
    return Side.POSITIVE if v > 0 else Side.NEGATIVE


def erode(workspace: ConvexPolygon, radius: float) -> ConvexPolygon:
    """Inward offset: intersection of all edge half-planes shifted by radius.

    Raises EmptyWorkspace when the offset vanishes (inradius <= radius).
    """
    if radius <= 0:
        raise ValueError("erosion radius must be positive")
    poly = list(workspace.vertices)
    for a, b in workspace.edges:
        n = unit(perp_left(sub(b, a)))  # inward for a CCW polygon
        anchor = add(a, scale(n, radius))
        poly = _clip_half_plane(poly, anchor, n)
        if len(poly) < 3:
            raise EmptyWorkspace(f"offset by {radius} leaves no interior")
    try:
        result = ConvexPolygon(tuple(poly))
    except NotConvex as exc:
        raise EmptyWorkspace(f"offset by {radius} is degenerate") from exc
    if result.area() <= TOL:
        raise EmptyWorkspace(f"offset by {radius} is degenerate")
    return result


def _clip_half_plane(poly: list[Point], anchor: Point, n: Point) -> list[Point]:
    """Sutherland-Hodgman clip of a convex polygon to dot(p - anchor, n) >= 0."""
    out: list[Point] = []
    m = len(poly)
    for i in range(m):
        cur, nxt = poly[i], poly[(i + 1) % m]
        dc = dot(sub(cur, anchor), n)
        dn = dot(sub(nxt, anchor), n)
        if dc >= -TOL:
            out.append(cur)
        if (dc > TOL and dn < -TOL) or (dc < -TOL and dn > TOL):
            t = dc / (dc - dn)
            out.append(add(cur, scale(sub(nxt, cur), t)))
    return out


def longest_chord(q: ConvexPolygon) -> Chord:
    """A diameter of the polygon (always realized by a vertex pair).

    Ties within 1e-9 are broken by the lexicographically smallest ordered
    endpoint pair, so replays are deterministic.
    """
    verts = q.vertices
    best: tuple[Point, Point] | None = None
    best_len = -1.0
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            a, b = verts[i], verts[j]
            if b < a:
                a, b = b, a
            d = dist(a, b)
            if d > best_len + TOL:
                best, best_len = (a, b), d
            elif d > best_len - TOL and best is not None and (a, b) < best:
                best = (a, b)
    assert best is not None
    return Chord(best[0], best[1])


def chord_through(q: ConvexPolygon, point: Point, direction: Point) -> Chord:
    """Maximal segment through ``point`` with the given direction, clipped to q."""
    if not q.contains(point, tol=1e-7):
        raise PointOutside(f"point {point} is not inside the polygon")
    d = unit(direction)
    t_lo, t_hi = -math.inf, math.inf
    for a, b in q.edges:
        n = perp_left(sub(b, a))  # inward normal, unnormalized
        num = dot(sub(a, point), n)
        den = dot(d, n)
        if abs(den) <= TOL:
            continue  # line parallel to this edge
        t = num / den
        if den > 0:
            t_lo = max(t_lo, t)
        else:
            t_hi = min(t_hi, t)
    if not (math.isfinite(t_lo) and math.isfinite(t_hi)) or t_hi < t_lo:
        raise GeometryError("degenerate chord")
    return Chord(add(point, scale(d, t_lo)), add(point, scale(d, t_hi)))


def min_distance_point_to_swept_segment(stationary: Point, path_start: Point,
                                        path_end: Point) -> float:
    """Minimum distance from a fixed point to a straight swept path."""
    return _point_segment_distance(stationary, path_start, path_end)
