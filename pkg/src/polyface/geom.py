"""Exact rational planar geometry.

All predicates and constructions run on `fractions.Fraction` coordinates, so
every comparison in the drawing pipeline is exact.  Distances are irrational
in general; they are represented as :class:`SqrtVal` (the exact square root
of a nonnegative rational), which supports exact ordering comparisons against
rationals and other square roots, multiplication and division by rationals,
but deliberately no addition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence


class GeometryError(Exception):
    pass


class DegenerateCut(GeometryError):
    pass


class NotIncident(GeometryError):
    pass


class NotConvex(GeometryError):
    pass


# ---------------------------------------------------------------------------
# Points and elementary vector ops
# ---------------------------------------------------------------------------


class Point(NamedTuple):
    x: Fraction
    y: Fraction


def pt(x, y) -> Point:
    return Point(Fraction(x), Fraction(y))


def v_sub(a: Point, b: Point) -> Point:
    return Point(a.x - b.x, a.y - b.y)


def v_add(a: Point, b: Point) -> Point:
    return Point(a.x + b.x, a.y + b.y)


def v_scale(a: Point, s: Fraction) -> Point:
    return Point(a.x * s, a.y * s)


def v_lerp(a: Point, b: Point, t: Fraction) -> Point:
    """Point at parameter t on segment a->b (t=0 gives a)."""
    return Point(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)


def cross(o: Point, a: Point, b: Point) -> Fraction:
    """Twice the signed area of triangle (o, a, b); >0 iff left turn."""
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def dot(a: Point, b: Point) -> Fraction:
    return a.x * b.x + a.y * b.y


def dist_sq(a: Point, b: Point) -> Fraction:
    dx, dy = a.x - b.x, a.y - b.y
    return dx * dx + dy * dy


def rot90(a: Point) -> Point:
    """Counterclockwise quarter turn."""
    return Point(-a.y, a.x)


# ---------------------------------------------------------------------------
# Exact square roots of rationals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SqrtVal:
    """The exact value sqrt(sq) for a rational sq >= 0.

    Ordering comparisons against Fractions, ints and other SqrtVals are
    exact (both sides are squared with sign handling).  Closed under
    multiplication and division, not under addition.
    """

    sq: Fraction

    def __post_init__(self):
        if self.sq < 0:
            raise ValueError("SqrtVal of negative rational")

    @staticmethod
    def of(value) -> "SqrtVal":
        """SqrtVal equal to a nonnegative rational value."""
        v = Fraction(value)
        if v < 0:
            raise ValueError("SqrtVal.of needs a nonnegative rational")
        return SqrtVal(v * v)

    def _cmp(self, other) -> int:
        if isinstance(other, SqrtVal):
            a, b = self.sq, other.sq
        else:
            o = Fraction(other)
            if o < 0:
                return 1  # self >= 0 > other
            a, b = self.sq, o * o
        return (a > b) - (a < b)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (SqrtVal, Fraction, int)):
            return self._cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash(("SqrtVal", self.sq))

    def __mul__(self, other):
        if isinstance(other, SqrtVal):
            return SqrtVal(self.sq * other.sq)
        o = Fraction(other)
        if o < 0:
            raise ValueError("cannot scale SqrtVal by a negative rational")
        return SqrtVal(self.sq * o * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SqrtVal):
            if other.sq == 0:
                raise ZeroDivisionError
            return SqrtVal(self.sq / other.sq)
        o = Fraction(other)
        if o <= 0:
            raise ValueError("cannot divide SqrtVal by a nonpositive rational")
        return SqrtVal(self.sq / (o * o))

    def __float__(self):
        return math.sqrt(float(self.sq))

    def is_zero(self) -> bool:
        return self.sq == 0

    def decimal(self, digits: int = 12) -> str:
        """Decimal approximation to `digits` significant digits."""
        if self.sq == 0:
            return "0"
        # sqrt(n/d) = isqrt(n * d * 10^(2k)) / (d * 10^k), then round.
        n, d = self.sq.numerator, self.sq.denominator
        k = digits + 2
        root = math.isqrt(n * d * 10 ** (2 * k))
        val = Fraction(root, d * 10**k)
        exp = len(str(root)) - len(str(d * 10**k))
        quant = 10 ** (digits - 1 - exp) if exp < digits else 1
        approx = Fraction(round(val * quant), quant)
        return f"{float(approx):.{digits}g}"

    def __repr__(self):
        return f"sqrt({self.sq})"


ZERO_LEN = SqrtVal(Fraction(0))


# ---------------------------------------------------------------------------
# Segment predicates
# ---------------------------------------------------------------------------


def point_on_segment(p: Point, a: Point, b: Point) -> bool:
    """True if p lies on the closed segment [a, b]."""
    if cross(a, b, p) != 0:
        return False
    return (
        min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


def point_segment_dist_sq(p: Point, a: Point, b: Point) -> Fraction:
    """Exact squared distance from p to the closed segment [a, b]."""
    ab = v_sub(b, a)
    denom = dot(ab, ab)
    if denom == 0:
        return dist_sq(p, a)
    t = dot(v_sub(p, a), ab) / denom
    if t <= 0:
        return dist_sq(p, a)
    if t >= 1:
        return dist_sq(p, b)
    proj = v_lerp(a, b, t)
    return dist_sq(p, proj)


def point_line_dist_sq(p: Point, a: Point, b: Point) -> Fraction:
    """Exact squared distance from p to the line through a and b (a != b)."""
    c = cross(a, b, p)
    return c * c / dist_sq(a, b)


def segments_share_point(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True if closed segments [a,b] and [c,d] have any common point."""
    d1 = cross(c, d, a)
    d2 = cross(c, d, b)
    d3 = cross(a, b, c)
    d4 = cross(a, b, d)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    if d1 == 0 and point_on_segment(a, c, d):
        return True
    if d2 == 0 and point_on_segment(b, c, d):
        return True
    if d3 == 0 and point_on_segment(c, a, b):
        return True
    if d4 == 0 and point_on_segment(d, a, b):
        return True
    return False


def collinear_overlap_past_shared(shared: Point, p: Point, q: Point) -> bool:
    """Two segments leave `shared` toward p and q; True if they overlap.

    Overlap happens exactly when the directions are collinear and equal in
    sign.
    """
    if cross(shared, p, q) != 0:
        return False
    return dot(v_sub(p, shared), v_sub(q, shared)) > 0


# ---------------------------------------------------------------------------
# Convex polygons
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon, corners in counterclockwise order."""

    corners: tuple[Point, ...]

    def __post_init__(self):
        k = len(self.corners)
        if k < 3:
            raise NotConvex("polygon needs at least 3 corners")
        for i in range(k):
            a, b, c = self.corners[i], self.corners[(i + 1) % k], self.corners[(i + 2) % k]
            if cross(a, b, c) <= 0:
                raise NotConvex(f"corners {i},{i+1},{i+2} do not make a strict left turn")

    @property
    def k(self) -> int:
        return len(self.corners)

    def side(self, i: int) -> tuple[Point, Point]:
        return self.corners[i], self.corners[(i + 1) % self.k]

    def area2(self) -> Fraction:
        """Twice the area (exact, positive)."""
        s = Fraction(0)
        for i in range(self.k):
            a, b = self.side(i)
            s += a.x * b.y - b.x * a.y
        return s

    def centroid(self) -> Point:
        sx = sum(c.x for c in self.corners)
        sy = sum(c.y for c in self.corners)
        return Point(Fraction(sx, self.k), Fraction(sy, self.k))

    def contains(self, p: Point) -> str:
        """'inside' / 'boundary' / 'outside', exactly."""
        on_edge = False
        for i in range(self.k):
            a, b = self.side(i)
            c = cross(a, b, p)
            if c < 0:
                return "outside"
            if c == 0:
                if point_on_segment(p, a, b):
                    on_edge = True
                else:
                    return "outside"
        return "boundary" if on_edge else "inside"

    @property
    def potential_resolution(self) -> SqrtVal:
        return potential_resolution(self)

    def diameter(self) -> SqrtVal:
        best = Fraction(0)
        for i in range(self.k):
            for j in range(i + 1, self.k):
                best = max(best, dist_sq(self.corners[i], self.corners[j]))
        return SqrtVal(best)


def potential_resolution(p: ConvexPolygon) -> SqrtVal:
    """Minimum over corners of the distance to the line through its neighbors.

    For strictly convex polygons this equals the resolution of the complete
    straight-line graph on the corners (validated against the brute-force
    oracle in the test suite).
    """
    best: Fraction | None = None
    k = p.k
    for i in range(k):
        prev_c = p.corners[(i - 1) % k]
        next_c = p.corners[(i + 1) % k]
        d2 = point_line_dist_sq(p.corners[i], prev_c, next_c)
        if best is None or d2 < best:
            best = d2
    return SqrtVal(best)


def potential_resolution_bruteforce(points: Sequence[Point]) -> SqrtVal:
    """Resolution of the complete straight-line graph on `points`.

    Exhaustive over all vertex pairs and all vertex/non-incident-edge pairs;
    used as the independent oracle for `potential_resolution`.
    """
    n = len(points)
    if n < 2:
        raise ValueError("need at least two points")
    best: Fraction | None = None
    for i in range(n):
        for j in range(i + 1, n):
            d2 = dist_sq(points[i], points[j])
            if best is None or d2 < best:
                best = d2
    for i in range(n):
        for j in range(n):
            for l in range(j + 1, n):
                if i == j or i == l:
                    continue
                d2 = point_segment_dist_sq(points[i], points[j], points[l])
                if d2 < best:
                    best = d2
    return SqrtVal(best)


# ---------------------------------------------------------------------------
# Alpha cuts
# ---------------------------------------------------------------------------

# A boundary feature is ("corner", i) or ("edge", i) where edge i runs from
# corner i to corner i+1 (counterclockwise).
Feature = tuple[str, int]


@dataclass(frozen=True)
class AlphaCut:
    """A directed cut line through two boundary features of a polygon.

    Every polygon edge crossed by the line is split so the piece to the left
    has length fraction `alpha` of the edge.  When the two features are
    adjacent edges, the piece not containing their shared corner has no
    potential-resolution guarantee; the corresponding flag is False.
    """

    alpha: Fraction
    entry_feature: Feature
    exit_feature: Feature
    entry_point: Point
    exit_point: Point
    left_bound_guaranteed: bool = True
    right_bound_guaranteed: bool = True

    @property
    def line(self) -> tuple[Point, Point]:
        return (self.entry_point, self.exit_point)


def _feature_param(feat: Feature, alpha: Fraction, entry: bool) -> Fraction:
    kind, i = feat
    if kind == "corner":
        return Fraction(i)
    if kind == "edge":
        return i + (alpha if entry else (1 - alpha))
    raise ValueError(f"unknown feature kind {kind!r}")


def _feature_point(p: ConvexPolygon, feat: Feature, param: Fraction) -> Point:
    kind, i = feat
    if kind == "corner":
        return p.corners[i]
    a, b = p.side(i)
    return v_lerp(a, b, param - i)


def alpha_cut(
    p: ConvexPolygon, feat_entry: Feature, feat_exit: Feature, alpha: Fraction
) -> tuple[AlphaCut, ConvexPolygon, ConvexPolygon]:
    """Cut `p` along the alpha-cut through the two features.

    Returns (cut, left, right), where `left` is the piece to the left of the
    directed line entry->exit.  With the polygon counterclockwise, `left`
    consists of the boundary chain from the exit feature back around to the
    entry feature.

    Raises DegenerateCut if one side would have no area (e.g. the features
    are the same, or consecutive corners).
    """
    alpha = Fraction(alpha)
    if not (0 < alpha < 1):
        raise ValueError("alpha must be strictly between 0 and 1")
    if feat_entry == feat_exit:
        raise DegenerateCut("features must be distinct")
    k = p.k
    t_a = _feature_param(feat_entry, alpha, entry=True)
    t_b = _feature_param(feat_exit, alpha, entry=False)
    A = _feature_point(p, feat_entry, t_a)
    B = _feature_point(p, feat_exit, t_b)
    if A == B:
        raise DegenerateCut("cut endpoints coincide")

    def chain(t_from: Fraction, t_to: Fraction) -> list[Point]:
        # Corner indices strictly between the two boundary parameters,
        # walking counterclockwise from t_from to t_to.
        span = (t_to - t_from) % k
        out = []
        j = math.floor(t_from) + 1
        while Fraction(j) - t_from < span:
            out.append(p.corners[j % k])
            j += 1
        return out

    # Left piece: A -> B (cut segment), then ccw chain from exit to entry.
    left_pts = [A, B] + chain(t_b, t_a)
    right_pts = [B, A] + chain(t_a, t_b)
    if len(left_pts) < 3 or len(right_pts) < 3:
        raise DegenerateCut("cut leaves a zero-area side")

    adjacent = False
    shared_on_left = False
    if feat_entry[0] == "edge" and feat_exit[0] == "edge":
        i, j = feat_entry[1], feat_exit[1]
        if (i + 1) % k == j:
            adjacent, shared = True, p.corners[j]
        elif (j + 1) % k == i:
            adjacent, shared = True, p.corners[i]
        if adjacent:
            shared_on_left = shared in left_pts

    try:
        left = ConvexPolygon(tuple(left_pts))
        right = ConvexPolygon(tuple(right_pts))
    except NotConvex as exc:
        raise DegenerateCut(f"cut produced a degenerate side: {exc}") from exc

    cut = AlphaCut(
        alpha=alpha,
        entry_feature=feat_entry,
        exit_feature=feat_exit,
        entry_point=A,
        exit_point=B,
        # The piece not containing the shared corner of two adjacent edge
        # features has no guaranteed bound.
        left_bound_guaranteed=not (adjacent and not shared_on_left),
        right_bound_guaranteed=not (adjacent and shared_on_left),
    )
    return cut, left, right


def move_vertex_along_edge(
    p: ConvexPolygon, v: int, e: int, alpha: Fraction
) -> ConvexPolygon:
    """Move corner v a fraction alpha along incident edge e.

    Edge i joins corners i and i+1; it is incident to v iff e == v or
    e == v-1 (mod k).
    """
    alpha = Fraction(alpha)
    if not (0 < alpha < 1):
        raise ValueError("alpha must be strictly between 0 and 1")
    k = p.k
    if e == v:
        other = p.corners[(v + 1) % k]
    elif (e + 1) % k == v:
        other = p.corners[e]
    else:
        raise NotIncident(f"edge {e} is not incident to corner {v}")
    moved = v_lerp(p.corners[v], other, alpha)
    pts = list(p.corners)
    pts[v] = moved
    return ConvexPolygon(tuple(pts))


# ---------------------------------------------------------------------------
# Drawings and their metrics
# ---------------------------------------------------------------------------


@dataclass
class Drawing:
    """A total vertex -> point map over a plane graph."""

    positions: dict[int, Point]
    graph: "object"  # PlaneGraph; untyped to avoid an import cycle

    def point(self, v: int) -> Point:
        return self.positions[v]


def _float_xy(p: Point) -> tuple[float, float]:
    return (float(p.x), float(p.y))


def drawing_resolution(d: Drawing) -> SqrtVal:
    """Min distance between two vertices or a vertex and a non-incident edge.

    Exact: candidate pairs are prefiltered with floats, then the minimum is
    confirmed with rational arithmetic.
    """
    verts = sorted(d.positions)
    pos = d.positions
    edges = list(d.graph.edges())
    fpos = {v: _float_xy(pos[v]) for v in verts}

    # Float pass to find an upper estimate of the minimum.
    est = math.inf
    for i, u in enumerate(verts):
        ux, uy = fpos[u]
        for v in verts[i + 1 :]:
            vx, vy = fpos[v]
            est = min(est, (ux - vx) ** 2 + (uy - vy) ** 2)
    for u, w in edges:
        ax, ay = fpos[u]
        bx, by = fpos[w]
        for v in verts:
            if v == u or v == w:
                continue
            px, py = fpos[v]
            est = min(est, _fseg_dist_sq(px, py, ax, ay, bx, by))

    # Exact pass over candidates near the estimate (generous slack).
    slack = est * 4 + 1e-300
    best: Fraction | None = None
    for i, u in enumerate(verts):
        ux, uy = fpos[u]
        for v in verts[i + 1 :]:
            vx, vy = fpos[v]
            if (ux - vx) ** 2 + (uy - vy) ** 2 <= slack:
                d2 = dist_sq(pos[u], pos[v])
                if best is None or d2 < best:
                    best = d2
    for u, w in edges:
        ax, ay = fpos[u]
        bx, by = fpos[w]
        for v in verts:
            if v == u or v == w:
                continue
            px, py = fpos[v]
            if _fseg_dist_sq(px, py, ax, ay, bx, by) <= slack:
                d2 = point_segment_dist_sq(pos[v], pos[u], pos[w])
                if best is None or d2 < best:
                    best = d2
    if best is None:
        raise ValueError("drawing has fewer than two vertices")
    return SqrtVal(best)


def _fseg_dist_sq(px, py, ax, ay, bx, by) -> float:
    abx, aby = bx - ax, by - ay
    denom = abx * abx + aby * aby
    if denom == 0:
        return (px - ax) ** 2 + (py - ay) ** 2
    t = ((px - ax) * abx + (py - ay) * aby) / denom
    t = 0.0 if t < 0 else (1.0 if t > 1 else t)
    qx, qy = ax + t * abx, ay + t * aby
    return (px - qx) ** 2 + (py - qy) ** 2


def drawing_diameter(d: Drawing) -> SqrtVal:
    """Largest distance between two vertices (exact)."""
    verts = sorted(d.positions)
    fpos = {v: _float_xy(d.positions[v]) for v in verts}
    est = 0.0
    for i, u in enumerate(verts):
        ux, uy = fpos[u]
        for v in verts[i + 1 :]:
            vx, vy = fpos[v]
            est = max(est, (ux - vx) ** 2 + (uy - vy) ** 2)
    slack = est * 0.25
    best = Fraction(0)
    for i, u in enumerate(verts):
        ux, uy = fpos[u]
        for v in verts[i + 1 :]:
            vx, vy = fpos[v]
            if (ux - vx) ** 2 + (uy - vy) ** 2 >= slack:
                best = max(best, dist_sq(d.positions[u], d.positions[v]))
    return SqrtVal(best)


# ---------------------------------------------------------------------------
# Rational serialization helpers (used by the CLI JSON formats)
# ---------------------------------------------------------------------------


def frac_to_str(f: Fraction) -> str:
    f = Fraction(f)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def str_to_frac(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s))


def point_to_json(p: Point) -> list[str]:
    return [frac_to_str(p.x), frac_to_str(p.y)]


def point_from_json(obj) -> Point:
    return Point(str_to_frac(obj[0]), str_to_frac(obj[1]))
