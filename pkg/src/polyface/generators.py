"""Seeded instance generators: random triangulations, nested triangles,
regular polygons."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
from scipy.spatial import Delaunay

from .embed import (
    CornerMap,
    PlaneGraph,
    Problem,
    build_plane_graph,
    edge_key,
    validate_problem,
)
from .geom import ConvexPolygon, Point, pt


class GenerationError(Exception):
    pass


def _rotations_from_xy(xy, adj):
    rots = []
    for v in range(len(xy)):
        rots.append(
            sorted(
                adj[v],
                key=lambda u: math.atan2(xy[u][1] - xy[v][1], xy[u][0] - xy[v][0]),
            )
        )
    return rots


def regular_polygon(k: int, diameter=Fraction(1)) -> ConvexPolygon:
    """Regular k-gon with rational corners approximating the target diameter.

    k = 4 is returned exactly (a diagonal-aligned square); other k use
    coordinates rounded to 1e-12 of the diameter, which keeps the corner
    error below 1e-9 * diameter while convexity stays exact.
    """
    if k < 3:
        raise ValueError("k >= 3 required")
    diameter = Fraction(diameter)
    if k == 4:
        r = diameter / 2
        return ConvexPolygon((pt(r, 0), pt(0, r), pt(-r, 0), pt(0, -r)))
    if k % 2 == 0:
        r = float(diameter) / 2
    else:
        r = float(diameter) / (2 * math.sin(math.pi * (k // 2) / k))
    denom = 10**12
    corners = []
    for j in range(k):
        a = 2 * math.pi * j / k
        x = Fraction(round(r * math.cos(a) * denom), denom)
        y = Fraction(round(r * math.sin(a) * denom), denom)
        corners.append(Point(x, y))
    return ConvexPolygon(tuple(corners))


def random_convex_polygon(rng: random.Random, k: int, scale: int = 8) -> ConvexPolygon:
    """Strictly convex k-gon with small rational coordinates (seeded)."""
    while True:
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(k))
        if min(
            (angles[(i + 1) % k] - angles[i]) % (2 * math.pi) for i in range(k)
        ) < 0.08:
            continue
        denom = 64
        rx, ry = rng.uniform(0.6, 1.0), rng.uniform(0.6, 1.0)
        corners = []
        for a in angles:
            x = Fraction(round(scale * rx * math.cos(a) * denom), denom)
            y = Fraction(round(scale * ry * math.sin(a) * denom), denom)
            corners.append(pt(x, y))
        try:
            return ConvexPolygon(tuple(corners))
        except Exception:
            continue


def nested_triangles(depth: int, polygon: ConvexPolygon | None = None) -> Problem:
    """`depth` nested triangles joined by triangulated annuli (3*depth vertices)."""
    if depth < 1:
        raise ValueError("depth >= 1")
    n = 3 * depth
    xy = {}
    for i in range(depth):
        r = 10.0 * (0.45**i)
        for j in range(3):
            a = math.radians(90 + 120 * j + 60 * i)
            xy[3 * i + j] = (r * math.cos(a), r * math.sin(a))
    adj = {v: set() for v in range(n)}
    for i in range(depth):
        ring = [3 * i, 3 * i + 1, 3 * i + 2]
        for j in range(3):
            adj[ring[j]].add(ring[(j + 1) % 3])
            adj[ring[(j + 1) % 3]].add(ring[j])
    for i in range(depth - 1):
        A = [3 * i, 3 * i + 1, 3 * i + 2]
        B = [3 * i + 3, 3 * i + 4, 3 * i + 5]
        for j in range(3):
            for u, w in ((A[j], B[j]), (A[(j + 1) % 3], B[j])):
                adj[u].add(w)
                adj[w].add(u)
    rots = _rotations_from_xy(xy, {v: list(s) for v, s in adj.items()})
    # outer ring 0,1,2 counterclockwise by angle
    outer = sorted(range(3), key=lambda j: math.atan2(xy[j][1], xy[j][0]))
    g = build_plane_graph(n, rots, outer)
    poly = polygon or ConvexPolygon((pt(0, 0), pt(1, 0), pt(0, 1)))
    # pin the outer ring to the polygon corners in matching ccw order
    cm = CornerMap(tuple((outer[t], t) for t in range(3)))
    prob = Problem(g, cm, poly)
    assert validate_problem(prob).valid
    return prob


def random_triangulation(n: int, k: int, seed: int) -> Problem:
    """Seeded random valid Problem: Delaunay of a random point set with the
    boundary on a circle, corners evenly spread, chord violations repaired by
    edge flips or resampling."""
    if not (n >= k >= 3):
        raise ValueError("need n >= k >= 3")
    base = random.Random(seed)
    for attempt in range(100):
        rng = random.Random((seed, attempt, 0x5EED).__hash__())
        prob = _try_generate(rng, n, k)
        if prob is not None:
            return prob
    raise GenerationError(f"could not generate a valid instance for {(n, k, seed)}")


def _try_generate(rng: random.Random, n: int, k: int) -> Problem | None:
    if n == k == 3:
        g = build_plane_graph(3, [[1, 2], [2, 0], [0, 1]], [0, 1, 2])
        poly = random_convex_polygon(rng, 3)
        return Problem(g, CornerMap(((0, 0), (1, 1), (2, 2))), poly)

    m = rng.randint(k, max(k, min(n, k + max(3, n // 2))))
    n_int = n - m
    angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(m))
    if min((angles[(i + 1) % m] - angles[i]) % (2 * math.pi) for i in range(m)) < 1e-3:
        return None
    pts = [(math.cos(a), math.sin(a)) for a in angles]
    for _ in range(n_int):
        r = math.sqrt(rng.uniform(0.02, 0.72))
        a = rng.uniform(0, 2 * math.pi)
        pts.append((r * math.cos(a), r * math.sin(a)))
    arr = np.array(pts)
    try:
        tri = Delaunay(arr)
    except Exception:
        return None
    if len(tri.coplanar):
        return None
    adj = {v: set() for v in range(n)}
    for simplex in tri.simplices:
        a, b, c = (int(x) for x in simplex)
        for u, w in ((a, b), (b, c), (c, a)):
            adj[u].add(w)
            adj[w].add(u)
    # hull must be exactly the circle points, in order
    hull = {int(v) for v in tri.convex_hull.ravel()}
    if hull != set(range(m)):
        return None
    try:
        g = build_plane_graph(
            n, _rotations_from_xy(pts, {v: list(s) for v, s in adj.items()}), list(range(m))
        )
    except Exception:
        return None
    poly = random_convex_polygon(rng, k)
    # corners evenly spread over the boundary circle
    corner_ids = [round(t * m / k) % m for t in range(k)]
    if len(set(corner_ids)) != k:
        return None
    cm = CornerMap(tuple((corner_ids[t], t) for t in range(k)))
    prob = Problem(g, cm, poly)
    prob = _repair_chords(prob, max_flips=3 * n)
    if prob is None or not validate_problem(prob).valid:
        return None
    return prob


def _has_directed(face, a: int, b: int) -> bool:
    for i in range(3):
        if face[i] == a and face[(i + 1) % 3] == b:
            return True
    return False


def _repair_chords(prob: Problem, max_flips: int) -> Problem | None:
    """Flip same-side chords to the opposite diagonal where possible."""
    g = prob.graph
    for _ in range(max_flips):
        rep = validate_problem(prob)
        if rep.valid:
            return prob
        u, w = rep.chord
        fs = g.faces_of_edge(u, w)
        if g.outer_face_id in fs:
            return None
        # fx holds the directed edge u->w, fy holds w->u (both faces ccw)
        if _has_directed(g.faces[fs[0]], u, w):
            fx, fy = fs[0], fs[1]
        else:
            fx, fy = fs[1], fs[0]
        (x,) = set(g.faces[fx]) - {u, w}
        (y,) = set(g.faces[fy]) - {u, w}
        if g.has_edge(x, y):
            return None
        # the quad around (u,w) is (u, y, w, x) ccw; flip to diagonal (x, y)
        internal = [tuple(g.faces[i]) for i in g.internal_faces() if i not in (fx, fy)]
        internal += [(u, y, x), (y, w, x)]
        try:
            g2 = PlaneGraph.from_faces(g.n, internal, g.outer_cycle)
        except Exception:
            return None
        prob = Problem(g2, prob.corners, prob.polygon)
        g = g2
    return prob if validate_problem(prob).valid else None
