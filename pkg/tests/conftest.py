import math
import random
from fractions import Fraction

import pytest

from polyface.embed import CornerMap, PlaneGraph, Problem, build_plane_graph
from polyface.geom import ConvexPolygon, pt


def rotations_from_positions(pos, adj):
    """Counterclockwise rotation system from float positions (fixtures only)."""
    rots = []
    for v in range(len(pos)):
        rots.append(
            sorted(
                adj[v],
                key=lambda u: math.atan2(pos[u][1] - pos[v][1], pos[u][0] - pos[v][0]),
            )
        )
    return rots


@pytest.fixture
def triangle_graph():
    return build_plane_graph(3, [[1, 2], [2, 0], [0, 1]], [0, 1, 2])


@pytest.fixture
def k4_graph():
    pos = {0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (0.3, 0.3)}
    adj = {0: [1, 2, 3], 1: [0, 2, 3], 2: [0, 1, 3], 3: [0, 1, 2]}
    return build_plane_graph(4, rotations_from_positions(pos, adj), [0, 1, 2])


@pytest.fixture
def octahedron_graph():
    rot = [
        [1, 4, 3, 2],
        [2, 5, 4, 0],
        [0, 3, 5, 1],
        [5, 2, 0, 4],
        [5, 3, 0, 1],
        [2, 3, 4, 1],
    ]
    return build_plane_graph(6, rot, [0, 1, 2])


def hexagon_fan():
    """Convex hexagon triangulated by the fan from vertex 0."""
    pos = {}
    for i in range(6):
        a = 2 * math.pi * i / 6
        pos[i] = (math.cos(a), math.sin(a))
    adj = {
        0: [1, 2, 3, 4, 5],
        1: [0, 2],
        2: [0, 1, 3],
        3: [0, 2, 4],
        4: [0, 3, 5],
        5: [0, 4],
    }
    return build_plane_graph(6, rotations_from_positions(pos, adj), list(range(6)))


def wheel_problem():
    """4-cycle plus hub joined to all, pinned to the unit square."""
    pos = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1), 4: (0.5, 0.5)}
    adj = {0: [1, 3, 4], 1: [0, 2, 4], 2: [1, 3, 4], 3: [0, 2, 4], 4: [0, 1, 2, 3]}
    g = build_plane_graph(5, rotations_from_positions(pos, adj), [0, 1, 2, 3])
    poly = ConvexPolygon((pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)))
    return Problem(g, CornerMap(((0, 0), (1, 1), (2, 2), (3, 3))), poly)


def random_convex_polygon(rng: random.Random, k: int, scale: int = 8) -> ConvexPolygon:
    """Strictly convex k-gon with small rational coordinates."""
    while True:
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(k))
        if min(
            (angles[(i + 1) % k] - angles[i]) % (2 * math.pi) for i in range(k)
        ) < 0.05:
            continue
        denom = 64
        corners = []
        rx = rng.uniform(0.6, 1.0)
        ry = rng.uniform(0.6, 1.0)
        for a in angles:
            x = Fraction(round(scale * rx * math.cos(a) * denom), denom)
            y = Fraction(round(scale * ry * math.sin(a) * denom), denom)
            corners.append(pt(x, y))
        try:
            return ConvexPolygon(tuple(corners))
        except Exception:
            continue
