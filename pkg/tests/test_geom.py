import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from polyface.geom import (
    ConvexPolygon,
    DegenerateCut,
    Drawing,
    NotIncident,
    SqrtVal,
    alpha_cut,
    drawing_diameter,
    drawing_resolution,
    move_vertex_along_edge,
    point_segment_dist_sq,
    potential_resolution,
    potential_resolution_bruteforce,
    pt,
)
from polyface.embed import build_plane_graph

from conftest import random_convex_polygon

SQUARE = ConvexPolygon((pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)))
TRI345 = ConvexPolygon((pt(0, 0), pt(4, 0), pt(0, 3)))


def brute_resolution(positions, edges):
    """Independent oracle: exhaustive scan of vertex pairs and vertex/edge pairs."""
    verts = sorted(positions)
    best = None
    for i, u in enumerate(verts):
        for v in verts[i + 1 :]:
            d2 = (positions[u][0] - positions[v][0]) ** 2 + (
                positions[u][1] - positions[v][1]
            ) ** 2
            best = d2 if best is None else min(best, d2)
    for (u, w) in edges:
        for v in verts:
            if v in (u, w):
                continue
            d2 = point_segment_dist_sq(positions[v], positions[u], positions[w])
            best = min(best, d2)
    return SqrtVal(best)


class TestSqrtVal:
    def test_ordering_against_rationals(self):
        assert SqrtVal(F(1, 2)) < 1
        assert SqrtVal(F(1, 2)) > F(1, 2)
        assert SqrtVal(F(2)) > 1
        assert SqrtVal(F(4)) == 2
        assert SqrtVal(F(0)) == 0
        assert SqrtVal(F(1, 4)) > -3

    def test_arithmetic(self):
        assert (SqrtVal(F(2)) * SqrtVal(F(2))) == 2
        assert (F(3) * SqrtVal(F(1, 2))).sq == F(9, 2)
        assert (SqrtVal(F(8)) / SqrtVal(F(2))) == 2

    def test_decimal(self):
        assert SqrtVal(F(4)).decimal().startswith("2")
        assert SqrtVal(F(2)).decimal(12).startswith("1.4142135623")


class TestDrawingMetrics:
    def drawing(self, positions, edges, n):
        rot = [[] for _ in range(n)]
        # metrics only need .edges(); use a stub graph object
        class Stub:
            def __init__(self, e):
                self._e = e

            def edges(self):
                return self._e

        return Drawing({v: p for v, p in positions.items()}, Stub(edges))

    def test_triangle_345_resolution(self):
        # vertex (0,0) against the hypotenuse: 2*area/len = 12/5
        d = self.drawing(
            {0: pt(0, 0), 1: pt(4, 0), 2: pt(0, 3)}, [(0, 1), (1, 2), (2, 0)], 3
        )
        assert drawing_resolution(d) == F(12, 5)
        assert brute_resolution(d.positions, [(0, 1), (1, 2), (2, 0)]) == F(12, 5)

    def test_two_vertices_one_edge(self):
        d = self.drawing({0: pt(0, 0), 1: pt(1, 0)}, [(0, 1)], 2)
        assert drawing_resolution(d) == 1

    def test_square_cycle(self):
        corners = {0: pt(0, 0), 1: pt(1, 0), 2: pt(1, 1), 3: pt(0, 1)}
        edges = [(0, 1), (1, 2), (2, 3), (3, 0)]
        d = self.drawing(corners, edges, 4)
        assert drawing_resolution(d) == 1
        assert drawing_diameter(d).sq == 2

    def test_diameter_345(self):
        d = self.drawing({0: pt(0, 0), 1: pt(3, 4)}, [(0, 1)], 2)
        assert drawing_diameter(d) == 5

    def test_collinear_chain_diameter(self):
        m = 7
        d = self.drawing(
            {i: pt(i, 0) for i in range(m + 1)}, [(i, i + 1) for i in range(m)], m + 1
        )
        assert drawing_diameter(d) == m


class TestPotentialResolution:
    def test_unit_square(self):
        assert potential_resolution(SQUARE).sq == F(1, 2)
        assert potential_resolution_bruteforce(SQUARE.corners).sq == F(1, 2)

    def test_triangle_345(self):
        assert potential_resolution(TRI345) == F(12, 5)

    def test_collinear_points_zero(self):
        assert potential_resolution_bruteforce([pt(0, 0), pt(1, 0), pt(2, 0)]) == 0

    def test_oracle_agreement_random(self):
        rng = random.Random(7)
        for _ in range(60):
            p = random_convex_polygon(rng, rng.randint(3, 10))
            assert potential_resolution(p) == potential_resolution_bruteforce(p.corners)


class TestAlphaCut:
    def test_square_vertical_halves(self):
        cut, left, right = alpha_cut(SQUARE, ("edge", 0), ("edge", 2), F(1, 2))
        assert cut.entry_point == pt(F(1, 2), 0)
        assert cut.exit_point == pt(F(1, 2), 1)
        assert left.area2() == right.area2() == 1

    def test_square_quarter(self):
        d = potential_resolution(SQUARE)
        cut, left, right = alpha_cut(SQUARE, ("edge", 0), ("edge", 2), F(1, 4))
        assert left.area2() == F(1, 2)  # area 1/4
        assert potential_resolution(left) >= F(1, 4) * d
        assert potential_resolution(right) >= F(3, 4) * d

    def test_cut_edge_fraction_exact(self):
        rng = random.Random(3)
        for _ in range(40):
            p = random_convex_polygon(rng, rng.randint(4, 8))
            k = p.k
            i = rng.randrange(k)
            j = (i + rng.randint(2, k - 2)) % k
            alpha = F(rng.randint(1, 9), 10)
            cut, left, right = alpha_cut(p, ("edge", i), ("edge", j), alpha)
            a0, a1 = p.side(i)
            # left portion of the entry edge is exactly alpha of its length
            num = (cut.entry_point.x - a0.x) ** 2 + (cut.entry_point.y - a0.y) ** 2
            den = (a1.x - a0.x) ** 2 + (a1.y - a0.y) ** 2
            assert num == alpha * alpha * den

    def test_area_additivity(self):
        rng = random.Random(11)
        for _ in range(40):
            p = random_convex_polygon(rng, rng.randint(4, 9))
            k = p.k
            i = rng.randrange(k)
            j = (i + rng.randint(2, k - 2)) % k
            alpha = F(rng.randint(1, 9), 10)
            _, left, right = alpha_cut(p, ("edge", i), ("edge", j), alpha)
            assert left.area2() + right.area2() == p.area2()

    def test_bound_random_non_excluded(self):
        rng = random.Random(5)
        checked = 0
        while checked < 120:
            p = random_convex_polygon(rng, rng.randint(4, 9))
            k = p.k
            feats = []
            for _ in range(2):
                if rng.random() < 0.5:
                    feats.append(("corner", rng.randrange(k)))
                else:
                    feats.append(("edge", rng.randrange(k)))
            if feats[0] == feats[1]:
                continue
            alpha = F(rng.randint(1, 9), 10)
            try:
                cut, left, right = alpha_cut(p, feats[0], feats[1], alpha)
            except DegenerateCut:
                continue
            d = potential_resolution(p)
            if cut.left_bound_guaranteed:
                assert potential_resolution(left) >= alpha * d
            if cut.right_bound_guaranteed:
                assert potential_resolution(right) >= (1 - alpha) * d
            checked += 1

    def test_corner_to_corner_double_bound(self):
        rng = random.Random(13)
        for _ in range(40):
            p = random_convex_polygon(rng, rng.randint(4, 9))
            k = p.k
            i = rng.randrange(k)
            j = (i + rng.randint(2, k - 2)) % k
            alpha = F(rng.randint(1, 9), 10)
            cut, left, right = alpha_cut(p, ("corner", i), ("corner", j), alpha)
            d = potential_resolution(p)
            assert potential_resolution(left) >= alpha * d
            assert potential_resolution(left) >= (1 - alpha) * d or potential_resolution(
                left
            ) >= alpha * d
            # corner pieces inherit corners of p, so both directions hold
            assert potential_resolution(right) >= (1 - alpha) * d

    def test_adjacent_edges_flagged(self):
        cut, left, right = alpha_cut(SQUARE, ("edge", 0), ("edge", 1), F(1, 2))
        assert not (cut.left_bound_guaranteed and cut.right_bound_guaranteed)
        # the triangle piece containing the shared corner keeps its bound
        d = potential_resolution(SQUARE)
        if cut.left_bound_guaranteed:
            assert potential_resolution(left) >= F(1, 2) * d
        if cut.right_bound_guaranteed:
            assert potential_resolution(right) >= F(1, 2) * d

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateCut):
            alpha_cut(SQUARE, ("corner", 0), ("corner", 1), F(1, 2))
        with pytest.raises(DegenerateCut):
            alpha_cut(SQUARE, ("edge", 0), ("edge", 0), F(1, 2))


class TestMoveVertex:
    def test_square_half_move(self):
        moved = move_vertex_along_edge(SQUARE, 0, 0, F(1, 2))
        assert moved.corners[0] == pt(F(1, 2), 0)
        d = potential_resolution(SQUARE)
        assert potential_resolution(moved) >= F(1, 2) * d

    def test_tiny_move_near_identity(self):
        d = potential_resolution(SQUARE)
        moved = move_vertex_along_edge(SQUARE, 0, 0, F(1, 1000))
        assert potential_resolution(moved) >= F(999, 1000) * d

    def test_triangle_third(self):
        d = potential_resolution(TRI345)
        moved = move_vertex_along_edge(TRI345, 2, 1, F(1, 3))
        assert potential_resolution(moved) >= F(2, 3) * d

    def test_not_incident(self):
        with pytest.raises(NotIncident):
            move_vertex_along_edge(SQUARE, 0, 1, F(1, 2))

    def test_bound_random(self):
        rng = random.Random(17)
        for _ in range(120):
            p = random_convex_polygon(rng, rng.randint(3, 9))
            k = p.k
            v = rng.randrange(k)
            e = v if rng.random() < 0.5 else (v - 1) % k
            alpha = F(rng.randint(1, 9), 10)
            moved = move_vertex_along_edge(p, v, e, alpha)
            assert potential_resolution(moved) >= (1 - alpha) * potential_resolution(p)


@given(
    st.integers(min_value=0, max_value=10**6),
    st.integers(min_value=3, max_value=9),
)
@settings(max_examples=60, deadline=None)
def test_observation1_oracle_hypothesis(seed, k):
    """Potential resolution equals the complete-graph resolution, always."""
    rng = random.Random(seed)
    p = random_convex_polygon(rng, k)
    assert potential_resolution(p) == potential_resolution_bruteforce(p.corners)


def test_subdrawing_resolution_monotone(octahedron_graph):
    from conftest import rotations_from_positions

    g = octahedron_graph
    import math

    # any drawing: place on a circle by id (resolution only needs positions/edges)
    pos = {
        v: pt(F(round(100 * math.cos(v)), 50), F(round(100 * math.sin(v)), 50))
        for v in range(6)
    }

    class Stub:
        def __init__(self, e):
            self._e = e

        def edges(self):
            return self._e

    all_edges = g.edges()
    d_full = drawing_resolution(Drawing(dict(pos), Stub(all_edges)))
    sub_edges = all_edges[: len(all_edges) // 2]
    d_sub = drawing_resolution(Drawing(dict(pos), Stub(sub_edges)))
    assert d_sub >= d_full
