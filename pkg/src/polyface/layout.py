"""Recursive divide-and-conquer layout inside a prescribed convex polygon.

A problem node is a triangulated sub-disk plus a convex polygon whose corners
pin designated boundary vertices.  Nodes with every vertex on the boundary
are leaves (corners pinned, side vertices equally spaced, chords of a convex
polygon cannot cross).  Every other node picks two outer edges on
non-consecutive polygon sides (a corner-adjacent pair for triangles), finds
a river between them, absorbs chords and flattened side regions, and slices
off one subproblem per remaining outside component with an alpha-cut whose
fraction is the component's share of the remaining faces.  Components
spanning exactly one polygon corner with both contacts strictly inside the
two adjacent sides would hit the alpha-cut adjacent-edge exception and lose
the residual's resolution guarantee; they become corner-wedge subproblems
instead: a triangle pinched off at the corner whose legs take the same face
fraction of the remaining side stretches, which keeps every ratio
certificate exact.  River interiors are filled last with flattened
shift-method bumps.

Every node emits a trace record with its exact ratio certificate
(potential resolution / face count never drops below the root's d/s).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .embed import CornerMap, Edge, PlaneGraph, Problem, edge_key, validate_problem
from .geom import (
    AlphaCut,
    ConvexPolygon,
    Drawing,
    Point,
    SqrtVal,
    alpha_cut,
    collinear_overlap_past_shared,
    cross,
    dist_sq,
    dot,
    frac_to_str,
    point_on_segment,
    potential_resolution,
    segments_share_point,
    v_lerp,
    v_sub,
)
from .river import (
    DiskContext,
    NoRiver,
    Pocket,
    RiverPartition,
    _absorb_core,
    check_river_in,
    find_river_in,
    side_sets_for,
)
from .river_fill import (
    BumpCollision,
    BumpLayout,
    FillError,
    component_outer_cycle,
    fill_component,
)


class LayoutError(Exception):
    pass


class InvalidProblem(LayoutError):
    pass


# ---------------------------------------------------------------------------
# Respects-f checker
# ---------------------------------------------------------------------------


@dataclass
class RespectsReport:
    ok: bool
    violations: list[str]

    def __bool__(self):
        return self.ok


def _side_paths(boundary: list[int], corner_vertices: list[int]) -> list[list[int]]:
    pos = {v: i for i, v in enumerate(boundary)}
    nb = len(boundary)
    k = len(corner_vertices)
    out = []
    for i in range(k):
        s, t = pos[corner_vertices[i]], pos[corner_vertices[(i + 1) % k]]
        path = [boundary[s]]
        j = s
        while j != t:
            j = (j + 1) % nb
            path.append(boundary[j])
        out.append(path)
    return out


def _segment_candidates(segs, fpos):
    """Grid-bucketed candidate pairs of segments with overlapping boxes.

    Boxes use floats inflated by a relative epsilon; every truly interacting
    pair is a candidate, and candidates are confirmed exactly by the caller.
    """
    import math

    boxes = []
    lo_x = lo_y = math.inf
    hi_x = hi_y = -math.inf
    for (a, b) in segs:
        ax, ay = fpos[a]
        bx, by = fpos[b]
        x0, x1 = min(ax, bx), max(ax, bx)
        y0, y1 = min(ay, by), max(ay, by)
        pad = 1e-9 * max(1.0, abs(x0), abs(x1), abs(y0), abs(y1))
        boxes.append((x0 - pad, y0 - pad, x1 + pad, y1 + pad))
        lo_x, hi_x = min(lo_x, x0), max(hi_x, x1)
        lo_y, hi_y = min(lo_y, y0), max(hi_y, y1)
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-30)
    cell = span / max(4, int(math.sqrt(len(segs))) or 1)
    grid: dict[tuple[int, int], list[int]] = {}
    for i, (x0, y0, x1, y1) in enumerate(boxes):
        for gx in range(int((x0 - lo_x) / cell), int((x1 - lo_x) / cell) + 1):
            for gy in range(int((y0 - lo_y) / cell), int((y1 - lo_y) / cell) + 1):
                grid.setdefault((gx, gy), []).append(i)
    pairs = set()
    for bucket in grid.values():
        for ii in range(len(bucket)):
            for jj in range(ii + 1, len(bucket)):
                i, j = bucket[ii], bucket[jj]
                bi, bj = boxes[i], boxes[j]
                if bi[0] <= bj[2] and bj[0] <= bi[2] and bi[1] <= bj[3] and bj[1] <= bi[3]:
                    pairs.add((min(i, j), max(i, j)))
    return boxes, grid, pairs, (lo_x, lo_y, cell)


def respects(d: Drawing, p: Problem) -> RespectsReport:
    """Exact check of the four conditions a drawing must satisfy."""
    v: list[str] = []
    pos = d.positions
    poly = p.polygon

    for vert, ci in p.corners.assignments:
        if pos.get(vert) != poly.corners[ci]:
            v.append(f"corner vertex {vert} is not pinned to corner {ci}")

    boundary_set = set(p.graph.outer_cycle)
    for i, path in enumerate(_side_paths(p.graph.outer_cycle, p.corners.corner_vertices)):
        a, b = poly.corners[i], poly.corners[(i + 1) % poly.k]
        ab = v_sub(b, a)
        denom = dot(ab, ab)
        last_t = Fraction(0)
        for w in path[1:-1]:
            pw = pos.get(w)
            if pw is None:
                v.append(f"side vertex {w} unplaced")
                continue
            if cross(a, b, pw) != 0:
                v.append(f"side vertex {w} is off side {i}")
                continue
            t = dot(v_sub(pw, a), ab) / denom
            if not (0 < t < 1):
                v.append(f"side vertex {w} is outside side segment {i}")
            if t <= last_t:
                v.append(f"side vertices out of order on side {i} at {w}")
            last_t = t

    for vert in range(p.graph.n):
        if vert in boundary_set:
            continue
        pv = pos.get(vert)
        if pv is None:
            v.append(f"interior vertex {vert} unplaced")
        elif poly.contains(pv) != "inside":
            v.append(f"interior vertex {vert} is not strictly inside P")

    if len({pos[w] for w in pos}) != len(pos):
        v.append("two vertices share a point")

    # crossings and incidences, prefiltered by float boxes
    edges = p.graph.edges()
    fpos = {w: (float(pos[w].x), float(pos[w].y)) for w in pos}
    boxes, grid, pairs, (lo_x, lo_y, cell) = _segment_candidates(edges, fpos)
    for (i, j) in sorted(pairs):
        a, b = edges[i]
        c, e = edges[j]
        shared = {a, b} & {c, e}
        if len(shared) == 0:
            if segments_share_point(pos[a], pos[b], pos[c], pos[e]):
                v.append(f"edges {edges[i]} and {edges[j]} intersect")
        elif len(shared) == 1:
            s = shared.pop()
            pp = pos[({a, b} - {s}).pop()]
            qq = pos[({c, e} - {s}).pop()]
            if collinear_overlap_past_shared(pos[s], pp, qq):
                v.append(f"edges {edges[i]} and {edges[j]} overlap at {s}")
    # vertex on a non-incident edge
    for i, (a, b) in enumerate(edges):
        x0, y0, x1, y1 = boxes[i]
        for w in pos:
            if w in (a, b):
                continue
            fx, fy = fpos[w]
            if x0 <= fx <= x1 and y0 <= fy <= y1:
                if point_on_segment(pos[w], pos[a], pos[b]):
                    v.append(f"vertex {w} lies on edge {(a, b)}")

    return RespectsReport(ok=not v, violations=v)


# ---------------------------------------------------------------------------
# Tasks and split structures
# ---------------------------------------------------------------------------


@dataclass
class Subproblem:
    faces: frozenset[int]
    boundary: list[int]
    polygon: ConvexPolygon
    corner_vertices: list[int]
    kind: str = "cut"  # "cut" | "wedge" | "triangle-child"


@dataclass
class RiverFillTask:
    faces: set[int]
    strip: list[int]
    pockets: list[Pocket]
    walks: tuple[list[int], list[int]]
    region: ConvexPolygon
    cert_polygon: ConvexPolygon
    e1: Edge
    e2: Edge
    boundary: list[int] = field(default_factory=list)
    side_of_bedge: dict = field(default_factory=dict)
    beta_edges: dict = field(default_factory=dict)


@dataclass
class SubproblemSplit:
    subproblems: list[Subproblem]
    river_task: RiverFillTask
    cut_record: list[AlphaCut]


def select_split_edges(
    boundary: list[int], corner_vertices: list[int]
) -> tuple[Edge, Edge]:
    """Two outer edges on non-consecutive polygon sides (k >= 4): the pair of
    sides most evenly bisecting the boundary edge count, middle edge each."""
    paths = _side_paths(boundary, corner_vertices)
    k = len(paths)
    if k < 4:
        raise LayoutError("select_split_edges needs at least 4 sides")
    lens = [len(p) - 1 for p in paths]
    total = sum(lens)
    best = None
    for i in range(k):
        for j in range(i + 2, k):
            if i == 0 and j == k - 1:
                continue  # consecutive around the wrap
            arc1 = sum(lens[i + 1 : j])
            arc2 = total - arc1 - lens[i] - lens[j]
            cand = (abs(arc1 - arc2), i, j)
            if best is None or cand < best:
                best = cand
    _, i, j = best
    e1 = (paths[i][(lens[i] - 1) // 2], paths[i][(lens[i] - 1) // 2 + 1])
    e2 = (paths[j][(lens[j] - 1) // 2], paths[j][(lens[j] - 1) // 2 + 1])
    return e1, e2


def triangle_split_edges(
    boundary: list[int], corner_vertices: list[int]
) -> tuple[Edge, Edge]:
    """For triangles: corner c = corner 0; e1, e2 are the edges of the two
    incident sides furthest from c, so the far side flattens into the river."""
    paths = _side_paths(boundary, corner_vertices)
    s0, s2 = paths[0], paths[2]
    e1 = (s0[-2], s0[-1])
    e2 = (s2[0], s2[1])
    return e1, e2


# ---------------------------------------------------------------------------
# The engine
# ---------------------------------------------------------------------------


@dataclass
class _Residual:
    """Convex residual polygon with feature provenance.

    corner_verts[i] is the graph vertex pinned at polygon corner i; edge
    tag i covers the edge from corner i to i+1 and is either
    ("side", task_side_index) or ("cut",).
    """

    polygon: ConvexPolygon
    corner_verts: list[int]
    edge_tags: list[tuple]

    def edge_of_side(self, side: int) -> int:
        hits = [i for i, t in enumerate(self.edge_tags) if t == ("side", side)]
        if len(hits) != 1:
            raise LayoutError(f"side {side} has {len(hits)} residual stretches")
        return hits[0]

    def corner_of_vertex(self, vert: int) -> int:
        return self.corner_verts.index(vert)


class _Engine:
    def __init__(self, problem: Problem, trace: list | None):
        self.g = problem.graph
        self.root = problem
        self.n = problem.graph.n
        self.trace = trace
        self.positions: dict[int, Point] = {}
        self.fills: list[RiverFillTask] = []
        self.bumps: list[BumpLayout] = []
        self.bump_owned: set[int] = set()
        root_d2 = potential_resolution(problem.polygon).sq
        self.root_ratio2 = root_d2 / (problem.size**2)  # (d/s)^2

    # -- helpers ----------------------------------------------------------

    def _set(self, vert: int, p: Point):
        old = self.positions.get(vert)
        if old is not None and old != p:
            raise LayoutError(f"vertex {vert} placed twice inconsistently")
        self.positions[vert] = p

    def _ratio_ok(self, d2: Fraction, s: int) -> bool:
        return d2 / (s * s) >= self.root_ratio2

    def _emit(self, record: dict):
        if self.trace is not None:
            self.trace.append(record)

    # -- leaf placement -----------------------------------------------------

    def _leaf(self, task: Subproblem):
        paths = _side_paths(task.boundary, task.corner_vertices)
        for i, path in enumerate(paths):
            a = task.polygon.corners[i]
            b = task.polygon.corners[(i + 1) % task.polygon.k]
            m = len(path) - 1
            self._set(path[0], a)
            for j in range(1, m):
                self._set(path[j], v_lerp(a, b, Fraction(j, m)))
            self._set(path[-1], b)

    # -- split --------------------------------------------------------------

    def _solve(self, task: Subproblem, depth: int = 0):
        # LIFO queue; a node's fill is pushed beneath its children so it pops
        # only after the whole subtree fixed the river boundary
        stack: list[tuple[str, object, int]] = [("solve", task, depth)]
        while stack:
            kind, item, dep = stack.pop()
            if kind == "solve":
                children = self._solve_one(item, dep)
                for ch in children:
                    stack.append(ch)
            elif kind == "fill":
                self._fill(item)

    def _solve_one(self, task: Subproblem, depth: int):
        for i, cv in enumerate(task.corner_vertices):
            self._set(cv, task.polygon.corners[i])
        interior = [
            v
            for v in {w for f in task.faces for w in self.g.faces[f]}
            if v not in set(task.boundary)
        ]
        if not interior:
            self._leaf(task)
            self._emit(
                {
                    "event": "leaf",
                    "depth": depth,
                    "faces": len(task.faces),
                    "k": task.polygon.k,
                }
            )
            return []
        split = self._split_task(task, depth)
        children = [("solve", sp, depth + 1) for sp in reversed(split.subproblems)]
        return [("fill", split.river_task, depth)] + children

    def _split_task(self, task: Subproblem, depth: int) -> SubproblemSplit:
        ctx = DiskContext(self.g, frozenset(task.faces), list(task.boundary))
        if task.polygon.k >= 4:
            e1, e2 = select_split_edges(task.boundary, task.corner_vertices)
        else:
            e1, e2 = triangle_split_edges(task.boundary, task.corner_vertices)
        rp = find_river_in(ctx, e1, e2)
        sides = side_sets_for(task.boundary, task.corner_vertices)
        rp, _ = _absorb_core(ctx, rp, sides)
        # re-derive pockets from the final partition: incremental absorption
        # records can nest (a chord pocket swallowed by a later flat), but
        # nested pockets always share the chord edge, so components of
        # river-minus-strip merge them
        from .river import derive_pockets

        pockets = derive_pockets(ctx, rp)
        return self._split_absorbed(task, ctx, rp, pockets, depth)

    def _split_absorbed(
        self,
        task: Subproblem,
        ctx: DiskContext,
        rp: RiverPartition,
        pockets: list[Pocket],
        depth: int,
    ) -> SubproblemSplit:
        g = self.g
        paths = _side_paths(task.boundary, task.corner_vertices)
        sides = side_sets_for(task.boundary, task.corner_vertices)
        corner_set = set(task.corner_vertices)
        bpos = ctx.bpos
        nb = len(task.boundary)

        # outside components in ccw boundary order
        comps: list[dict] = []
        outside = set(ctx.faces) - rp.river
        seen: set[int] = set()
        for fid in sorted(outside):
            if fid in seen:
                continue
            comp = _dual_component_of(ctx, fid, rp.river)
            seen |= comp
            arc = _arc_of(ctx, comp)
            comps.append({"faces": comp, "arc": arc})
        comps.sort(key=lambda c: bpos[c["arc"][0]])

        # classify: spanned corners, wedge vs cut
        for c in comps:
            arc = c["arc"]
            spanned = [v for v in arc[1:-1] if v in corner_set]
            c["spanned"] = spanned
            if not spanned:
                raise LayoutError("flat component survived absorption")
            u, w = arc[0], arc[-1]
            c["u"], c["w"] = u, w
            fresh_u = u not in corner_set
            fresh_w = w not in corner_set
            c["wedge"] = (
                len(spanned) == 1
                and fresh_u
                and fresh_w
                and _only_side(sides, u) is not None
                and _only_side(sides, w) is not None
                and _sides_adjacent(
                    _only_side(sides, u), _only_side(sides, w), task.polygon.k
                )
            )

        residual = _Residual(
            polygon=task.polygon,
            corner_verts=list(task.corner_vertices),
            edge_tags=[("side", i) for i in range(task.polygon.k)],
        )
        s_res = len(ctx.faces)
        cut_record: list[AlphaCut] = []
        subproblems: list[Subproblem] = []
        cut_summaries: list[dict] = []

        # 1. real cuts, in boundary order
        for c in comps:
            if c["wedge"]:
                continue
            s_i = len(c["faces"])
            alpha_piece = Fraction(s_i, s_res)
            feat_entry, fixed_entry = self._feature_for(residual, c["u"], sides)
            feat_exit, fixed_exit = self._feature_for(residual, c["w"], sides)
            cut, left, right = alpha_cut(
                residual.polygon, feat_entry, feat_exit, 1 - alpha_piece
            )
            if not cut.right_bound_guaranteed:
                raise LayoutError("adjacent-edge cut slipped through classification")
            piece = right
            self._set(c["u"], cut.entry_point)
            self._set(c["w"], cut.exit_point)
            sp = self._make_subproblem(task, c, piece, kind="cut")
            subproblems.append(sp)
            cut_record.append(cut)
            d2 = potential_resolution(piece).sq
            ok = self._ratio_ok(d2, s_i)
            cut_summaries.append(
                {
                    "faces": s_i,
                    "alpha": frac_to_str(alpha_piece),
                    "entry": list(feat_entry),
                    "exit": list(feat_exit),
                    "piece_d2": frac_to_str(d2),
                    "ratio_ok": ok,
                }
            )
            if not ok:
                raise LayoutError("subproblem ratio certificate failed")
            residual = self._update_residual(
                residual, cut, left, c, sides, fixed_entry, fixed_exit
            )
            s_res -= s_i

        # 2. wedges (corner-spanning components kept with the river's budget)
        wedge_summaries: list[dict] = []
        wedge_cuts: list[tuple[Point, Point, Point]] = []
        for c in comps:
            if not c["wedge"]:
                continue
            s_w = len(c["faces"])
            gamma = Fraction(s_w, s_res)
            corner_vertex = c["spanned"][0]
            ci = residual.corner_of_vertex(corner_vertex)
            cpoint = residual.polygon.corners[ci]
            kres = residual.polygon.k
            prev_pt = residual.polygon.corners[(ci - 1) % kres]
            next_pt = residual.polygon.corners[(ci + 1) % kres]
            u_fixed = self.positions.get(c["u"])
            w_fixed = self.positions.get(c["w"])
            upos = u_fixed if u_fixed is not None else v_lerp(cpoint, prev_pt, gamma)
            wpos = w_fixed if w_fixed is not None else v_lerp(cpoint, next_pt, gamma)
            wedge_poly = ConvexPolygon((upos, cpoint, wpos))
            self._set(c["u"], upos)
            self._set(c["w"], wpos)
            sp = Subproblem(
                faces=frozenset(c["faces"]),
                boundary=component_outer_cycle(g, c["faces"]),
                polygon=wedge_poly,
                corner_vertices=[c["u"], corner_vertex, c["w"]],
                kind="wedge",
            )
            subproblems.append(sp)
            d2 = potential_resolution(wedge_poly).sq
            ok = self._ratio_ok(d2, s_w)
            wedge_summaries.append(
                {
                    "faces": s_w,
                    "gamma": frac_to_str(gamma),
                    "corner": corner_vertex,
                    "d2": frac_to_str(d2),
                    "ratio_ok": ok,
                }
            )
            if not ok:
                raise LayoutError("wedge ratio certificate failed")
            wedge_cuts.append((upos, cpoint, wpos))

        # river certificate: the polygon the river (with its wedges) fills
        s_river = s_res
        d2_river = potential_resolution(residual.polygon).sq
        river_ok = self._ratio_ok(d2_river, s_river) if s_river else True
        if not river_ok:
            raise LayoutError("river ratio certificate failed")

        region = residual.polygon
        for (upos, cpoint, wpos) in wedge_cuts:
            region = _truncate_corner(region, cpoint, upos, wpos)

        # straight-line provenance of the river boundary, for the fill's
        # run decomposition: task-boundary edges carry their side index,
        # everything else lies on some subproblem's straightened bank
        side_of_bedge: dict = {}
        for i, path in enumerate(paths):
            for x, y in zip(path, path[1:]):
                side_of_bedge[edge_key(x, y)] = i
        beta_edges: dict = {}
        for bi, sp in enumerate(subproblems):
            cyc = sp.boundary
            arc_edges = set()
            comp = next(
                c for c in comps if frozenset(c["faces"]) == sp.faces
            )
            for x, y in zip(comp["arc"], comp["arc"][1:]):
                arc_edges.add(edge_key(x, y))
            m = len(cyc)
            for t in range(m):
                e = edge_key(cyc[t], cyc[(t + 1) % m])
                if e not in arc_edges:
                    beta_edges[e] = bi

        fill = RiverFillTask(
            faces=set(rp.river),
            strip=list(rp.strip),
            pockets=pockets,
            walks=(list(rp.left_bank), list(rp.right_bank)),
            region=region,
            cert_polygon=residual.polygon,
            e1=rp.e1,
            e2=rp.e2,
            boundary=list(task.boundary),
            side_of_bedge=side_of_bedge,
            beta_edges=beta_edges,
        )
        self._emit(
            {
                "event": "split",
                "depth": depth,
                "faces": len(ctx.faces),
                "k": task.polygon.k,
                "e1": list(rp.e1),
                "e2": list(rp.e2),
                "cuts": cut_summaries,
                "wedges": wedge_summaries,
                "river": {
                    "faces": s_river,
                    "d2": frac_to_str(d2_river),
                    "ratio_ok": river_ok,
                },
            }
        )
        return SubproblemSplit(
            subproblems=subproblems, river_task=fill, cut_record=cut_record
        )

    def _feature_for(self, residual: _Residual, vert: int, sides) -> tuple[tuple, bool]:
        """Feature of the residual polygon fixing the contact vertex `vert`."""
        if vert in residual.corner_verts:
            return ("corner", residual.corner_verts.index(vert)), True
        if self.positions.get(vert) is not None:
            raise LayoutError(f"contact {vert} fixed but not a residual corner")
        side = _only_side(sides, vert)
        if side is None:
            # a corner vertex of the task that is not a residual corner
            raise LayoutError(f"contact {vert} has ambiguous side")
        return ("edge", residual.edge_of_side(side)), False

    def _make_subproblem(
        self, task: Subproblem, c: dict, piece: ConvexPolygon, kind: str
    ) -> Subproblem:
        # piece corners ccw: exit point, entry point, then original corners
        corner_vertices = [c["w"], c["u"]] + c["spanned"]
        return Subproblem(
            faces=frozenset(c["faces"]),
            boundary=component_outer_cycle(self.g, c["faces"]),
            polygon=piece,
            corner_vertices=corner_vertices,
            kind=kind,
        )

    def _update_residual(
        self,
        residual: _Residual,
        cut: AlphaCut,
        left: ConvexPolygon,
        c: dict,
        sides,
        fixed_entry: bool,
        fixed_exit: bool,
    ) -> _Residual:
        old = residual
        pts = list(left.corners)  # [entry, exit, chain from after-exit to entry]
        corner_verts: list[int] = []
        edge_tags: list[tuple] = []
        old_index = {p: i for i, p in enumerate(old.polygon.corners)}
        for i, p in enumerate(pts):
            if i == 0:
                corner_verts.append(c["u"])
            elif i == 1:
                corner_verts.append(c["w"])
            else:
                corner_verts.append(old.corner_verts[old_index[p]])
        for i in range(len(pts)):
            a, b = pts[i], pts[(i + 1) % len(pts)]
            if i == 0:
                edge_tags.append(("cut",))
            else:
                # the stretch belongs to the old edge it lies on
                tag = None
                for j in range(old.polygon.k):
                    pa = old.polygon.corners[j]
                    pb = old.polygon.corners[(j + 1) % old.polygon.k]
                    if point_on_segment(a, pa, pb) and point_on_segment(b, pa, pb):
                        tag = old.edge_tags[j]
                        break
                if tag is None:
                    raise LayoutError("residual edge lost its provenance")
                edge_tags.append(tag)
        return _Residual(ConvexPolygon(tuple(pts)), corner_verts, edge_tags)

    # -- river fill -----------------------------------------------------------

    def _river_boundary_cycle(self, fill: RiverFillTask) -> list[int]:
        a0, b0 = fill.e1
        a1, b1 = fill.e2
        left, right = fill.walks
        cycle = [a0] + list(right)
        back = list(left)[::-1]
        if back and back[-1] == a0:
            back = back[:-1]
        return cycle + back

    def _runs_of(self, fill: RiverFillTask) -> list[tuple[tuple, list[int]]]:
        """Maximal straight runs of the river boundary cycle.

        Each boundary edge lies either on a polygon side or on one
        subproblem's straightened bank; consecutive edges with the same
        provenance share a supporting line.
        """
        cycle = self._river_boundary_cycle(fill)
        m = len(cycle)
        lines = []
        for i in range(m):
            e = edge_key(cycle[i], cycle[(i + 1) % m])
            if e in fill.side_of_bedge:
                lines.append(("side", fill.side_of_bedge[e]))
            elif e in fill.beta_edges:
                lines.append(("beta", fill.beta_edges[e]))
            else:
                raise LayoutError(f"river boundary edge {e} has no line provenance")
        start = None
        for i in range(m):
            if lines[i] != lines[i - 1]:
                start = i
                break
        if start is None:
            raise LayoutError("river boundary collapsed to one line")
        groups: list[list[int]] = [[start]]
        for t in range(1, m):
            idx = (start + t) % m
            if lines[idx] == lines[groups[-1][-1]]:
                groups[-1].append(idx)
            else:
                groups.append([idx])
        runs: list[tuple[tuple, list[int]]] = []
        for grp in groups:
            verts = [cycle[grp[0]]] + [cycle[(i + 1) % m] for i in grp]
            runs.append((lines[grp[0]], verts))
        return runs

    def _fill(self, fill: RiverFillTask, squeeze: Fraction | None = None):
        if squeeze is None:
            # record execution (post-)order so retries can replay fills with
            # anchors induced by deeper fills already in place
            self.fills.append(fill)
        sq = squeeze if squeeze is not None else Fraction(1)
        g = self.g
        closure = {v for f in fill.faces for v in g.faces[f]}
        free = {v for v in closure if v not in self.positions}
        runs = self._runs_of(fill)

        # collect bumps: per run, the river faces confined to the run's own
        # vertices plus true interior (off-run) free vertices, grouped into
        # components, each anchored on its contiguous sub-run
        run_vertices_all = {v for _, run in runs for v in run}
        off_run_free = free - run_vertices_all
        assigned: set[int] = set()
        bumps: list[tuple[list[int], set[int], list[int]]] = []  # (run, faces, base)
        for line, run in runs:
            runset = set(run)
            allowed = runset | off_run_free
            confined = [
                f
                for f in fill.faces
                if f not in assigned
                and all(v in allowed for v in g.faces[f])
            ]
            rest = set(confined)
            while rest:
                comp = _dual_component_of_set(g, min(rest), rest)
                rest -= comp
                cyc = component_outer_cycle(g, comp)
                cset = set(cyc)
                idxs = [i for i, v in enumerate(run) if v in cset]
                if len(idxs) < 2:
                    # floats free of this run; its true run's flood will
                    # reach it through the faces they share
                    continue
                if idxs != list(range(idxs[0], idxs[-1] + 1)):
                    raise LayoutError("bump contact is not a contiguous sub-run")
                base = run[idxs[0] : idxs[-1] + 1]
                assigned |= comp
                bumps.append((run, comp, base))
        covered = {v for _, comp, _ in bumps for f in comp for v in g.faces[f]}
        orphan_verts = off_run_free - covered
        if orphan_verts:
            raise LayoutError(
                f"interior vertices claimed by no bump: {sorted(orphan_verts)[:6]}"
            )

        # fix the free run vertices that are not induced by a bump base
        induced: set[int] = set()
        for _, comp, base in bumps:
            induced |= {v for v in base[1:-1] if v in free}
        for line, run in runs:
            if line[0] != "side":
                continue
            A = self.positions.get(run[0])
            B = self.positions.get(run[-1])
            if A is None or B is None:
                raise LayoutError("side run terminal is unplaced")
            m = len(run) - 1
            for j, v in enumerate(run[1:-1], start=1):
                if v in free and v not in induced:
                    self._set(v, v_lerp(A, B, Fraction(j, m)))

        for run, comp, base in bumps:
            retries = 0
            cur = sq
            while True:
                try:
                    bump = fill_component(
                        g,
                        comp,
                        list(base),
                        self.positions,
                        self.n,
                        squeeze=cur,
                        region=fill.region,
                    )
                    break
                except BumpCollision:
                    retries += 1
                    cur *= 2
                    if retries > 40:
                        raise
            bump.retries = retries
            self.bumps.append(bump)
            for vv, pp in bump.placed.items():
                if vv not in self.positions:
                    self.positions[vv] = pp
                    self.bump_owned.add(vv)

        unplaced = free - set(self.positions)
        if unplaced:
            raise LayoutError(f"river fill left vertices unplaced: {sorted(unplaced)[:6]}")

    # -- drive ----------------------------------------------------------------

    def run(self) -> Drawing:
        root_task = Subproblem(
            faces=frozenset(self.g.internal_faces()),
            boundary=list(self.g.outer_cycle),
            polygon=self.root.polygon,
            corner_vertices=self.root.corners.corner_vertices,
            kind="root",
        )
        self._solve(root_task)
        missing = [v for v in range(self.n) if v not in self.positions]
        if missing:
            raise LayoutError(f"vertices never placed: {missing[:8]}")
        return Drawing(dict(self.positions), self.g)


def _dual_component_of(ctx: DiskContext, start: int, blocked: set[int]) -> set[int]:
    comp = {start}
    stack = [start]
    while stack:
        f = stack.pop()
        vs = ctx.face_verts(f)
        for i in range(3):
            for g2 in ctx.edge_faces.get(edge_key(vs[i], vs[(i + 1) % 3]), []):
                if g2 != f and g2 not in comp and g2 not in blocked:
                    comp.add(g2)
                    stack.append(g2)
    return comp


def _dual_component_of_set(g: PlaneGraph, start: int, within: set[int]) -> set[int]:
    """Edge-connected component of `start` inside the face set `within`."""
    comp = {start}
    stack = [start]
    while stack:
        f = stack.pop()
        vs = g.faces[f]
        for i in range(3):
            for g2 in g.faces_of_edge(vs[i], vs[(i + 1) % 3]):
                if g2 != f and g2 in within and g2 not in comp:
                    comp.add(g2)
                    stack.append(g2)
    return comp


def _arc_of(ctx: DiskContext, comp: set[int]) -> list[int]:
    from .river import _boundary_arc_of_component

    return _boundary_arc_of_component(ctx, comp)


def _only_side(sides: dict[int, set[int]], v: int) -> int | None:
    s = sides.get(v, set())
    return next(iter(s)) if len(s) == 1 else None


def _sides_adjacent(i: int, j: int, k: int) -> bool:
    return (i + 1) % k == j or (j + 1) % k == i


def _truncate_corner(
    poly: ConvexPolygon, cpoint: Point, upos: Point, wpos: Point
) -> ConvexPolygon:
    pts = list(poly.corners)
    i = pts.index(cpoint)
    new = pts[:i] + [upos, wpos] + pts[i + 1 :]
    # a wedge leg can start exactly at an adjacent fixed corner
    dedup = [p for j, p in enumerate(new) if p != new[(j - 1) % len(new)]]
    return ConvexPolygon(tuple(dedup))


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def split(p: Problem, rp: RiverPartition) -> SubproblemSplit:
    """Slice one absorbed river partition into subproblems plus a fill task."""
    rep = validate_problem(p)
    if not rep.valid:
        raise InvalidProblem(f"chord {rep.chord} on side {rep.side}")
    eng = _Engine(p, trace=None)
    ctx = DiskContext.whole(p.graph)
    task = Subproblem(
        faces=frozenset(p.graph.internal_faces()),
        boundary=list(p.graph.outer_cycle),
        polygon=p.polygon,
        corner_vertices=p.corners.corner_vertices,
        kind="root",
    )
    for i, cv in enumerate(task.corner_vertices):
        eng._set(cv, task.polygon.corners[i])
    from .river import derive_pockets

    pockets = derive_pockets(ctx, rp)
    return eng._split_absorbed(task, ctx, rp, pockets, depth=0)


def split_triangle_case(p: Problem) -> SubproblemSplit:
    """Triangle-polygon split: e1/e2 furthest from corner 0, far side flattened."""
    if p.polygon.k != 3:
        raise LayoutError("split_triangle_case needs a 3-sided polygon")
    from .river import absorb_chords_and_sides, find_river

    e1, e2 = triangle_split_edges(p.graph.outer_cycle, p.corners.corner_vertices)
    rp = find_river(p.graph, e1, e2)
    rp = absorb_chords_and_sides(p.graph, rp, p.polygon, p.corners)
    return split(p, rp)


def draw(p: Problem, trace: list | None = None) -> Drawing:
    """Crossing-free straight-line drawing respecting the corner map.

    The checker runs on the result; if a flattening is insufficient the fills
    are re-run with doubled squeeze before giving up.
    """
    rep = validate_problem(p)
    if not rep.valid:
        raise InvalidProblem(f"chord {rep.chord} on side {rep.side}")
    eng = _Engine(p, trace)
    drawing = eng.run()
    squeeze = Fraction(1)
    for _ in range(30):
        report = respects(drawing, p)
        if report.ok:
            return drawing
        squeeze *= 2
        for v in eng.bump_owned:
            eng.positions.pop(v, None)
        eng.bump_owned.clear()
        eng.bumps.clear()
        for fill in eng.fills:
            eng._fill(fill, squeeze=squeeze)
        drawing = Drawing(dict(eng.positions), eng.g)
    report = respects(drawing, p)
    if not report.ok:
        raise LayoutError(f"drawing failed verification: {report.violations[:4]}")
    return drawing
