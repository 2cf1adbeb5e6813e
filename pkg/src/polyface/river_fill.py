"""Placement of river-interior components: canonical ordering, the shift
method on an integer grid, and flattened placement inside the river region.

Components are sub-disks of the root graph anchored on a path of already-
fixed boundary vertices.  Each is drawn on an integer grid with 45-degree
contour edges (the classic shift method), then mapped affinely onto its
anchor segment and compressed perpendicular to it so the bump blocks no
straight edge between fixed vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .embed import PlaneGraph, edge_key
from .geom import ConvexPolygon, Point, rot90, v_add, v_lerp, v_scale, v_sub


class FillError(Exception):
    pass


class NotCanonicallyOrderable(FillError):
    pass


class BumpCollision(FillError):
    pass


# ---------------------------------------------------------------------------
# Component boundary and canonical ordering
# ---------------------------------------------------------------------------


def component_outer_cycle(g: PlaneGraph, faces: set[int]) -> list[int]:
    """Counterclockwise outer cycle of an edge-connected face set.

    Internal faces are counterclockwise, so each boundary edge, directed as
    it appears in its unique incident component face, has the region on its
    left; following successors walks the boundary counterclockwise.
    """
    succ: dict[int, int] = {}
    starts: dict[int, int] = {}
    edge_count: dict[tuple[int, int], int] = {}
    for fid in faces:
        f = g.faces[fid]
        for i in range(3):
            e = edge_key(f[i], f[(i + 1) % 3])
            edge_count[e] = edge_count.get(e, 0) + 1
    for fid in faces:
        f = g.faces[fid]
        for i in range(3):
            u, v = f[i], f[(i + 1) % 3]
            if edge_count[edge_key(u, v)] == 1:
                if u in starts:
                    raise FillError("component boundary pinches at a vertex")
                starts[u] = v
    if not starts:
        raise FillError("component has no boundary")
    v0 = min(starts)
    cycle = [v0]
    v = starts[v0]
    while v != v0:
        cycle.append(v)
        v = starts[v]
        if len(cycle) > 3 * len(faces) + 3:
            raise FillError("component boundary does not close")
    return cycle


def _component_adjacency(g: PlaneGraph, faces: set[int]) -> dict[int, list[int]]:
    """Rotation-ordered neighbors within the component subgraph."""
    edges: set[tuple[int, int]] = set()
    for fid in faces:
        f = g.faces[fid]
        for i in range(3):
            e = edge_key(f[i], f[(i + 1) % 3])
            edges.add(e)
    adj: dict[int, list[int]] = {}
    verts = {v for fid in faces for v in g.faces[fid]}
    for v in verts:
        adj[v] = [u for u in g.rotation[v] if edge_key(u, v) in edges]
    return adj


def canonical_order(g: PlaneGraph, faces: set[int], base: list[int]) -> list[int]:
    """Canonical (shift-method) vertex order for an internally triangulated
    2-connected component, starting with the anchor path `base`.

    Works on the contour (the boundary path from base[0] to base[-1] over the
    top; base-interior vertices start below it): repeatedly delete a
    non-anchor contour vertex whose only contour neighbors are its two
    immediate ones, exposing its fan.  Chords into the base interior are
    legal and do not block removal.
    """
    cycle = component_outer_cycle(g, faces)
    base = list(base)
    m = len(cycle)
    k = len(base)
    start = None
    doubled = cycle + cycle
    for i in range(m):
        if doubled[i : i + k] == base:
            start = i
            break
        if doubled[i : i + k] == base[::-1]:
            base = base[::-1]
            start = i
            break
    if start is None:
        raise FillError("anchor path is not on the component boundary")
    cycle = cycle[start:] + cycle[:start]  # = base + upper path right-to-left
    adj = _component_adjacency(g, faces)
    base_set = set(base)
    contour = [base[0]] + cycle[:k - 1:-1] + [base[-1]] if k < m else list(base)
    if k == m:
        # every vertex on the boundary: the "upper" path is the base itself
        contour = list(base)
    removed: list[int] = []
    alive = set(adj)

    def fan(v: int, left: int, right: int) -> list[int]:
        rot = [u for u in adj[v] if u in alive]
        i = rot.index(left)
        out = []
        j = (i + 1) % len(rot)
        while rot[j] != right:
            out.append(rot[j])
            j = (j + 1) % len(rot)
            if len(out) > len(rot):
                raise NotCanonicallyOrderable("fan walk failed")
        return out

    while len(alive) > len(base_set):
        cset = set(contour)
        pick = None
        for idx in range(1, len(contour) - 1):
            v = contour[idx]
            if v in base_set:
                continue
            left, right = contour[idx - 1], contour[idx + 1]
            blocked = any(
                u in cset and u not in (left, right) for u in adj[v] if u in alive
            )
            if blocked:
                continue
            if pick is None or v < pick[0]:
                pick = (v, idx)
        if pick is None:
            raise NotCanonicallyOrderable(
                "no removable vertex on the component contour"
            )
        v, idx = pick
        f = fan(v, contour[idx - 1], contour[idx + 1])
        alive.discard(v)
        removed.append(v)
        contour = contour[:idx] + f + contour[idx + 1 :]
        if len(set(contour)) != len(contour):
            raise NotCanonicallyOrderable("contour update repeats a vertex")
    if contour != base:
        raise NotCanonicallyOrderable("removals did not terminate at the anchor")
    return base + list(reversed(removed))


def check_prefix_contiguity(
    g: PlaneGraph, faces: set[int], order: list[int], base_len: int
) -> bool:
    """Oracle: every inserted vertex's placed neighbors are >=2 and occur as
    one contiguous run of the contour at its insertion time."""
    adj = _component_adjacency(g, faces)
    contour = list(order[:base_len])
    for v in order[base_len:]:
        nbrs = [w for w in contour if w in set(adj[v])]
        if len(nbrs) < 2:
            return False
        idxs = [contour.index(w) for w in nbrs]
        lo, hi = min(idxs), max(idxs)
        if sorted(idxs) != list(range(lo, hi + 1)):
            return False
        contour = contour[: lo + 1] + [v] + contour[hi:]
    return True


# ---------------------------------------------------------------------------
# Shift method (integer grid)
# ---------------------------------------------------------------------------


def fpp_draw(
    g: PlaneGraph, faces: set[int], order: list[int], base_len: int = 2
) -> dict[int, tuple[int, int]]:
    """Grid drawing of the component by the shift method.

    The first `base_len` vertices of `order` form the bottom path, placed at
    (0,0), (2,0), (4,0), ...; every further vertex is placed at the peak of
    the 45-degree tent over its contour neighbors, after the classic +1/+2
    contour shifts (the very first insertion needs no shift).
    """
    adj = _component_adjacency(g, faces)
    parent: dict[int, int | None] = {}
    off: dict[int, int] = {}
    ypos: dict[int, int] = {}
    contour: list[int] = list(order[:base_len])
    for i, b in enumerate(contour):
        parent[b] = contour[i - 1] if i else None
        off[b] = 2 if i else 0
        ypos[b] = 0

    first = True
    for v in order[base_len:]:
        nbr = set(adj[v])
        idxs = [i for i, w in enumerate(contour) if w in nbr]
        if len(idxs) < 2 or idxs != list(range(idxs[0], idxs[-1] + 1)):
            raise FillError(f"insertion of {v} does not cover a contour arc")
        p, q = idxs[0], idxs[-1]
        wp, wq = contour[p], contour[q]
        if not first:
            if q == p + 1:
                off[wq] += 2
            else:
                off[contour[p + 1]] += 1
                off[wq] += 1
        first = False
        dx = sum(off[contour[i]] for i in range(p + 1, q + 1))
        num_x = dx + ypos[wq] - ypos[wp]
        num_y = dx + ypos[wq] + ypos[wp]
        if num_x % 2 or num_y % 2:
            raise FillError("parity violation in shift method")
        dvx, vy = num_x // 2, num_y // 2
        if q > p + 1:
            off[contour[p + 1]] -= dvx
            parent[contour[p + 1]] = v
        off[wq] = dx - dvx
        parent[wq] = v
        parent[v] = wp
        off[v] = dvx
        ypos[v] = vy
        contour = contour[: p + 1] + [v] + contour[q:]

    children: dict[int, list[int]] = {}
    for v, par in parent.items():
        if par is not None:
            children.setdefault(par, []).append(v)
    xpos: dict[int, int] = {}
    root = order[0]
    stack = [(root, 0)]
    while stack:
        v, x = stack.pop()
        x += off[v]
        xpos[v] = x
        for c in children.get(v, []):
            stack.append((c, x))
    return {v: (xpos[v], ypos[v]) for v in order}


def grid_bounds(grid: dict[int, tuple[int, int]]) -> tuple[int, int]:
    xs = [p[0] for p in grid.values()]
    ys = [p[1] for p in grid.values()]
    return (max(xs) - min(xs), max(ys) - min(ys))


# ---------------------------------------------------------------------------
# Placing a component inside the river
# ---------------------------------------------------------------------------


@dataclass
class BumpLayout:
    """A component's grid drawing and its flattened image in the plane."""

    component: set[int]
    base: list[int]
    grid: dict[int, tuple[int, int]]
    placed: dict[int, Point]
    squeeze: Fraction
    retries: int = 0


def place_component(
    grid: dict[int, tuple[int, int]],
    base: list[int],
    anchor_a: Point,
    anchor_b: Point,
    n_total: int,
    squeeze: Fraction = Fraction(1),
) -> dict[int, Point]:
    """Affine image of the grid drawing on the segment anchor_a -> anchor_b.

    x spans the anchor; y is compressed by 1/(2 * n_total * squeeze) relative
    to the similarity scale, on the left side of the directed anchor (which
    is the component's interior side for a counterclockwise base).
    """
    x0 = grid[base[0]][0]
    width = grid[base[-1]][0] - x0
    if width <= 0:
        raise FillError("anchor has zero grid width")
    ab = v_sub(anchor_b, anchor_a)
    per = rot90(ab)
    flat = Fraction(1, 2 * n_total) / squeeze
    out: dict[int, Point] = {}
    for v, (gx, gy) in grid.items():
        t = Fraction(gx - x0, width)
        p = v_add(anchor_a, v_scale(ab, t))
        if gy:
            p = v_add(p, v_scale(per, Fraction(gy, width) * flat))
        out[v] = p
    return out


def tent_draw(
    g: PlaneGraph,
    faces: set[int],
    order: list[int],
    base_len: int,
    base_t: list[Fraction],
) -> dict[int, tuple[Fraction, Fraction]]:
    """Shift-method analogue over a base with prescribed (arbitrary) spacing.

    Works in the base-line frame: x is the position along the anchor segment
    (the given parameters), h the perpendicular height.  Each inserted vertex
    is placed above every line through two vertices of the contour arc it
    covers, which guarantees it sees the whole arc; heights are normalized by
    the caller.  Needed when a bump's base carries already-fixed interior
    vertices, where no affine image of the integer grid can match them.
    """
    adj = _component_adjacency(g, faces)
    xs: dict[int, Fraction] = {}
    hs: dict[int, Fraction] = {}
    contour: list[int] = list(order[:base_len])
    for v, t in zip(contour, base_t):
        xs[v] = t
        hs[v] = Fraction(0)
    for i in range(1, len(contour)):
        if xs[contour[i]] <= xs[contour[i - 1]]:
            raise FillError("tent base parameters are not increasing")

    for v in order[base_len:]:
        nbr = set(adj[v])
        idxs = [i for i, w in enumerate(contour) if w in nbr]
        if len(idxs) < 2 or idxs != list(range(idxs[0], idxs[-1] + 1)):
            raise FillError(f"insertion of {v} does not cover a contour arc")
        arc = contour[idxs[0] : idxs[-1] + 1]
        xv = (xs[arc[0]] + xs[arc[-1]]) / 2
        hv = Fraction(0)
        for ii in range(len(arc)):
            for jj in range(ii + 1, len(arc)):
                a, b = arc[ii], arc[jj]
                if xs[a] == xs[b]:
                    raise FillError("coincident contour abscissae")
                line_h = hs[a] + (hs[b] - hs[a]) * (xv - xs[a]) / (xs[b] - xs[a])
                hv = max(hv, line_h)
        hv += (xs[arc[-1]] - xs[arc[0]]) / 4
        xs[v], hs[v] = xv, hv
        contour = contour[: idxs[0] + 1] + [v] + contour[idxs[-1] :]
    return {v: (xs[v], hs[v]) for v in order}


def fill_component(
    g: PlaneGraph,
    faces: set[int],
    anchor: list[int],
    positions: dict[int, Point],
    n_total: int,
    squeeze: Fraction = Fraction(1),
    region: ConvexPolygon | None = None,
) -> BumpLayout:
    """Draw one component anchored on already-fixed vertices.

    The anchor's extreme vertices must be in `positions`.  With a free anchor
    interior the classic grid drawing is mapped affinely onto the segment and
    induces those positions; when interior anchor vertices are already fixed
    the tent variant keeps them in place.  All off-anchor vertices must land
    strictly inside `region` when given.
    """
    order = canonical_order(g, faces, anchor)
    base = order[: len(anchor)]
    A, B = positions[base[0]], positions[base[-1]]
    interior_fixed = any(v in positions for v in base[1:-1])
    grid: dict[int, tuple[int, int]] = {}
    if not interior_fixed:
        grid = fpp_draw(g, faces, order, base_len=len(anchor))
        placed = place_component(grid, base, A, B, n_total, squeeze)
        heights = {v: grid[v][1] for v in order}
    else:
        ab = v_sub(B, A)
        den = ab.x * ab.x + ab.y * ab.y
        base_t = []
        for v in base:
            p = positions[v]
            base_t.append(((p.x - A.x) * ab.x + (p.y - A.y) * ab.y) / den)
        frame = tent_draw(g, faces, order, len(anchor), base_t)
        hmax = max(h for (_, h) in frame.values())
        flat = Fraction(1, 2 * n_total) / squeeze
        per = rot90(ab)
        placed = {}
        for v, (t, h) in frame.items():
            p = v_add(A, v_scale(ab, t))
            if h:
                p = v_add(p, v_scale(per, (h / hmax) * flat))
            placed[v] = p
        heights = {v: frame[v][1] for v in order}
    if region is not None:
        for v, p in placed.items():
            if v in positions:
                continue
            where = region.contains(p)
            if heights[v] == 0 and where == "outside":
                raise BumpCollision(f"anchor vertex {v} left the region")
            if heights[v] != 0 and where != "inside":
                raise BumpCollision(f"bump vertex {v} is not strictly inside")
    return BumpLayout(
        component=set(faces),
        base=base,
        grid=grid,
        placed=placed,
        squeeze=squeeze,
    )
