"""Face partitions between two outer edges ("rivers") and their absorption.

A river between outer edges e1 and e2 is a dual path of internal faces whose
union touches no vertex twice along its boundary walk.  Construction is by
region shrinking: start with the whole disk bounded by the two boundary arcs,
then repeatedly
  * shortcut a bank through a chord that lies inside the region, and
  * reroute a bank through a component of vertices still strictly inside.
Each step strictly decreases the number of faces between the banks, so the
loop terminates with a strip whose faces all have their vertices on the two
banks; such a strip is automatically a dual path.

Absorption then grows the river per the splitting rules: the faces behind
any chord of a bank join the river, and so does any outside component whose
boundary arc lies within a single polygon side (it would otherwise become a
flattened subproblem).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .embed import CornerMap, Edge, PlaneGraph, edge_key
from .geom import ConvexPolygon


class NoRiver(Exception):
    pass


# ---------------------------------------------------------------------------
# Sub-disk context
# ---------------------------------------------------------------------------


@dataclass
class DiskContext:
    """A triangulated sub-disk of a root plane graph.

    Face ids and vertex ids are the root graph's; `faces` restricts to the
    active region and `boundary` is its outer cycle, counterclockwise.
    """

    graph: PlaneGraph
    faces: frozenset[int]
    boundary: list[int]

    def __post_init__(self):
        self.bpos = {v: i for i, v in enumerate(self.boundary)}
        ef: dict[Edge, list[int]] = {}
        vf: dict[int, list[int]] = {}
        for fid in sorted(self.faces):
            f = self.graph.faces[fid]
            for i in range(3):
                ef.setdefault(edge_key(f[i], f[(i + 1) % 3]), []).append(fid)
            for v in f:
                vf.setdefault(v, []).append(fid)
        self.edge_faces = ef
        self.vertex_faces = vf

    @staticmethod
    def whole(graph: PlaneGraph) -> "DiskContext":
        return DiskContext(
            graph, frozenset(graph.internal_faces()), list(graph.outer_cycle)
        )

    def face_verts(self, fid: int):
        return self.graph.faces[fid]

    def inner_face_of(self, u: int, v: int) -> int:
        fs = self.edge_faces.get(edge_key(u, v), [])
        if len(fs) != 1:
            raise NoRiver(f"edge {(u, v)} is not on the sub-disk boundary")
        return fs[0]

    def boundary_edges(self) -> list[Edge]:
        nb = len(self.boundary)
        return [
            edge_key(self.boundary[i], self.boundary[(i + 1) % nb]) for i in range(nb)
        ]


# ---------------------------------------------------------------------------
# River partitions
# ---------------------------------------------------------------------------


@dataclass
class RiverPartition:
    """(F1, F2, R) face partition with the strip and its banks.

    side1 holds the faces left of the oriented strip (walking e1 -> e2),
    side2 those right of it.  `strip` is the ordered dual path; after
    absorption `river` is a superset of it.  The banks run from e1 to e2:
    left from a0 to b1, right from b0 to a1, where e1 = (a0, b0) and
    e2 = (a1, b1) are oriented along the counterclockwise boundary.
    """

    river: set[int]
    side1: set[int]
    side2: set[int]
    e1: Edge
    e2: Edge
    left_bank: list[int]
    right_bank: list[int]
    strip: list[int] = field(default_factory=list)

    @property
    def banks(self) -> tuple[list[int], list[int]]:
        return (self.left_bank, self.right_bank)


@dataclass
class Pocket:
    """A river sub-region absorbed behind the strip.

    kind is "chord" (anchor = the two chord endpoints on the final bank) or
    "flat" (anchor = the boundary-arc path the region was flattened onto).
    """

    kind: str
    anchor: list[int]
    faces: set[int]


def _orient_along(boundary: list[int], bpos: dict[int, int], e: Edge) -> tuple[int, int]:
    u, v = e
    if u not in bpos or v not in bpos:
        raise NoRiver(f"edge {e} is not on the boundary")
    nb = len(boundary)
    if (bpos[u] + 1) % nb == bpos[v]:
        return (u, v)
    if (bpos[v] + 1) % nb == bpos[u]:
        return (v, u)
    raise NoRiver(f"edge {e} is not a boundary edge")


def _region_flood(ctx: DiskContext, start: int, blocked: set[Edge]) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        f = stack.pop()
        vs = ctx.face_verts(f)
        for i in range(3):
            e = edge_key(vs[i], vs[(i + 1) % 3])
            if e in blocked:
                continue
            for g2 in ctx.edge_faces[e]:
                if g2 != f and g2 not in seen:
                    seen.add(g2)
                    stack.append(g2)
    return seen


def _find_river_core(
    ctx: DiskContext, e1: Edge, e2: Edge
) -> tuple[list[int], list[int], list[int]]:
    """Returns (ordered strip faces, left bank, right bank)."""
    if edge_key(*e1) == edge_key(*e2):
        raise NoRiver("e1 and e2 must be distinct")
    b = ctx.boundary
    nb = len(b)
    a0, b0 = _orient_along(b, ctx.bpos, e1)
    a1, b1 = _orient_along(b, ctx.bpos, e2)

    def ccw_walk(u: int, v: int) -> list[int]:
        out = [u]
        i = ctx.bpos[u]
        while b[i] != v:
            i = (i + 1) % nb
            out.append(b[i])
        return out

    right = ccw_walk(b0, a1)
    left = ccw_walk(b1, a0)[::-1]

    e1k, e2k = edge_key(a0, b0), edge_key(a1, b1)

    def region_of(left_bank, right_bank) -> set[int]:
        blocked = {e1k, e2k}
        for bank in (left_bank, right_bank):
            for x, y in zip(bank, bank[1:]):
                blocked.add(edge_key(x, y))
        return _region_flood(ctx, ctx.inner_face_of(a0, b0), blocked)

    guard = 4 * len(ctx.faces) + 16
    while True:
        guard -= 1
        if guard < 0:
            raise NoRiver("region shrinking failed to terminate")
        region = region_of(left, right)
        changed = False

        # 1. shortcut a chord lying inside the region
        for which in (0, 1):
            bank = left if which == 0 else right
            posb = {v: i for i, v in enumerate(bank)}
            best = None
            for i, v in enumerate(bank):
                for u in ctx.graph.neighbors(v):
                    j = posb.get(u)
                    if j is None or j <= i + 1:
                        continue
                    fs = ctx.edge_faces.get(edge_key(u, v), [])
                    if len(fs) == 2 and fs[0] in region and fs[1] in region:
                        if best is None or (i, -j) < best:
                            best = (i, -j)
            if best is not None:
                i, j = best[0], -best[1]
                newbank = bank[: i + 1] + bank[j:]
                if which == 0:
                    left = newbank
                else:
                    right = newbank
                changed = True
                break
        if changed:
            continue

        # 2. reroute a bank through a component of strictly interior vertices
        bank_set = set(left) | set(right)
        seed = None
        for v in sorted(ctx.vertex_faces):
            if v in bank_set:
                continue
            if any(f in region for f in ctx.vertex_faces[v]):
                seed = v
                break
        if seed is None:
            break

        comp = {seed}
        stack = [seed]
        while stack:
            v = stack.pop()
            for u in ctx.graph.neighbors(v):
                if u in comp or u in bank_set:
                    continue
                if u in ctx.vertex_faces and any(
                    f in region for f in ctx.vertex_faces[u]
                ):
                    comp.add(u)
                    stack.append(u)

        attach_left = sorted(
            {u for c in comp for u in ctx.graph.neighbors(c) if u in set(left)},
            key=lambda u: left.index(u),
        )
        attach_right = sorted(
            {u for c in comp for u in ctx.graph.neighbors(c) if u in set(right)},
            key=lambda u: right.index(u),
        )
        if len(attach_left) >= 2:
            bank, attach, which = left, attach_left, 0
        elif len(attach_right) >= 2:
            bank, attach, which = right, attach_right, 1
        else:
            raise NoRiver("interior component attaches to fewer than 2 bank vertices")

        u1, u2 = attach[0], attach[-1]
        # BFS from u1 to u2 with all intermediates inside the component, so
        # the rerouted bank actually moves off its old segment
        parent = {u1: None}
        queue = [u1]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            if v == u2:
                break
            for w in ctx.graph.neighbors(v):
                if w in parent:
                    continue
                if w in comp or (w == u2 and v != u1):
                    parent[w] = v
                    queue.append(w)
        if u2 not in parent:
            raise NoRiver("cannot route bank through interior component")
        path = [u2]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        path.reverse()
        i1, i2 = bank.index(u1), bank.index(u2)
        newbank = bank[: i1 + 1] + path[1:-1] + bank[i2:]
        if which == 0:
            left = newbank
        else:
            right = newbank

    strip = _extract_strip(ctx, region, (a0, b0), (a1, b1), left, right)
    return strip, left, right


def _extract_strip(ctx, region, e1o, e2o, left, right) -> list[int]:
    a0, b0 = e1o
    a1, b1 = e2o
    t = ctx.inner_face_of(a0, b0)
    exit_key = edge_key(a1, b1)
    if edge_key(a0, b0) == exit_key:
        raise NoRiver("e1 == e2")
    strip = [t]
    gate = (a0, b0)
    used = {t}
    walk_left = [a0]
    walk_right = [b0]
    while True:
        l, r = gate
        vs = set(ctx.face_verts(t))
        w = (vs - {l, r}).pop()
        el, er = edge_key(l, w), edge_key(w, r)
        if el == exit_key:
            walk_right.append(w)
            gate = (l, w)
            break
        if er == exit_key:
            walk_left.append(w)
            gate = (w, r)
            break

        def next_face(e):
            fs = ctx.edge_faces.get(e, [])
            cand = [f for f in fs if f != t and f in region and f not in used]
            return cand[0] if cand else None

        nl, nr = next_face(el), next_face(er)
        if (nl is None) == (nr is None):
            raise NoRiver("region is not a dual path")
        if nl is not None:
            walk_right.append(w)
            gate = (l, w)
            t = nl
        else:
            walk_left.append(w)
            gate = (w, r)
            t = nr
        strip.append(t)
        used.add(t)
    if len(used) != len(region):
        raise NoRiver("strip does not cover the region")
    if walk_left != left or walk_right != right:
        raise NoRiver("bank reconstruction mismatch")
    if gate != (b1, a1) and gate != (a1, b1):
        raise NoRiver("strip exits with inconsistent orientation")
    return strip


def _classify_sides(
    ctx: DiskContext, region: set[int], left: list[int], right: list[int]
) -> tuple[set[int], set[int]]:
    """Faces left / right of the strip, found by flooding across each bank."""
    side1: set[int] = set()
    side2: set[int] = set()
    assigned: set[int] = set(region)
    for which, bank in ((0, left), (1, right)):
        for x, y in zip(bank, bank[1:]):
            for f in ctx.edge_faces.get(edge_key(x, y), []):
                if f in assigned or f in region:
                    continue
                comp = _dual_component(ctx, f, assigned)
                assigned |= comp
                (side1 if which == 0 else side2).update(comp)
    leftover = ctx.faces - assigned
    if leftover:
        raise NoRiver(f"faces {sorted(leftover)[:4]}... not reachable from a bank")
    return side1, side2


def _dual_component(ctx: DiskContext, start: int, blocked_faces: set[int]) -> set[int]:
    comp = {start}
    stack = [start]
    while stack:
        f = stack.pop()
        vs = ctx.face_verts(f)
        for i in range(3):
            for g2 in ctx.edge_faces.get(edge_key(vs[i], vs[(i + 1) % 3]), []):
                if g2 != f and g2 not in comp and g2 not in blocked_faces:
                    comp.add(g2)
                    stack.append(g2)
    return comp


def find_river(g: PlaneGraph, e1: Edge, e2: Edge) -> RiverPartition:
    """Lemma-3 partition of the internal faces between two outer edges."""
    ctx = DiskContext.whole(g)
    return find_river_in(ctx, e1, e2)


def find_river_in(ctx: DiskContext, e1: Edge, e2: Edge) -> RiverPartition:
    strip, left, right = _find_river_core(ctx, e1, e2)
    region = set(strip)
    side1, side2 = _classify_sides(ctx, region, left, right)
    a0, b0 = _orient_along(ctx.boundary, ctx.bpos, e1)
    a1, b1 = _orient_along(ctx.boundary, ctx.bpos, e2)
    return RiverPartition(
        river=region,
        side1=side1,
        side2=side2,
        e1=(a0, b0),
        e2=(a1, b1),
        left_bank=left,
        right_bank=right,
        strip=list(strip),
    )


# ---------------------------------------------------------------------------
# Absorption: chords and flattened side regions
# ---------------------------------------------------------------------------


def side_sets_for(
    outer_cycle: list[int], corner_vertices: list[int]
) -> dict[int, set[int]]:
    """Map each boundary vertex to the side indices whose closed path holds it."""
    pos = {v: i for i, v in enumerate(outer_cycle)}
    nb = len(outer_cycle)
    k = len(corner_vertices)
    out: dict[int, set[int]] = {v: set() for v in outer_cycle}
    for i in range(k):
        s, t = pos[corner_vertices[i]], pos[corner_vertices[(i + 1) % k]]
        j = s
        out[outer_cycle[j]].add(i)
        while j != t:
            j = (j + 1) % nb
            out[outer_cycle[j]].add(i)
    return out


def _boundary_arc_of_component(ctx: DiskContext, comp: set[int]) -> list[int]:
    """The contiguous boundary path whose edges border `comp`."""
    nb = len(ctx.boundary)
    idxs = []
    for i in range(nb):
        e = edge_key(ctx.boundary[i], ctx.boundary[(i + 1) % nb])
        fs = ctx.edge_faces.get(e, [])
        if len(fs) == 1 and fs[0] in comp:
            idxs.append(i)
    if not idxs:
        raise NoRiver("outside component shares no edge with the boundary")
    idx_set = set(idxs)
    # find the start of the (cyclically) contiguous run
    starts = [i for i in idxs if (i - 1) % nb not in idx_set]
    if len(starts) != 1:
        raise NoRiver("component boundary contact is not a single arc")
    s = starts[0]
    arc = [ctx.boundary[s]]
    i = s
    while i in idx_set:
        arc.append(ctx.boundary[(i + 1) % nb])
        i = (i + 1) % nb
    return arc


def _walk_chords(ctx, walk: list[int], river: set[int]) -> list[tuple[int, int]]:
    posw = {v: i for i, v in enumerate(walk)}
    found = []
    for i, v in enumerate(walk):
        for u in ctx.graph.neighbors(v):
            j = posw.get(u)
            if j is None or j <= i + 1:
                continue
            fs = ctx.edge_faces.get(edge_key(u, v), [])
            if fs and all(f not in river for f in fs):
                found.append((i, j))
    # keep only outermost chords (the family is laminar: chords of one walk
    # are drawn on the same side and cannot cross)
    found.sort(key=lambda ij: (ij[0], -ij[1]))
    kept: list[tuple[int, int]] = []
    for (i, j) in found:
        if any(i0 <= i and j <= j0 for (i0, j0) in kept):
            continue
        kept.append((i, j))
    return kept


def _absorb_core(
    ctx: DiskContext,
    rp: RiverPartition,
    side_sets: dict[int, set[int]],
) -> tuple[RiverPartition, list[Pocket]]:
    river = set(rp.river)
    walks = [list(rp.left_bank), list(rp.right_bank)]
    pockets: list[Pocket] = []
    e1k, e2k = edge_key(*rp.e1), edge_key(*rp.e2)

    guard = len(ctx.faces) + 16
    while True:
        guard -= 1
        if guard < 0:
            raise NoRiver("absorption failed to terminate")
        changed = False

        blocked = {e1k, e2k}
        for wlk in walks:
            for x, y in zip(wlk, wlk[1:]):
                blocked.add(edge_key(x, y))

        # chords of either bank walk
        for wi in (0, 1):
            wlk = walks[wi]
            kept = _walk_chords(ctx, wlk, river)
            if not kept:
                continue
            i, j = kept[0]
            x, y = wlk[i], wlk[j]
            chord = edge_key(x, y)
            # flood the pocket from the outside face behind the walk edge at x
            fs = ctx.edge_faces.get(edge_key(wlk[i], wlk[i + 1]), [])
            outside = [f for f in fs if f not in river]
            if len(outside) != 1:
                raise NoRiver("chord spans a boundary contact run")
            pocket = _region_flood(ctx, outside[0], blocked | {chord})
            if pocket & river:
                raise NoRiver("chord pocket leaked into the river")
            river |= pocket
            pockets.append(Pocket("chord", [x, y], set(pocket)))
            walks[wi] = wlk[: i + 1] + wlk[j:]
            changed = True
            break
        if changed:
            continue

        # flattened side regions
        outside_faces = ctx.faces - river
        seen: set[int] = set()
        for fid in sorted(outside_faces):
            if fid in seen:
                continue
            comp = _dual_component(ctx, fid, river)
            seen |= comp
            arc = _boundary_arc_of_component(ctx, comp)
            common = set.intersection(*(side_sets[v] for v in arc))
            if not common:
                continue
            # region between the bank and one polygon side: flatten into river
            u, w = arc[0], arc[-1]
            wi = 0 if (u in set(walks[0]) and w in set(walks[0])) else 1
            wlk = walks[wi]
            if u not in set(wlk) or w not in set(wlk):
                raise NoRiver("flat component contacts are not on one bank")
            pu, pw = wlk.index(u), wlk.index(w)
            lo, hi = min(pu, pw), max(pu, pw)
            path = arc if arc[0] == wlk[lo] else arc[::-1]
            walks[wi] = wlk[:lo] + path + wlk[hi + 1 :]
            river |= comp
            pockets.append(Pocket("flat", list(arc), set(comp)))
            changed = True
            break
        if not changed:
            break

    side1 = rp.side1 - river
    side2 = rp.side2 - river
    out = RiverPartition(
        river=river,
        side1=side1,
        side2=side2,
        e1=rp.e1,
        e2=rp.e2,
        left_bank=walks[0],
        right_bank=walks[1],
        strip=list(rp.strip),
    )
    return out, pockets


def absorb_chords_and_sides(
    g: PlaneGraph, rp: RiverPartition, p: ConvexPolygon, f: CornerMap
) -> RiverPartition:
    """Grow the river over bank-chord pockets and flattened side regions."""
    ctx = DiskContext.whole(g)
    sides = side_sets_for(g.outer_cycle, f.corner_vertices)
    out, _ = _absorb_core(ctx, rp, sides)
    return out


def derive_pockets(ctx: DiskContext, rp: RiverPartition) -> list[Pocket]:
    """Recover the pocket decomposition of an absorbed partition.

    Pockets are the edge-connected components of river minus strip; a pocket
    with boundary-arc contact is a flattened side region (anchor = the arc),
    otherwise it hangs behind a chord of a bank walk (anchor = the walk edge
    whose far face is in the pocket).
    """
    rest = set(rp.river) - set(rp.strip)
    pockets: list[Pocket] = []
    seen: set[int] = set()
    walk_pairs = []
    for wlk in rp.banks:
        walk_pairs.extend(zip(wlk, wlk[1:]))
    for fid in sorted(rest):
        if fid in seen:
            continue
        comp = _dual_component(ctx, fid, ctx.faces - rest)
        seen |= comp
        try:
            arc = _boundary_arc_of_component(ctx, comp)
            pockets.append(Pocket("flat", list(arc), set(comp)))
            continue
        except NoRiver:
            pass
        anchor = None
        for (x, y) in walk_pairs:
            fs = ctx.edge_faces.get(edge_key(x, y), [])
            if any(f in comp for f in fs):
                anchor = [x, y]
                break
        if anchor is None:
            raise NoRiver("pocket shares no edge with a bank walk")
        pockets.append(Pocket("chord", anchor, set(comp)))
    return pockets


# ---------------------------------------------------------------------------
# Independent checker
# ---------------------------------------------------------------------------


@dataclass
class RiverReport:
    ok: bool
    violations: list[str]

    def __bool__(self):
        return self.ok


def check_river(g: PlaneGraph, rp: RiverPartition) -> RiverReport:
    ctx = DiskContext.whole(g)
    return check_river_in(ctx, rp)


def check_river_in(ctx: DiskContext, rp: RiverPartition) -> RiverReport:
    """Verify every river-partition invariant from scratch."""
    v: list[str] = []
    allf = set(ctx.faces)
    parts = [set(rp.river), set(rp.side1), set(rp.side2)]
    if parts[0] | parts[1] | parts[2] != allf:
        v.append("partition does not cover all internal faces")
    if parts[0] & parts[1] or parts[0] & parts[2] or parts[1] & parts[2]:
        v.append("partition sets overlap")

    try:
        f1 = ctx.inner_face_of(*rp.e1)
        f2 = ctx.inner_face_of(*rp.e2)
        if f1 not in rp.river or f2 not in rp.river:
            v.append("river misses a face incident to e1/e2")
    except NoRiver as exc:
        v.append(str(exc))

    # property 2: edge-connected
    if rp.river:
        start = min(rp.river)
        comp = _dual_component(ctx, start, allf - set(rp.river))
        if comp != set(rp.river):
            v.append("river is not edge-connected")

    # banks: simple, disjoint, along edges, bounding the river
    lb, rb = rp.left_bank, rp.right_bank
    if len(set(lb)) != len(lb) or len(set(rb)) != len(rb):
        v.append("a bank repeats a vertex")
    if set(lb) & set(rb):
        v.append("banks share a vertex")
    for bank in (lb, rb):
        for x, y in zip(bank, bank[1:]):
            if not ctx.graph.has_edge(x, y):
                v.append(f"bank step {(x, y)} is not an edge")
    river_boundary = set()
    for fid in rp.river:
        vs = ctx.face_verts(fid)
        for i in range(3):
            e = edge_key(vs[i], vs[(i + 1) % 3])
            others = [f for f in ctx.edge_faces[e] if f != fid]
            if not any(o in rp.river for o in others):
                river_boundary.add(e)
    walk_edges = {edge_key(*rp.e1), edge_key(*rp.e2)}
    for bank in (lb, rb):
        for x, y in zip(bank, bank[1:]):
            walk_edges.add(edge_key(x, y))
    if river_boundary != walk_edges:
        v.append("banks do not bound the river region")

    # property 1: no vertex strictly interior to the river
    bank_set = set(lb) | set(rb)
    bset = set(ctx.boundary)
    for vert, fs in ctx.vertex_faces.items():
        if vert in bank_set or vert in bset:
            continue
        if all(f in rp.river for f in fs):
            v.append(f"vertex {vert} is strictly inside the river")
            break

    # property 3: F1 and F2 vertex-connected
    for name, side in (("F1", rp.side1), ("F2", rp.side2)):
        if not side:
            continue
        verts = {w for fid in side for w in ctx.face_verts(fid)}
        adj = {w: set() for w in verts}
        for fid in side:
            vs = ctx.face_verts(fid)
            for i in range(3):
                a, b2 = vs[i], vs[(i + 1) % 3]
                adj[a].add(b2)
                adj[b2].add(a)
        start = min(verts)
        seen = {start}
        stack = [start]
        while stack:
            w = stack.pop()
            for u in adj[w]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if seen != verts:
            v.append(f"{name} is not vertex-connected")

    # property 4: every edge-connected piece of F1/F2 meets the outer face
    bedges = set(ctx.boundary_edges())
    for name, side in (("F1", rp.side1), ("F2", rp.side2)):
        rest = set(side)
        while rest:
            comp = _dual_component(ctx, min(rest), allf - rest)
            rest -= comp
            shares = False
            for fid in comp:
                vs = ctx.face_verts(fid)
                for i in range(3):
                    if edge_key(vs[i], vs[(i + 1) % 3]) in bedges:
                        shares = True
            if not shares:
                v.append(f"an edge-component of {name} misses the outer face")

    # strip: ordered dual path covering the pre-absorption river
    if rp.strip:
        if len(set(rp.strip)) != len(rp.strip):
            v.append("strip repeats a face")
        for s, t in zip(rp.strip, rp.strip[1:]):
            sv, tv = set(ctx.face_verts(s)), set(ctx.face_verts(t))
            if len(sv & tv) != 2:
                v.append("consecutive strip faces do not share an edge")
                break

    return RiverReport(ok=not v, violations=v)
