"""Plane graphs as rotation systems, with face tracing and problem validation.

A plane graph is stored as a counterclockwise rotation system: for every
vertex, the cyclic order of its neighbors as they appear in the embedding.
Faces are derived by orbit tracing.  Every internal face must be a triangle;
the outer boundary must be a simple cycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .geom import ConvexPolygon, potential_resolution, SqrtVal


class EmbeddingError(Exception):
    pass


class NonTriangulated(EmbeddingError):
    pass


class InvalidEmbedding(EmbeddingError):
    pass


class OuterFaceMismatch(EmbeddingError):
    pass


class PathNotInGraph(EmbeddingError):
    pass


Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


# ---------------------------------------------------------------------------
# PlaneGraph
# ---------------------------------------------------------------------------


@dataclass
class PlaneGraph:
    """Combinatorial embedding with traced faces.

    Attributes:
        n: number of vertices (ids 0..n-1).
        rotation: per-vertex counterclockwise neighbor order.
        faces: list of vertex cycles; internal faces are counterclockwise
            triangles, the outer face is traced clockwise.
        outer_face_id: index into `faces`.
        outer_cycle: the outer boundary B in counterclockwise order.
    """

    n: int
    rotation: list[list[int]]
    faces: list[tuple[int, ...]]
    outer_face_id: int
    outer_cycle: list[int]
    _edge_faces: dict[Edge, list[int]] = field(repr=False, default_factory=dict)

    # -- construction -------------------------------------------------------

    @staticmethod
    def from_rotations(n: int, rotations, outer_face) -> "PlaneGraph":
        return build_plane_graph(n, rotations, outer_face)

    @staticmethod
    def from_faces(n: int, internal_faces, outer_face) -> "PlaneGraph":
        """Build from a list of counterclockwise internal face cycles."""
        succ: dict[tuple[int, int], int] = {}
        for f in internal_faces:
            m = len(f)
            for i in range(m):
                u, v, w = f[i], f[(i + 1) % m], f[(i + 2) % m]
                if (u, v) in succ:
                    raise InvalidEmbedding(f"directed edge {(u, v)} used twice")
                succ[(u, v)] = w
        m = len(outer_face)
        for i in range(m):
            # outer face seen clockwise from inside: reverse orientation
            u, v, w = outer_face[(i + 2) % m], outer_face[(i + 1) % m], outer_face[i]
            if (u, v) in succ:
                raise InvalidEmbedding(f"directed edge {(u, v)} used twice")
            succ[(u, v)] = w
        # Around v, face-successor chains: in face (u, v, w), the edge (v, u)
        # is followed counterclockwise at v by (v, w') from the next face.
        rotations: list[list[int]] = []
        nbrs: dict[int, set[int]] = {v: set() for v in range(n)}
        for (u, v) in succ:
            nbrs[u].add(v)
        for v in range(n):
            if not nbrs[v]:
                rotations.append([])
                continue
            order = [min(nbrs[v])]
            while len(order) < len(nbrs[v]):
                u = order[-1]
                w = succ.get((u, v))
                if w is None or w in order:
                    raise InvalidEmbedding(f"rotation around {v} does not close")
                order.append(w)
            # `order` lists neighbors clockwise (prev-edge chaining); flip.
            rotations.append(list(reversed(order)))
        return build_plane_graph(n, rotations, outer_face)

    # -- queries ------------------------------------------------------------

    def edges(self) -> list[Edge]:
        out = set()
        for v in range(self.n):
            for u in self.rotation[v]:
                out.add(edge_key(u, v))
        return sorted(out)

    def edge_count(self) -> int:
        return sum(len(r) for r in self.rotation) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._nbr_sets[u]

    def neighbors(self, v: int) -> list[int]:
        return self.rotation[v]

    def internal_faces(self) -> list[int]:
        return [i for i in range(len(self.faces)) if i != self.outer_face_id]

    def faces_of_edge(self, u: int, v: int) -> list[int]:
        return self._edge_faces[edge_key(u, v)]

    def internal_face_of_outer_edge(self, u: int, v: int) -> int:
        pair = self.faces_of_edge(u, v)
        ids = [f for f in pair if f != self.outer_face_id]
        if len(ids) != 1:
            raise EmbeddingError(f"edge {(u, v)} is not on the outer boundary")
        return ids[0]

    def faces_at_vertex(self, v: int) -> list[int]:
        return self._vertex_faces[v]

    def is_outer_vertex(self, v: int) -> bool:
        return v in self._outer_set

    def __post_init__(self):
        self._nbr_sets = [set(r) for r in self.rotation]
        self._outer_set = set(self.outer_cycle)
        vf: list[list[int]] = [[] for _ in range(self.n)]
        for fid, f in enumerate(self.faces):
            for v in set(f):
                vf[v].append(fid)
        self._vertex_faces = vf


def _trace_faces(n: int, rotation: list[list[int]]) -> list[tuple[int, ...]]:
    """Orbit-trace all faces of the rotation system.

    Uses the convention: the face to the left of directed edge (u, v) is
    continued by (v, w) where w precedes u in the counterclockwise rotation
    at v.  With ccw rotations, internal faces come out counterclockwise.
    """
    index_of = [
        {u: i for i, u in enumerate(rotation[v])} for v in range(n)
    ]
    seen: set[tuple[int, int]] = set()
    faces: list[tuple[int, ...]] = []
    for v0 in range(n):
        for u0 in rotation[v0]:
            if (v0, u0) in seen:
                continue
            cycle = []
            u, v = v0, u0
            while (u, v) not in seen:
                seen.add((u, v))
                cycle.append(u)
                idx = index_of[v].get(u)
                if idx is None:
                    raise InvalidEmbedding(f"edge {(u, v)} missing from rotation at {v}")
                w = rotation[v][idx - 1]
                u, v = v, w
                if len(cycle) > 2 * sum(len(r) for r in rotation):
                    raise InvalidEmbedding("face tracing does not terminate")
            faces.append(tuple(cycle))
    return faces


def _cycles_equal_directed(a, b) -> bool:
    """Cyclic sequences equal up to rotation (direction-sensitive)."""
    if len(a) != len(b):
        return False
    n = len(a)
    doubled = list(a) + list(a)
    bl = list(b)
    return any(doubled[i : i + n] == bl for i in range(n))


def _cycles_equal(a, b) -> bool:
    """Cyclic sequences equal up to rotation and direction."""
    return _cycles_equal_directed(a, b) or _cycles_equal_directed(a, list(b)[::-1])


def build_plane_graph(n: int, rotations, outer_face) -> PlaneGraph:
    """Validate a rotation system and trace its faces.

    Raises InvalidEmbedding (bad rotation / Euler failure), NonTriangulated
    (an internal face that is not a triangle), or OuterFaceMismatch (the
    given outer cycle is not a traced face).
    """
    rotation = [list(r) for r in rotations]
    if len(rotation) != n:
        raise InvalidEmbedding("rotation list length != n")
    darts: set[tuple[int, int]] = set()
    for v, rot in enumerate(rotation):
        if len(set(rot)) != len(rot):
            raise InvalidEmbedding(f"repeated neighbor in rotation of {v} (multi-edge?)")
        for u in rot:
            if u == v:
                raise InvalidEmbedding(f"self-loop at {v}")
            if not (0 <= u < n):
                raise InvalidEmbedding(f"neighbor {u} out of range")
            darts.add((v, u))
    for (v, u) in darts:
        if (u, v) not in darts:
            raise InvalidEmbedding(f"edge {(v, u)} present in only one rotation")

    faces = _trace_faces(n, rotation)
    m = len(darts) // 2
    if n - m + len(faces) != 2:
        raise InvalidEmbedding(
            f"Euler check failed: V-E+F = {n}-{m}+{len(faces)} != 2"
        )

    # The outer orbit is traced clockwise under the left-face rule, so a
    # counterclockwise-given boundary must match a traced face reversed.
    # Direction-sensitive matching keeps the global orientation right even
    # when both orientations of a cycle appear as faces (a bare triangle).
    outer = list(outer_face)
    outer_id = None
    for i, f in enumerate(faces):
        if _cycles_equal_directed(f, outer[::-1]):
            outer_id = i
            break
    if outer_id is None:
        for i, f in enumerate(faces):
            if _cycles_equal_directed(f, outer):
                outer_id = i
                break
    if outer_id is None:
        raise OuterFaceMismatch("given outer cycle is not a traced face")
    if len(set(outer)) != len(outer):
        raise InvalidEmbedding("outer boundary repeats a vertex")
    for i, f in enumerate(faces):
        if i != outer_id and len(f) != 3:
            raise NonTriangulated(f"internal face {f} has {len(f)} sides")

    # Store the outer cycle counterclockwise: the traced outer orbit runs
    # clockwise, so flip the traced one.
    traced_outer = list(faces[outer_id])
    outer_ccw = traced_outer[::-1]

    edge_faces: dict[Edge, list[int]] = {}
    for fid, f in enumerate(faces):
        k = len(f)
        for i in range(k):
            edge_faces.setdefault(edge_key(f[i], f[(i + 1) % k]), []).append(fid)
    for e, fs in edge_faces.items():
        if len(fs) != 2:
            raise InvalidEmbedding(f"edge {e} borders {len(fs)} faces")

    return PlaneGraph(
        n=n,
        rotation=rotation,
        faces=faces,
        outer_face_id=outer_id,
        outer_cycle=outer_ccw,
        _edge_faces=edge_faces,
    )


# ---------------------------------------------------------------------------
# Corner maps and problems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CornerMap:
    """Ordered (vertex on B, corner index) assignments, one per corner."""

    assignments: tuple[tuple[int, int], ...]

    def vertex_of_corner(self, c: int) -> int:
        for v, ci in self.assignments:
            if ci == c:
                return v
        raise KeyError(c)

    def corner_of_vertex(self, v: int) -> int | None:
        for u, ci in self.assignments:
            if u == v:
                return ci
        return None

    @property
    def corner_vertices(self) -> list[int]:
        return [v for v, _ in sorted(self.assignments, key=lambda a: a[1])]


@dataclass
class Problem:
    """A (plane graph, corner map, polygon) instance.

    size is the number of internal faces; resolution is the potential
    resolution of the polygon (always computed, never stored).
    """

    graph: PlaneGraph
    corners: CornerMap
    polygon: ConvexPolygon

    def __post_init__(self):
        k = self.polygon.k
        idxs = sorted(c for _, c in self.corners.assignments)
        if idxs != list(range(k)):
            raise EmbeddingError("corner map must hit every corner exactly once")
        verts = [v for v, _ in self.corners.assignments]
        if len(set(verts)) != len(verts):
            raise EmbeddingError("corner map repeats a vertex")
        outer = set(self.graph.outer_cycle)
        for v in verts:
            if v not in outer:
                raise EmbeddingError(f"corner vertex {v} is not on the outer boundary")
        # Cyclic order along B must match corner order along P.
        b = self.graph.outer_cycle
        pos = {v: i for i, v in enumerate(b)}
        ordered = self.corners.corner_vertices
        offs = sorted(range(k), key=lambda j: pos[ordered[j]])
        start = offs[0]
        expect = [(start + t) % k for t in range(k)]
        if offs != expect:
            raise EmbeddingError("corner vertices are not in polygon order along B")

    @property
    def size(self) -> int:
        return len(self.graph.internal_faces())

    @property
    def resolution(self) -> SqrtVal:
        return potential_resolution(self.polygon)

    def side_paths(self) -> list[list[int]]:
        """Vertex path of B assigned to each polygon side, endpoints included.

        Side i runs from the vertex pinned to corner i to the vertex pinned
        to corner i+1, following B counterclockwise.
        """
        b = self.graph.outer_cycle
        pos = {v: i for i, v in enumerate(b)}
        k = self.polygon.k
        cv = self.corners.corner_vertices
        out = []
        nb = len(b)
        for i in range(k):
            s, t = pos[cv[i]], pos[cv[(i + 1) % k]]
            path = [b[s]]
            j = s
            while j != t:
                j = (j + 1) % nb
                path.append(b[j])
            out.append(path)
        return out

    def side_of_vertex(self) -> dict[int, list[int]]:
        """Map from boundary vertex to the side indices whose closed path
        contains it (corners belong to two sides)."""
        out: dict[int, list[int]] = {}
        for i, path in enumerate(self.side_paths()):
            for v in path:
                out.setdefault(v, []).append(i)
        return out


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    chord: Edge | None = None
    side: int | None = None

    def __bool__(self):
        return self.valid


def chords_of_path(g: PlaneGraph, path: list[int]) -> list[Edge]:
    """Edges of g joining two non-consecutive vertices of `path`.

    The path edges themselves must exist in g; results are reported in order
    of occurrence along the path.
    """
    for a, b in zip(path, path[1:]):
        if not g.has_edge(a, b):
            raise PathNotInGraph(f"path edge {(a, b)} missing")
    pos = {v: i for i, v in enumerate(path)}
    found = []
    for i, v in enumerate(path):
        for u in g.neighbors(v):
            j = pos.get(u)
            if j is not None and j > i + 1:
                found.append((i, j))
    found.sort()
    return [(path[i], path[j]) for i, j in found]


def validate_problem(p: Problem) -> ValidityReport:
    """A problem is invalid iff some closed side-path of B carries a chord.

    Vertices forced onto one side of P (including the side's two pinned
    corners) may only be joined by the consecutive path edges; any other
    edge would be drawn along the side and overlap path vertices.
    """
    for i, path in enumerate(p.side_paths()):
        ch = chords_of_path(p.graph, path)
        if ch:
            return ValidityReport(False, chord=ch[0], side=i)
    return ValidityReport(True)


# ---------------------------------------------------------------------------
# Optional preprocessing: fan-triangulate non-triangular internal faces
# ---------------------------------------------------------------------------


def triangulate_interior(
    n: int, rotations, outer_face
) -> tuple[PlaneGraph, list[Edge]]:
    """Fan-triangulate internal faces of >3 sides and record added edges.

    The added diagonals are reported so callers (the CLI) can strip them
    from output drawings.
    """
    rotation = [list(r) for r in rotations]
    all_faces = _trace_faces(n, rotation)
    outer = list(outer_face)
    internal: list[tuple[int, ...]] = []
    outer_traced = None
    for f in all_faces:
        if outer_traced is None and _cycles_equal(f, outer):
            outer_traced = f
        else:
            internal.append(f)
    if outer_traced is None:
        raise OuterFaceMismatch("given outer cycle is not a traced face")

    edge_set = set()
    for f in all_faces:
        m = len(f)
        for i in range(m):
            edge_set.add(edge_key(f[i], f[(i + 1) % m]))

    added: list[Edge] = []
    result: list[tuple[int, ...]] = []
    for f in internal:
        m = len(f)
        if m == 3:
            result.append(f)
            continue
        apex = None
        for i in range(m):
            diags = [edge_key(f[i], f[(i + t) % m]) for t in range(2, m - 1)]
            if all(d not in edge_set for d in diags):
                apex = i
                break
        if apex is None:
            raise NonTriangulated(
                f"face {f} cannot be fan-triangulated without multi-edges"
            )
        ring = [f[(apex + t) % m] for t in range(m)]
        a = ring[0]
        for t in range(1, m - 1):
            result.append((a, ring[t], ring[t + 1]))
        for t in range(2, m - 1):
            e = edge_key(a, ring[t])
            added.append(e)
            edge_set.add(e)
    # the traced outer orbit is clockwise; from_faces expects the ccw cycle
    return PlaneGraph.from_faces(n, result, outer_traced[::-1]), added


# ---------------------------------------------------------------------------
# JSON schema (CLI interop)
# ---------------------------------------------------------------------------


def graph_to_json(p: Problem) -> dict:
    return {
        "n": p.graph.n,
        "rotations": [list(r) for r in p.graph.rotation],
        "outer_face": list(p.graph.outer_cycle),
        "corner_map": [[v, c] for v, c in p.corners.assignments],
    }


def graph_from_json(obj: dict, polygon: ConvexPolygon) -> Problem:
    g = build_plane_graph(obj["n"], obj["rotations"], obj["outer_face"])
    cm = CornerMap(tuple((int(v), int(c)) for v, c in obj["corner_map"]))
    return Problem(graph=g, corners=cm, polygon=polygon)
