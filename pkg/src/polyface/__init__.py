"""polyface: straight-line drawings of plane triangulations in a prescribed
convex polygon, with polynomially bounded resolution."""

from .geom import (
    AlphaCut,
    ConvexPolygon,
    Drawing,
    Point,
    SqrtVal,
    alpha_cut,
    drawing_diameter,
    drawing_resolution,
    move_vertex_along_edge,
    potential_resolution,
    potential_resolution_bruteforce,
    pt,
)
from .embed import (
    CornerMap,
    PlaneGraph,
    Problem,
    build_plane_graph,
    chords_of_path,
    triangulate_interior,
    validate_problem,
)

__all__ = [
    "AlphaCut",
    "ConvexPolygon",
    "CornerMap",
    "Drawing",
    "PlaneGraph",
    "Point",
    "Problem",
    "SqrtVal",
    "alpha_cut",
    "build_plane_graph",
    "chords_of_path",
    "drawing_diameter",
    "drawing_resolution",
    "move_vertex_along_edge",
    "potential_resolution",
    "potential_resolution_bruteforce",
    "pt",
    "triangulate_interior",
    "validate_problem",
]
