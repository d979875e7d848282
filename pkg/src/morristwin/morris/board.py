"""Nine Men's Morris board topology: points, mill lines, adjacency.

Points are named like algebraic chess squares (file a-g, rank 1-7); only
the 24 intersections of the three concentric squares exist. The canonical
point order below is also the fixed order of the board string used by the
state notation.
"""

POINTS = (
    "a1", "d1", "g1",
    "b2", "d2", "f2",
    "c3", "d3", "e3",
    "a4", "b4", "c4", "e4", "f4", "g4",
    "c5", "d5", "e5",
    "b6", "d6", "f6",
    "a7", "d7", "g7",
)

POINT_INDEX = {p: i for i, p in enumerate(POINTS)}

# Each triple is geometrically ordered (middle point in the middle), so
# consecutive pairs are exactly the board's edges.
MILL_LINES_NAMED = (
    # horizontals, bottom to top
    ("a1", "d1", "g1"),
    ("b2", "d2", "f2"),
    ("c3", "d3", "e3"),
    ("a4", "b4", "c4"),
    ("e4", "f4", "g4"),
    ("c5", "d5", "e5"),
    ("b6", "d6", "f6"),
    ("a7", "d7", "g7"),
    # verticals, left to right
    ("a1", "a4", "a7"),
    ("b2", "b4", "b6"),
    ("c3", "c4", "c5"),
    ("d1", "d2", "d3"),
    ("d5", "d6", "d7"),
    ("e3", "e4", "e5"),
    ("f2", "f4", "f6"),
    ("g1", "g4", "g7"),
)

MILL_LINES = tuple(
    tuple(POINT_INDEX[p] for p in line) for line in MILL_LINES_NAMED
)

# lines through each point, as index triples
LINES_OF_POINT = tuple(
    tuple(line for line in MILL_LINES if i in line) for i in range(24)
)


def _build_adjacency():
    neighbors = [set() for _ in range(24)]
    for a, b, c in MILL_LINES:
        neighbors[a].add(b)
        neighbors[b].add(a)
        neighbors[b].add(c)
        neighbors[c].add(b)
    return tuple(tuple(sorted(n)) for n in neighbors)


ADJACENT = _build_adjacency()


def is_point(name) -> bool:
    return name in POINT_INDEX
