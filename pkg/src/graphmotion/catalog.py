"""Small named graphs used by the test suite, the CLI and the examples.

Each tree comes with a univalent root suitable for the planner.
"""

from __future__ import annotations

import itertools

from .graph import Edge, Graph


def _graph(pairs, lengths=None) -> Graph:
    lengths = lengths or {}
    verts = sorted({w for p in pairs for w in p})
    edges = [Edge(f"{u}{v}", u, v, lengths.get((u, v), 1)) for u, v in pairs]
    return Graph(verts, edges)


def star(k: int) -> Graph:
    """Hub ``c`` with leaves ``l0 .. l{k-1}``; root at ``l0``."""
    return _graph([("c", f"l{i}") for i in range(k)])


def y_tree() -> Graph:
    """Hub ``c`` with leaves ``a``, ``b`` and root ``r``."""
    return _graph([("c", "a"), ("c", "b"), ("c", "r")])


def h_tree() -> Graph:
    """Leaves ``a``, ``b`` on ``v1``; leaves ``c``, ``d`` on ``v2``; edge ``v1``-``v2``."""
    return _graph([("v1", "a"), ("v1", "b"), ("v1", "v2"), ("v2", "c"), ("v2", "d")])


def caterpillar() -> Graph:
    """Spine ``s1 - s2 - s3``; leaves a, b on s1, c1, c2 on s2, d, e on s3 (degrees 3, 4, 3)."""
    return _graph(
        [("s1", "a"), ("s1", "b"), ("s1", "s2"), ("s2", "c1"), ("s2", "c2"), ("s2", "s3"), ("s3", "d"), ("s3", "e")]
    )


def interval() -> Graph:
    return _graph([("p", "q")])


def path(k: int) -> Graph:
    return _graph([(f"p{i}", f"p{i + 1}") for i in range(k)])


def cycle(k: int = 3) -> Graph:
    return _graph([(f"x{i}", f"x{(i + 1) % k}") for i in range(k)])


def figure_eight() -> Graph:
    """Two triangles sharing the vertex ``o``."""
    return _graph([("o", "a1"), ("a1", "a2"), ("a2", "o"), ("o", "b1"), ("b1", "b2"), ("b2", "o")])


def complete(k: int) -> Graph:
    return _graph([(f"k{i}", f"k{j}") for i, j in itertools.combinations(range(k), 2)])


def complete_bipartite(p: int, q: int) -> Graph:
    return _graph([(f"a{i}", f"b{j}") for i in range(p) for j in range(q)])


#: name -> (graph factory, root) for the trees every cross-check runs on
TREE_SUITE = {
    "Y": (y_tree, "r"),
    "H": (h_tree, "a"),
    "star4": (lambda: star(4), "l0"),
    "star5": (lambda: star(5), "l0"),
    "caterpillar": (caterpillar, "a"),
}
