"""Discretized configuration complexes of graphs.

Cells of the complex are n-tuples of closed cells (vertices or edges) of a
subdivided graph whose closures are pairwise disjoint; the dimension of a
cell is the number of edges in it. With every edge subdivided into at least
``n + 1`` pieces the complex is homotopy equivalent to the configuration
space of ``n`` points on the graph, which makes it an independent way to
count components and circles.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from networkx.utils import UnionFind

from .errors import NotConnected, SubdivisionTooCoarse
from .graph import Graph, subdivide

Cell = tuple[int, ...]


@dataclass(frozen=True)
class Piece:
    kind: str  # "v" or "e"
    id: str
    closure: frozenset[str]


@dataclass(frozen=True)
class DiscreteConfigComplex:
    graph: Graph
    n: int
    ordered: bool
    subdivision: int
    pieces: tuple[Piece, ...]
    cells: dict[int, tuple[Cell, ...]]

    def counts(self) -> list[int]:
        top = max(self.cells) if self.cells else -1
        return [len(self.cells.get(d, ())) for d in range(top + 1)]

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(cs) for d, cs in self.cells.items())

    def describe(self, cell: Cell) -> tuple[str, ...]:
        return tuple(("" if self.pieces[i].kind == "v" else "~") + self.pieces[i].id for i in cell)

    @cached_property
    def _vertex_piece(self) -> dict[str, int]:
        return {p.id: i for i, p in enumerate(self.pieces) if p.kind == "v"}

    def faces(self, cell: Cell) -> list[Cell]:
        """Codimension-one faces: one edge constituent replaced by an endpoint."""
        out = []
        for k, i in enumerate(cell):
            piece = self.pieces[i]
            if piece.kind != "e":
                continue
            for w in sorted(piece.closure):
                face = list(cell)
                face[k] = self._vertex_piece[w]
                out.append(self._canonical(face))
        return out

    def _canonical(self, cell) -> Cell:
        return tuple(cell) if self.ordered else tuple(sorted(cell))


def build_complex(g: Graph, n: int, subdivision: int | None = None, ordered: bool = True) -> DiscreteConfigComplex:
    """Enumerate the discretized configuration complex of ``n`` points on ``g``.

    ``subdivision`` defaults to ``n + 1`` pieces per edge, the coarsest
    allowed.
    """
    if n < 1:
        raise ValueError("need at least one agent")
    if subdivision is None:
        subdivision = n + 1
    if subdivision < n + 1:
        raise SubdivisionTooCoarse(f"subdivision {subdivision} < n + 1 = {n + 1}")
    sub = subdivide(g, subdivision)
    pieces = [Piece("v", v, frozenset([v])) for v in sub.vertices]
    pieces += [Piece("e", e.id, frozenset(e.ends)) for e in sub.edges.values()]
    compatible = [
        frozenset(j for j, q in enumerate(pieces) if not (p.closure & q.closure)) for p in pieces
    ]
    dims = [0 if p.kind == "v" else 1 for p in pieces]
    cells: dict[int, list[Cell]] = {}

    def extend(prefix: list[int], allowed: frozenset[int]) -> None:
        if len(prefix) == n:
            cells.setdefault(sum(dims[i] for i in prefix), []).append(tuple(prefix))
            return
        lo = prefix[-1] + 1 if (prefix and not ordered) else 0
        for j in sorted(allowed):
            if j < lo:
                continue
            prefix.append(j)
            extend(prefix, allowed & compatible[j])
            prefix.pop()

    extend([], frozenset(range(len(pieces))))
    return DiscreteConfigComplex(
        graph=sub,
        n=n,
        ordered=ordered,
        subdivision=subdivision,
        pieces=tuple(pieces),
        cells={d: tuple(cs) for d, cs in sorted(cells.items())},
    )


def component_labels(c: DiscreteConfigComplex) -> dict[Cell, Cell]:
    """Representative 0-cell of the component containing each 0-cell."""
    uf = UnionFind(c.cells.get(0, ()))
    for cell in c.cells.get(1, ()):
        a, b = c.faces(cell)
        uf.union(a, b)
    return {v: uf[v] for v in c.cells.get(0, ())}


def connected_components(c: DiscreteConfigComplex) -> int:
    """Number of path components (those of the 1-skeleton)."""
    return len(set(component_labels(c).values()))


def betti1_via_euler(c: DiscreteConfigComplex) -> int:
    """First Betti number as ``1 - chi``.

    Valid only when the complex is connected and homotopy equivalent to a
    graph: one point on any graph, or two points on a tree.
    """
    if not (c.n == 1 or (c.n == 2 and c.graph.is_tree())):
        raise ValueError("1 - chi gives b1 only for n = 1, or n = 2 on a tree")
    k = connected_components(c)
    if k != 1:
        raise NotConnected(f"complex has {k} components")
    return 1 - c.euler_characteristic


def summary(c: DiscreteConfigComplex) -> dict:
    return {
        "agents": c.n,
        "ordered": c.ordered,
        "subdivision": c.subdivision,
        "cell_counts": c.counts(),
        "euler_characteristic": c.euler_characteristic,
        "components": connected_components(c),
    }

