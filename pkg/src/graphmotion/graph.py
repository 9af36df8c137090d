"""Metric graphs, points on them, configurations and rooted trees.

Positions inside an edge are exact :class:`~fractions.Fraction` values in
``(0, 1)`` measured from the first listed endpoint. Points sitting on an
endpoint are always stored as :class:`Vertex`, so two equal points always
compare equal.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Any, Union

import networkx as nx

from .errors import (
    NotATree,
    ParseError,
    PointNotOnGraph,
    RootNotUnivalent,
    ValidationError,
)

#: Real-valued edge parameters this close to 0 or 1 snap onto the endpoint.
SNAP_TOLERANCE = Fraction(1, 10**12)


def to_fraction(value: Any) -> Fraction:
    """Exact rational from an int, float, Fraction or string like ``"1/3"``.

    Floats are read through their shortest decimal repr, so ``0.1`` becomes
    ``1/10`` rather than the binary expansion.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as a number")


@dataclass(frozen=True, order=True)
class Vertex:
    id: str

    def __str__(self) -> str:
        return self.id


@dataclass(frozen=True, order=True)
class EdgePoint:
    """A point strictly inside an edge."""

    edge: str
    t: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.t, Fraction):
            object.__setattr__(self, "t", to_fraction(self.t))
        if not 0 < self.t < 1:
            raise ValueError(f"edge parameter must lie in (0, 1), got {self.t}")

    def __str__(self) -> str:
        return f"{self.edge}@{self.t}"


GraphPoint = Union[Vertex, EdgePoint]


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "length", to_fraction(self.length))

    @property
    def ends(self) -> tuple[str, str]:
        return (self.u, self.v)

    def other(self, w: str) -> str:
        return self.v if w == self.u else self.u


class Graph:
    """Finite connected simple metric graph."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge]) -> None:
        verts = sorted(set(vertices))
        if not verts:
            raise ValidationError("graph has no vertices")
        vset = set(verts)
        by_id: dict[str, Edge] = {}
        pairs: set[frozenset[str]] = set()
        incident: dict[str, list[str]] = {v: [] for v in verts}
        for e in edges:
            if e.id in by_id:
                raise ValidationError(f"duplicate edge id {e.id!r}")
            for w in e.ends:
                if w not in vset:
                    raise ValidationError(f"edge {e.id!r} uses unknown vertex {w!r}")
            if e.u == e.v:
                raise ValidationError(f"edge {e.id!r} is a self-loop")
            pair = frozenset(e.ends)
            if pair in pairs:
                raise ValidationError(f"parallel edge {e.id!r} between {e.u!r} and {e.v!r}")
            if e.length <= 0:
                raise ValidationError(f"edge {e.id!r} has nonpositive length {e.length}")
            pairs.add(pair)
            by_id[e.id] = e
            incident[e.u].append(e.id)
            incident[e.v].append(e.id)
        self.vertices: tuple[str, ...] = tuple(verts)
        self.edges: Mapping[str, Edge] = MappingProxyType(dict(sorted(by_id.items())))
        self._incident = {v: tuple(sorted(ids)) for v, ids in incident.items()}
        self._pair_index = {frozenset(e.ends): e.id for e in self.edges.values()}
        if not nx.is_connected(self.nx):
            raise ValidationError("graph is disconnected")

    def __repr__(self) -> str:
        return f"Graph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and dict(self.edges) == dict(other.edges)

    def __hash__(self) -> int:
        return hash((self.vertices, tuple(self.edges.values())))

    @cached_property
    def nx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for e in self.edges.values():
            g.add_edge(e.u, e.v, length=e.length, id=e.id)
        return g

    @cached_property
    def vertex_distances(self) -> dict[str, dict[str, Fraction]]:
        return {
            src: {dst: Fraction(d) for dst, d in lengths.items()}
            for src, lengths in nx.all_pairs_dijkstra_path_length(self.nx, weight="length")
        }

    @cached_property
    def vertex_paths(self) -> dict[str, dict[str, list[str]]]:
        return dict(nx.all_pairs_dijkstra_path(self.nx, weight="length"))

    def incident(self, v: str) -> tuple[str, ...]:
        return self._incident[v]

    def degree(self, v: str) -> int:
        return len(self._incident[v])

    def edge_between(self, u: str, v: str) -> str | None:
        return self._pair_index.get(frozenset((u, v)))

    def is_tree(self) -> bool:
        return len(self.edges) == len(self.vertices) - 1

    @property
    def shortest_edge(self) -> Fraction:
        return min(e.length for e in self.edges.values())

    # -- points ---------------------------------------------------------------

    def point_on_edge(self, edge: str, t: Any) -> GraphPoint:
        """Canonical point at parameter ``t`` of ``edge`` (endpoints become vertices)."""
        e = self.edges[edge]
        t = to_fraction(t)
        if t < 0 or t > 1:
            raise PointNotOnGraph(f"parameter {t} outside [0, 1] on edge {edge!r}")
        if t == 0:
            return Vertex(e.u)
        if t == 1:
            return Vertex(e.v)
        return EdgePoint(edge, t)

    def check_point(self, p: GraphPoint) -> None:
        if isinstance(p, Vertex):
            if p.id not in self._incident:
                raise PointNotOnGraph(f"unknown vertex {p.id!r}")
        elif isinstance(p, EdgePoint):
            if p.edge not in self.edges:
                raise PointNotOnGraph(f"unknown edge {p.edge!r}")
        else:
            raise PointNotOnGraph(f"not a graph point: {p!r}")

    def param(self, p: GraphPoint, edge: str) -> Fraction | None:
        """Parameter of ``p`` on the closure of ``edge``, or None if off it."""
        if isinstance(p, EdgePoint):
            return p.t if p.edge == edge else None
        e = self.edges[edge]
        if p.id == e.u:
            return Fraction(0)
        if p.id == e.v:
            return Fraction(1)
        return None

    def carriers(self, p: GraphPoint) -> tuple[str, ...]:
        """Edges whose closure contains ``p``."""
        if isinstance(p, EdgePoint):
            return (p.edge,)
        return self._incident[p.id]

    def common_edge(self, p: GraphPoint, q: GraphPoint) -> str | None:
        """An edge whose closure holds both points (None when there is none or p == q)."""
        if p == q:
            return None
        if isinstance(p, EdgePoint):
            return p.edge if self.param(q, p.edge) is not None else None
        if isinstance(q, EdgePoint):
            return q.edge if self.param(p, q.edge) is not None else None
        return self.edge_between(p.id, q.id)

    def anchors(self, p: GraphPoint) -> list[tuple[str, Fraction]]:
        """(vertex, distance) pairs through which every route leaving ``p`` passes."""
        if isinstance(p, Vertex):
            return [(p.id, Fraction(0))]
        e = self.edges[p.edge]
        return [(e.u, p.t * e.length), (e.v, (1 - p.t) * e.length)]

    def geodesic(self, p: GraphPoint, q: GraphPoint) -> list[GraphPoint]:
        """Waypoints of a shortest route from ``p`` to ``q``, one per vertex crossed."""
        if p == q:
            return [p]
        if self.common_edge(p, q) is not None:
            direct = graph_distance(self, p, q)
            e = self.edges[self.common_edge(p, q)]
            along = abs(self.param(p, e.id) - self.param(q, e.id)) * e.length
            if along == direct:
                return [p, q]
        dist = self.vertex_distances
        best = None
        for a, da in self.anchors(p):
            for b, db in self.anchors(q):
                total = da + dist[a][b] + db
                if best is None or total < best[0]:
                    best = (total, a, b)
        _, a, b = best
        route = self.vertex_paths[a][b]
        out: list[GraphPoint] = [p]
        for w in route:
            if out[-1] != Vertex(w):
                out.append(Vertex(w))
        if out[-1] != q:
            out.append(q)
        return out


def graph_distance(g: Graph, x: GraphPoint, y: GraphPoint) -> Fraction:
    """Shortest-path distance between two points of ``g``."""
    g.check_point(x)
    g.check_point(y)
    if x == y:
        return Fraction(0)
    dist = g.vertex_distances
    best = min(da + dist[a][b] + db for a, da in g.anchors(x) for b, db in g.anchors(y))
    if isinstance(x, EdgePoint) and isinstance(y, EdgePoint) and x.edge == y.edge:
        best = min(best, abs(x.t - y.t) * g.edges[x.edge].length)
    return best


class Configuration(tuple):
    """Ordered tuple of pairwise distinct graph points (agent ``i`` at ``c[i]``)."""

    def __new__(cls, points: Iterable[GraphPoint]) -> "Configuration":
        pts = tuple(points)
        if len(set(pts)) != len(pts):
            raise ValidationError("configuration has coinciding agents")
        return super().__new__(cls, pts)

    def __repr__(self) -> str:
        return "Configuration(" + ", ".join(str(p) for p in self) + ")"

    def check_on(self, g: Graph) -> None:
        for p in self:
            g.check_point(p)


# -- invariants of the graph ----------------------------------------------------


def essential_vertices(g: Graph) -> list[str]:
    """Vertices of degree at least three, sorted by id."""
    return [v for v in g.vertices if g.degree(v) >= 3]


def first_betti(g: Graph) -> int:
    return len(g.edges) - len(g.vertices) + 1


def subdivide(g: Graph, k: int) -> Graph:
    """Replace each edge by a path of ``k`` equal edges.

    New vertices are named ``"<edge>:<i>"`` and new edges ``"<edge>:<j>"``.
    """
    if k < 1:
        raise ValueError("subdivision must be a positive integer")
    if k == 1:
        return g
    vertices = list(g.vertices)
    edges = []
    for e in g.edges.values():
        chain = [e.u] + [f"{e.id}:{i}" for i in range(1, k)] + [e.v]
        vertices.extend(chain[1:-1])
        for j in range(k):
            edges.append(Edge(f"{e.id}:{j}", chain[j], chain[j + 1], e.length / k))
    return Graph(vertices, edges)


# -- rooted trees ------------------------------------------------------------------


class RootedTree:
    """A tree with a distinguished univalent root.

    Every non-root vertex has one descending edge (towards the root); its
    other incident edges are ascending.
    """

    def __init__(self, graph: Graph, root: str) -> None:
        if not graph.is_tree():
            raise NotATree("graph has a cycle")
        if root not in graph.vertices:
            raise ValidationError(f"unknown root vertex {root!r}")
        if graph.degree(root) != 1:
            raise RootNotUnivalent(f"root {root!r} has degree {graph.degree(root)}")
        self.graph = graph
        self.root = root
        self.root_edge = graph.incident(root)[0]
        parent: dict[str, str] = {}
        descending: dict[str, str] = {}
        depth = {root: Fraction(0)}
        order = [root]
        for v in order:
            for eid in graph.incident(v):
                w = graph.edges[eid].other(v)
                if w in depth:
                    continue
                parent[w] = v
                descending[w] = eid
                depth[w] = depth[v] + graph.edges[eid].length
                order.append(w)
        self.parent: Mapping[str, str] = MappingProxyType(parent)
        self.descending: Mapping[str, str] = MappingProxyType(descending)
        self.ascending: Mapping[str, tuple[str, ...]] = MappingProxyType(
            {v: tuple(e for e in graph.incident(v) if e != descending.get(v)) for v in graph.vertices}
        )
        self.depth: Mapping[str, Fraction] = MappingProxyType(depth)
        self._child = {eid: w for w, eid in descending.items()}
        chains: dict[str, frozenset[str]] = {root: frozenset([root])}
        for v in order[1:]:
            chains[v] = chains[parent[v]] | {v}
        self._chain = chains

    def __repr__(self) -> str:
        return f"RootedTree(root={self.root!r}, root_edge={self.root_edge!r}, {self.graph!r})"

    def child(self, edge: str) -> str:
        """Endpoint of ``edge`` farther from the root."""
        return self._child[edge]

    def height(self, p: GraphPoint) -> Fraction:
        """Distance from ``p`` to the root."""
        if isinstance(p, Vertex):
            return self.depth[p.id]
        e = self.graph.edges[p.edge]
        lower = self.parent[self._child[p.edge]]
        along = p.t if lower == e.u else 1 - p.t
        return self.depth[lower] + along * e.length

    def lower_vertex(self, p: GraphPoint) -> str:
        """First vertex met walking from ``p`` towards the root (``p`` itself if a vertex)."""
        if isinstance(p, Vertex):
            return p.id
        return self.parent[self._child[p.edge]]

    def root_edge_point(self, height: Fraction) -> GraphPoint:
        """Point of the root edge at the given distance from the root."""
        e = self.graph.edges[self.root_edge]
        s = Fraction(height) / e.length
        return self.graph.point_on_edge(e.id, s if e.u == self.root else 1 - s)

    def on_root_edge(self, p: GraphPoint) -> bool:
        """True for points on the closed root edge."""
        return self.graph.param(p, self.root_edge) is not None

    def precedes(self, x: GraphPoint, y: GraphPoint) -> bool:
        """``x > y``: the path from ``x`` down to the root passes through ``y``."""
        if x == y:
            return False
        chain = self._chain[self.lower_vertex(x)]
        if isinstance(y, Vertex):
            return y.id in chain
        if isinstance(x, EdgePoint) and x.edge == y.edge:
            return self.height(y) < self.height(x)
        return self._child[y.edge] in chain


def root_tree(g: Graph, root: str) -> RootedTree:
    return RootedTree(g, root)


def precedes(t: RootedTree, x: GraphPoint, y: GraphPoint) -> bool:
    t.graph.check_point(x)
    t.graph.check_point(y)
    return t.precedes(x, y)


# -- documents ------------------------------------------------------------------------


def _load(text: str | bytes | Mapping, what: str, source: str | None) -> Mapping:
    if isinstance(text, Mapping):
        return text
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        loc = f"{source or '<input>'}:{exc.lineno}:{exc.colno}"
        raise ParseError(f"invalid {what} document: {exc.msg}", source=loc) from None
    if not isinstance(doc, Mapping):
        raise ParseError(f"{what} document must be an object", source=source)
    return doc


def parse_graph(text: str | bytes | Mapping, *, source: str | None = None) -> Graph:
    """Build a :class:`Graph` from its JSON document.

    >>> g = parse_graph('{"vertices": ["a", "b"], "edges": [{"id": "e", "ends": ["a", "b"]}]}')
    >>> first_betti(g)
    0
    """
    doc = _load(text, "graph", source)
    try:
        vertices = doc["vertices"]
        raw_edges = doc["edges"]
    except KeyError as exc:
        raise ParseError(f"graph document lacks {exc.args[0]!r}", source=source) from None
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise ParseError("'vertices' must be a list of strings", source=source)
    if not isinstance(raw_edges, list):
        raise ParseError("'edges' must be a list", source=source)
    if len(set(vertices)) != len(vertices):
        raise ValidationError("duplicate vertex ids", source=source)
    edges = []
    for i, item in enumerate(raw_edges):
        where = f"{source or '<input>'}:edges[{i}]"
        if not isinstance(item, Mapping) or "ends" not in item:
            raise ParseError("edge entry must be an object with 'ends'", source=where)
        ends = item["ends"]
        if not (isinstance(ends, list) and len(ends) == 2 and all(isinstance(w, str) for w in ends)):
            raise ParseError("'ends' must be a pair of vertex ids", source=where)
        eid = item.get("id", f"{ends[0]}-{ends[1]}")
        if not isinstance(eid, str):
            raise ParseError("edge 'id' must be a string", source=where)
        try:
            length = to_fraction(item.get("length", 1))
        except (TypeError, ValueError, ZeroDivisionError):
            raise ParseError(f"bad length {item.get('length')!r}", source=where) from None
        edges.append(Edge(eid, ends[0], ends[1], length))
    try:
        return Graph(vertices, edges)
    except ValidationError as exc:
        exc.source = exc.source or source
        raise


def graph_to_dict(g: Graph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [
            {"id": e.id, "ends": [e.u, e.v], "length": float(e.length) if e.length.denominator != 1 else int(e.length)}
            for e in g.edges.values()
        ],
    }


def parse_point(g: Graph, item: Any, *, source: str | None = None) -> GraphPoint:
    if not isinstance(item, Mapping):
        raise ParseError("point must be an object", source=source)
    if "vertex" in item:
        p: GraphPoint = Vertex(item["vertex"])
        g.check_point(p)
        return p
    if "edge" in item and "t" in item:
        if item["edge"] not in g.edges:
            raise PointNotOnGraph(f"unknown edge {item['edge']!r}", source=source)
        try:
            t = to_fraction(item["t"])
        except (TypeError, ValueError, ZeroDivisionError):
            raise ParseError(f"bad edge parameter {item['t']!r}", source=source) from None
        if isinstance(item["t"], float):
            if abs(t) <= SNAP_TOLERANCE:
                t = Fraction(0)
            elif abs(1 - t) <= SNAP_TOLERANCE:
                t = Fraction(1)
        return g.point_on_edge(item["edge"], t)
    raise ParseError("point needs 'vertex' or 'edge' and 't'", source=source)


def point_to_dict(p: GraphPoint) -> dict:
    if isinstance(p, Vertex):
        return {"vertex": p.id}
    return {"edge": p.edge, "t": str(p.t), "t_float": float(p.t)}


def parse_configuration(g: Graph, text: str | bytes | Mapping, *, source: str | None = None) -> Configuration:
    doc = _load(text, "configuration", source)
    points = doc.get("points")
    if not isinstance(points, list):
        raise ParseError("configuration document needs a 'points' list", source=source)
    pts = [parse_point(g, item, source=f"{source or '<input>'}:points[{i}]") for i, item in enumerate(points)]
    try:
        return Configuration(pts)
    except ValidationError as exc:
        exc.source = source
        raise


def configuration_to_dict(c: Iterable[GraphPoint]) -> dict:
    return {"points": [point_to_dict(p) for p in c]}
