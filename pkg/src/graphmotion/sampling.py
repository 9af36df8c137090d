"""Random trees, configurations and perturbations for fuzzing and probes.

Everything takes an explicit :class:`random.Random` so runs are reproducible.
Sampled edge parameters are rationals with denominator 1000.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Sequence
from fractions import Fraction

from .graph import (
    Configuration,
    Edge,
    EdgePoint,
    Graph,
    GraphPoint,
    RootedTree,
    Vertex,
    essential_vertices,
    graph_distance,
)

LENGTHS = (Fraction(1), Fraction(1, 2), Fraction(3, 2), Fraction(2))
GRID = 1000


def random_tree(rng: random.Random, m: int, *, max_chain: int = 2) -> RootedTree:
    """Random rooted tree with exactly ``m`` essential vertices and root ``"r"``.

    Hubs are joined by paths of up to ``max_chain`` degree-2 vertices and get
    leaves until every hub has degree 3 or 4.
    """
    if m < 1:
        raise ValueError("need at least one essential vertex")
    verts: list[str] = []
    pairs: list[tuple[str, str]] = []
    counter = iter(range(10**6))

    def new(prefix: str) -> str:
        name = f"{prefix}{next(counter)}"
        verts.append(name)
        return name

    def chain(a: str, b: str) -> None:
        prev = a
        for _ in range(rng.randint(0, max_chain)):
            mid = new("d")
            pairs.append((prev, mid))
            prev = mid
        pairs.append((prev, b))

    hubs = [new("h") for _ in range(m)]
    for i in range(1, m):
        chain(hubs[rng.randrange(i)], hubs[i])
    verts.append("r")
    chain("r", hubs[0])
    degree = {v: 0 for v in verts}
    for u, v in pairs:
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
    for h in hubs:
        want = 3 + (rng.random() < 0.3)
        for _ in range(max(0, want - degree[h])):
            chain(h, new("l"))
    edges = [Edge(f"e{k}", u, v, rng.choice(LENGTHS)) for k, (u, v) in enumerate(pairs)]
    g = Graph(verts, edges)
    assert len(essential_vertices(g)) == m
    return RootedTree(g, "r")


def random_point(g: Graph, rng: random.Random) -> GraphPoint:
    edge = rng.choice(sorted(g.edges))
    return EdgePoint(edge, Fraction(rng.randint(1, GRID - 1), GRID))


def near_vertex(g: Graph, v: str, distance: Fraction, rng: random.Random) -> GraphPoint:
    """Point at ``distance`` from ``v`` along a random incident edge."""
    return near_vertex_on(g, v, rng.choice(g.incident(v)), distance)


def random_configuration(
    g: Graph,
    n: int,
    rng: random.Random,
    *,
    vertex_rate: float = 0.2,
    near_rate: float = 0.0,
    eps: Fraction | None = None,
) -> Configuration:
    """``n`` distinct random points.

    With probability ``vertex_rate`` an agent sits on a vertex; with
    probability ``near_rate`` it lies within ``eps`` of an essential vertex.
    """
    ess = essential_vertices(g)
    pts: list[GraphPoint] = []
    while len(pts) < n:
        x = rng.random()
        if x < vertex_rate:
            p: GraphPoint = Vertex(rng.choice(g.vertices))
        elif x < vertex_rate + near_rate and ess and eps:
            d = eps * Fraction(rng.randint(1, GRID - 1), GRID)
            p = near_vertex(g, rng.choice(ess), d, rng)
        else:
            p = random_point(g, rng)
        if p not in pts:
            pts.append(p)
    return Configuration(pts)


def _moves(g: Graph, p: GraphPoint, delta: Fraction) -> list[GraphPoint]:
    if isinstance(p, EdgePoint):
        e = g.edges[p.edge]
        out = []
        for s in (p.t + delta / e.length, p.t - delta / e.length):
            if 0 < s < 1:
                out.append(EdgePoint(e.id, s))
        return out
    return [near_vertex_on(g, p.id, e, delta) for e in g.incident(p.id) if delta < g.edges[e].length]


def near_vertex_on(g: Graph, v: str, edge: str, distance: Fraction) -> GraphPoint:
    e = g.edges[edge]
    s = distance / e.length
    return g.point_on_edge(edge, s if e.u == v else 1 - s)


def perturb(
    g: Graph,
    c: Sequence[GraphPoint],
    delta: Fraction,
    rng: random.Random,
    *,
    skip: Callable[[int, GraphPoint], bool] | None = None,
    guard: Callable[[int, GraphPoint, list[GraphPoint]], bool] | None = None,
) -> Configuration:
    """Move each agent by exactly ``delta`` along an edge it lies on.

    Agents never pass through another agent. ``skip`` exempts agents,
    ``guard`` vetoes candidate positions; an agent with no acceptable move
    stays put.
    """
    pts = list(c)
    for i, p in enumerate(pts):
        if skip is not None and skip(i, p):
            continue
        options = _moves(g, p, delta)
        rng.shuffle(options)
        for q in options:
            span = graph_distance(g, p, q)
            blocked = any(
                graph_distance(g, p, r) + graph_distance(g, r, q) == span for j, r in enumerate(pts) if j != i
            )
            if blocked or (guard is not None and not guard(i, q, pts)):
                continue
            pts[i] = q
            break
    return Configuration(pts)


def order_preserving_guard(t: RootedTree) -> Callable[[int, GraphPoint, list[GraphPoint]], bool]:
    """Guard keeping every comparison of the root order between agents unchanged."""

    def guard(i: int, q: GraphPoint, pts: list[GraphPoint]) -> bool:
        p = pts[i]
        return all(
            t.precedes(q, r) == t.precedes(p, r) and t.precedes(r, q) == t.precedes(r, p)
            for j, r in enumerate(pts)
            if j != i
        )

    return guard


def at_essential(t: RootedTree) -> Callable[[int, GraphPoint], bool]:
    ess = set(essential_vertices(t.graph))
    return lambda i, p: isinstance(p, Vertex) and p.id in ess
