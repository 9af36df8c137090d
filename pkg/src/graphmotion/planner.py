"""Collision-free motion planning for labelled points on a rooted tree.

The plan for a pair of configurations ``(a, b)`` has four stages:

1. ``descent_a``: park every agent of ``a`` on the root edge, repeatedly
   moving the minimal agents (nothing of ``a`` lies between them and the
   root) down, one at a time, in increasing index order.
2. ``permute``: reorder the parked agents to match the order in which
   ``b`` parks, using two ascending edges at an essential vertex as stacks.
3. ``slide``: move along the root edge onto the slots ``b`` parks in.
4. ``descent_b`` played backwards.

Only one agent moves at any moment and always along an agent-free route,
which is what makes every output collision free. Parking slots sit at
distances ``k/(n+1)`` of the root edge length from the root, and are filled
deepest first.

The plan depends continuously on the input as long as the set of agents
sitting on essential vertices does not change; the stratum and domain index
functions expose that partition of the input space.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch, NoEssentialVertex, NotOnRootEdge
from .graph import Configuration, GraphPoint, RootedTree, Vertex, essential_vertices, graph_distance
from .motion import Trajectory, concat_many, normalize_time, reverse

#: Smallest share of the time interval given to any plan stage, as a multiple of 1/stages.
MIN_STAGE_SHARE = Fraction(1, 4)


class Sequencer:
    """Records one-agent-at-a-time moves and turns them into a trajectory.

    Each move follows the tree geodesic with a breakpoint at every vertex; it
    is given time in proportion to its length.
    """

    def __init__(self, tree: RootedTree, start: Sequence[GraphPoint]) -> None:
        self.tree = tree
        self.start = tuple(start)
        self.positions = list(start)
        self.moves: list[tuple[int, list[GraphPoint], list[Fraction]]] = []

    def move(self, agent: int, target: GraphPoint) -> None:
        here = self.positions[agent]
        if here == target:
            return
        g = self.tree.graph
        route = g.geodesic(here, target)
        steps = [graph_distance(g, p, q) for p, q in zip(route, route[1:])]
        self.moves.append((agent, route, steps))
        self.positions[agent] = target

    @property
    def move_count(self) -> int:
        return len(self.moves)

    @property
    def config(self) -> Configuration:
        return Configuration(self.positions)

    def length(self) -> Fraction:
        return sum((sum(steps, Fraction(0)) for _, _, steps in self.moves), Fraction(0))

    def trajectory(self) -> Trajectory:
        g = self.tree.graph
        total = self.length()
        if total == 0:
            return Trajectory.constant(g, self.start)
        scheds: list[list[tuple[Fraction, GraphPoint]]] = [[(Fraction(0), p)] for p in self.start]
        clock = Fraction(0)
        for agent, route, steps in self.moves:
            sched = scheds[agent]
            if sched[-1][0] < clock:
                sched.append((clock, route[0]))
            for p, d in zip(route[1:], steps):
                clock += d / total
                sched.append((clock, p))
        for sched in scheds:
            if sched[-1][0] < 1:
                sched.append((Fraction(1), sched[-1][1]))
        return Trajectory(g, scheds)


def _require_essential(t: RootedTree) -> list[str]:
    ess = essential_vertices(t.graph)
    if not ess:
        raise NoEssentialVertex("the tree has no vertex of degree >= 3; its configuration space may be disconnected")
    return ess


def slots(t: RootedTree, n: int) -> list[GraphPoint]:
    """Parking slots on the root edge, deepest (closest to the root) first."""
    length = t.graph.edges[t.root_edge].length
    return [t.root_edge_point(length * Fraction(k, n + 1)) for k in range(1, n + 1)]


def _minimal(t: RootedTree, c: Sequence[GraphPoint], among: Sequence[int]) -> list[int]:
    return [j for j in among if not any(t.precedes(c[j], c[k]) for k in among if k != j)]


def minimal_points(t: RootedTree, c: Sequence[GraphPoint]) -> list[int]:
    """Indices of agents with no other agent between them and the root."""
    return _minimal(t, c, range(len(c)))


def _descent(t: RootedTree, c: Sequence[GraphPoint]) -> tuple[Sequencer, list[int]]:
    n = len(c)
    targets = slots(t, n)
    seq = Sequencer(t, c)
    # Agents already on the closed root edge form a chain below everyone else;
    # they take the lowest slots in order. Upward movers go first, top-down,
    # then downward movers bottom-up, so no two cross and the topmost agent
    # moves last, just as it would from slightly above the root edge.
    chain = sorted((i for i in range(n) if t.on_root_edge(c[i])), key=lambda i: t.height(c[i]))
    heights = {i: t.height(c[i]) for i in chain}
    slot_height = {i: t.height(targets[k]) for k, i in enumerate(chain)}
    up = [i for i in reversed(chain) if slot_height[i] > heights[i]]
    down = [i for i in chain if slot_height[i] <= heights[i]]
    for i in up + down:
        seq.move(i, targets[chain.index(i)])
    order = list(chain)
    remaining = [i for i in range(n) if i not in set(chain)]
    while remaining:
        for i in _minimal(t, c, remaining):
            seq.move(i, targets[len(order)])
            order.append(i)
            remaining.remove(i)
    return seq, order


def descend_all(t: RootedTree, c: Sequence[GraphPoint]) -> tuple[Trajectory, Configuration]:
    """Move every agent onto the root edge; returns the motion and where it ends."""
    _require_essential(t)
    c = Configuration(c)
    c.check_on(t.graph)
    seq, _ = _descent(t, c)
    return normalize_time(seq.trajectory()), seq.config


def root_edge_order(t: RootedTree, c: Sequence[GraphPoint]) -> tuple[int, ...]:
    """Agent indices sorted from the root outwards (all agents inside the root edge)."""
    for i, p in enumerate(c):
        if not t.on_root_edge(p) or isinstance(p, Vertex):
            raise NotOnRootEdge(f"agent {i} at {p} is not inside the root edge")
    return tuple(sorted(range(len(c)), key=lambda i: t.height(c[i])))


def hub(t: RootedTree) -> str:
    """Essential vertex closest to the root edge; ties go to the smallest id."""
    return min(_require_essential(t), key=lambda v: (t.depth[v], v))


def permutation_moves(t: RootedTree, c: Sequence[GraphPoint], target: Sequence[int]) -> Sequencer:
    """Reorder agents parked inside the root edge so that ``target[0]`` ends deepest.

    Two ascending edges at :func:`hub` act as stacks. All agents are pushed
    onto the first stack; then, for each target position, the first stack is
    popped onto the second until the wanted agent is on top, that agent goes
    down to its slot, and the second stack is poured back.
    """
    _require_essential(t)
    order = root_edge_order(t, c)
    n = len(c)
    if sorted(target) != list(range(n)):
        raise ValueError(f"{target!r} is not a permutation of range({n})")
    seq = Sequencer(t, c)
    if tuple(target) == order:
        return seq
    parking = sorted(c, key=t.height)
    v = hub(t)
    g = t.graph
    first, second = t.ascending[v][:2]

    def cell(edge: str, k: int) -> GraphPoint:
        # k-th stack cell, counted from the hub; cell n is the far end
        e = g.edges[edge]
        s = Fraction(k, n + 1)
        return g.point_on_edge(edge, s if e.u == v else 1 - s)

    stacks: dict[str, list[int]] = {first: [], second: []}

    def push(agent: int, edge: str) -> None:
        stack = stacks[edge]
        seq.move(agent, cell(edge, n - len(stack)))
        stack.append(agent)

    for agent in reversed(order):
        push(agent, first)
    for k, agent in enumerate(target):
        while stacks[first][-1] != agent:
            push(stacks[first].pop(), second)
        stacks[first].pop()
        seq.move(agent, parking[k])
        while stacks[second]:
            push(stacks[second].pop(), first)
    return seq


def permute_on_root(t: RootedTree, c: Sequence[GraphPoint], target: Sequence[int]) -> Trajectory:
    return normalize_time(permutation_moves(t, c, target).trajectory())


def slide(t: RootedTree, a: Sequence[GraphPoint], b: Sequence[GraphPoint]) -> Trajectory:
    """Simultaneous straight motion along the root edge between equally ordered configurations."""
    if root_edge_order(t, a) != root_edge_order(t, b):
        raise ValueError("configurations are ordered differently along the root edge")
    return normalize_time(Trajectory(t.graph, [[(0, p), (1, q)] for p, q in zip(a, b)]))


def stratum(t: RootedTree, c: Sequence[GraphPoint]) -> int:
    """Number of agents sitting exactly on essential vertices."""
    ess = set(essential_vertices(t.graph))
    return sum(1 for p in c if isinstance(p, Vertex) and p.id in ess)


def domain_index(t: RootedTree, a: Sequence[GraphPoint], b: Sequence[GraphPoint]) -> int:
    return stratum(t, a) + stratum(t, b)


def stage_weights(lengths: Sequence[Fraction]) -> list[Fraction]:
    """Time shares for plan stages: proportional to length, floored at MIN_STAGE_SHARE/stages."""
    k = len(lengths)
    total = sum(lengths, Fraction(0))
    if total == 0:
        return [Fraction(1, k)] * k
    floor = MIN_STAGE_SHARE / k
    raw = [max(x / total, floor) for x in lengths]
    s = sum(raw)
    return [x / s for x in raw]


@dataclass(frozen=True)
class PlanStages:
    descent_a: Trajectory
    permute: Trajectory
    slide: Trajectory
    descent_b: Trajectory
    combined: Trajectory
    domain_index: int

    @property
    def parked_a(self) -> Configuration:
        return self.descent_a.end

    @property
    def permuted(self) -> Configuration:
        return self.permute.end

    @property
    def parked_b(self) -> Configuration:
        return self.descent_b.end

    def stages(self) -> dict[str, Trajectory]:
        return {
            "descentA": self.descent_a,
            "permute": self.permute,
            "slide": self.slide,
            "descentB": self.descent_b,
            "combined": self.combined,
        }


def plan(t: RootedTree, a: Sequence[GraphPoint], b: Sequence[GraphPoint]) -> PlanStages:
    """Collision-free motion from configuration ``a`` to configuration ``b``."""
    _require_essential(t)
    if len(a) != len(b):
        raise DimensionMismatch(f"{len(a)} agents at the start, {len(b)} at the goal")
    a, b = Configuration(a), Configuration(b)
    a.check_on(t.graph)
    b.check_on(t.graph)
    seq_a, _ = _descent(t, a)
    seq_b, order_b = _descent(t, b)
    seq_p = permutation_moves(t, seq_a.config, order_b)
    descent_a = normalize_time(seq_a.trajectory())
    descent_b = normalize_time(seq_b.trajectory())
    permute = normalize_time(seq_p.trajectory())
    sliding = slide(t, seq_p.config, seq_b.config)
    parts = [descent_a, permute, sliding, reverse(descent_b)]
    weights = stage_weights([p.arc_length() for p in parts])
    combined = normalize_time(concat_many(parts, weights))
    return PlanStages(descent_a, permute, sliding, descent_b, combined, domain_index(t, a, b))
