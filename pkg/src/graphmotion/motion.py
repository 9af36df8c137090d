"""Piecewise-linear multi-agent trajectories with exact collision checking.

A trajectory gives every agent a list of breakpoints ``(time, point)`` with
times running from 0 to 1. Between consecutive breakpoints the agent moves
at constant speed inside the closure of a single edge, so every vertex
crossing is an explicit breakpoint. All arithmetic is rational, which turns
collision checking into solving linear equations exactly.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, NamedTuple

from .errors import AgentCountMismatch, EndpointMismatch, MalformedTrajectory, ParseError
from .graph import (
    Configuration,
    EdgePoint,
    Graph,
    GraphPoint,
    graph_distance,
    parse_point,
    point_to_dict,
    to_fraction,
    Vertex,
)

HALF = Fraction(1, 2)


class Breakpoint(NamedTuple):
    time: Fraction
    point: GraphPoint


class Segment(NamedTuple):
    """Straight piece of one agent's schedule; ``edge`` is None while parked."""

    t0: Fraction
    t1: Fraction
    p0: GraphPoint
    p1: GraphPoint
    edge: str | None
    s0: Fraction
    s1: Fraction

    def param_at(self, t: Fraction) -> Fraction:
        return self.s0 + (self.s1 - self.s0) * (t - self.t0) / (self.t1 - self.t0)


class Trajectory:
    """Per-agent piecewise-linear schedules over the time interval [0, 1]."""

    def __init__(self, graph: Graph, agents: Iterable[Iterable[tuple[Any, GraphPoint]]]) -> None:
        self.graph = graph
        self.agents: tuple[tuple[Breakpoint, ...], ...] = tuple(
            tuple(Breakpoint(to_fraction(t), p) for t, p in schedule) for schedule in agents
        )
        self._validate()

    @classmethod
    def constant(cls, graph: Graph, config: Sequence[GraphPoint]) -> "Trajectory":
        return cls(graph, [[(0, p), (1, p)] for p in config])

    def _validate(self) -> None:
        if not self.agents:
            raise MalformedTrajectory("trajectory has no agents")
        g = self.graph
        for i, sched in enumerate(self.agents):
            if len(sched) < 2:
                raise MalformedTrajectory(f"agent {i}: need at least two breakpoints")
            if sched[0].time != 0 or sched[-1].time != 1:
                raise MalformedTrajectory(f"agent {i}: schedule must run from time 0 to 1")
            for bp in sched:
                g.check_point(bp.point)
            for a, b in zip(sched, sched[1:]):
                if not a.time < b.time:
                    raise MalformedTrajectory(f"agent {i}: times not strictly increasing at {b.time}")
                if a.point != b.point and g.common_edge(a.point, b.point) is None:
                    raise MalformedTrajectory(
                        f"agent {i}: step {a.point} -> {b.point} at time {a.time} leaves a single edge"
                    )

    @property
    def n(self) -> int:
        return len(self.agents)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Trajectory):
            return NotImplemented
        return self.agents == other.agents and self.graph == other.graph

    def __hash__(self) -> int:
        return hash(self.agents)

    def __repr__(self) -> str:
        sizes = ",".join(str(len(s)) for s in self.agents)
        return f"Trajectory(n={self.n}, breakpoints=[{sizes}])"

    @property
    def start(self) -> Configuration:
        return Configuration(s[0].point for s in self.agents)

    @property
    def end(self) -> Configuration:
        return Configuration(s[-1].point for s in self.agents)

    @cached_property
    def segments(self) -> tuple[tuple[Segment, ...], ...]:
        g = self.graph
        out = []
        for sched in self.agents:
            segs = []
            for a, b in zip(sched, sched[1:]):
                e = g.common_edge(a.point, b.point)
                if e is None:
                    segs.append(Segment(a.time, b.time, a.point, b.point, None, Fraction(0), Fraction(0)))
                else:
                    segs.append(Segment(a.time, b.time, a.point, b.point, e, g.param(a.point, e), g.param(b.point, e)))
            out.append(tuple(segs))
        return tuple(out)

    def position(self, agent: int, time: Any) -> GraphPoint:
        t = to_fraction(time)
        if not 0 <= t <= 1:
            raise ValueError(f"time {t} outside [0, 1]")
        for seg in self.segments[agent]:
            if seg.t0 <= t <= seg.t1:
                return _point_at(self.graph, seg, t)
        raise AssertionError("unreachable: schedule covers [0, 1]")

    def configuration_at(self, time: Any) -> tuple[GraphPoint, ...]:
        return tuple(self.position(i, time) for i in range(self.n))

    def arc_length(self) -> Fraction:
        """Total distance travelled, summed over agents."""
        edges = self.graph.edges
        return sum(
            (abs(s.s1 - s.s0) * edges[s.edge].length for segs in self.segments for s in segs if s.edge),
            Fraction(0),
        )


def _point_at(g: Graph, seg: Segment, t: Fraction) -> GraphPoint:
    if seg.edge is None:
        return seg.p0
    if t == seg.t0:
        return seg.p0
    if t == seg.t1:
        return seg.p1
    return g.point_on_edge(seg.edge, seg.param_at(t))


def endpoints(tr: Trajectory) -> tuple[Configuration, Configuration]:
    return tr.start, tr.end


def concat_many(parts: Sequence[Trajectory], weights: Sequence[Any] | None = None) -> Trajectory:
    """Run ``parts`` back to back, part ``i`` taking time proportional to ``weights[i]``."""
    if not parts:
        raise ValueError("nothing to concatenate")
    if weights is None:
        weights = [1] * len(parts)
    if len(weights) != len(parts):
        raise ValueError("one weight per part")
    w = [to_fraction(x) for x in weights]
    if any(x <= 0 for x in w):
        raise ValueError("weights must be positive")
    total = sum(w)
    n = parts[0].n
    for k, (a, b) in enumerate(zip(parts, parts[1:])):
        if b.n != n or a.n != n:
            raise AgentCountMismatch(f"part {k + 1} has {b.n} agents, expected {n}")
        if a.end != b.start:
            raise EndpointMismatch(f"part {k} ends at {a.end!r} but part {k + 1} starts at {b.start!r}")
    offsets = [Fraction(0)]
    for x in w:
        offsets.append(offsets[-1] + x / total)
    agents = []
    for i in range(n):
        sched = [parts[0].agents[i][0]]
        for k, part in enumerate(parts):
            lo, span = offsets[k], offsets[k + 1] - offsets[k]
            sched.extend(Breakpoint(lo + span * bp.time, bp.point) for bp in part.agents[i][1:])
        agents.append(sched)
    return Trajectory(parts[0].graph, agents)


def concat(a: Trajectory, b: Trajectory, split: Any = HALF) -> Trajectory:
    """``a`` on ``[0, split]`` followed by ``b`` on ``[split, 1]``."""
    s = to_fraction(split)
    if not 0 < s < 1:
        raise ValueError("split must lie in (0, 1)")
    if a.n != b.n:
        raise AgentCountMismatch(f"{a.n} agents vs {b.n} agents")
    return concat_many([a, b], [s, 1 - s])


def reverse(tr: Trajectory) -> Trajectory:
    return Trajectory(tr.graph, [[(1 - bp.time, bp.point) for bp in reversed(s)] for s in tr.agents])


def _redundant(g: Graph, a: Breakpoint, m: Breakpoint, b: Breakpoint) -> bool:
    if a.point == m.point == b.point:
        return True
    for e in g.carriers(m.point):
        sa, sm, sb = g.param(a.point, e), g.param(m.point, e), g.param(b.point, e)
        if sa is not None and sb is not None:
            return (sm - sa) * (b.time - m.time) == (sb - sm) * (m.time - a.time)
    return False


def normalize_time(tr: Trajectory) -> Trajectory:
    """Canonical form: time rescaled to [0, 1], duplicate and collinear breakpoints dropped."""
    lo = min(s[0].time for s in tr.agents)
    hi = max(s[-1].time for s in tr.agents)
    g = tr.graph
    agents = []
    for sched in tr.agents:
        out: list[Breakpoint] = []
        for bp in sched:
            if lo != 0 or hi != 1:
                bp = Breakpoint((bp.time - lo) / (hi - lo), bp.point)
            if out and bp == out[-1]:
                continue
            while len(out) >= 2 and _redundant(g, out[-2], out[-1], bp):
                out.pop()
            out.append(bp)
        agents.append(out)
    return Trajectory(g, agents)


# -- collision checking ---------------------------------------------------------


@dataclass(frozen=True)
class CollisionCertificate:
    verdict: str
    time: Fraction | None = None
    agents: tuple[int, int] | None = None
    position: GraphPoint | None = None

    @property
    def clear(self) -> bool:
        return self.verdict == "clear"

    def to_dict(self) -> dict:
        if self.clear:
            return {"verdict": "clear"}
        return {
            "verdict": "collision",
            "time": str(self.time),
            "time_float": float(self.time),
            "agents": list(self.agents),
            "position": point_to_dict(self.position),
        }


def _zero(flo: Fraction, fhi: Fraction, lo: Fraction, hi: Fraction) -> Fraction | None:
    """Earliest root in [lo, hi] of the linear function with these end values."""
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo < 0) != (fhi < 0):
        return lo + flo * (hi - lo) / (flo - fhi)
    return None


def _shared_vertex(g: Graph, e: str, f: str) -> str | None:
    common = set(g.edges[e].ends) & set(g.edges[f].ends)
    return common.pop() if common else None


def _coincidence(g: Graph, a: Segment, b: Segment, lo: Fraction, hi: Fraction) -> Fraction | None:
    """Earliest time in [lo, hi] at which the two moving points meet."""
    if a.edge is None and b.edge is None:
        return lo if a.p0 == b.p0 else None
    if a.edge is None:
        a, b = b, a
    if b.edge is None:
        sq = g.param(b.p0, a.edge)
        if sq is None:
            return None
        return _zero(a.param_at(lo) - sq, a.param_at(hi) - sq, lo, hi)
    if a.edge == b.edge:
        return _zero(a.param_at(lo) - b.param_at(lo), a.param_at(hi) - b.param_at(hi), lo, hi)
    v = _shared_vertex(g, a.edge, b.edge)
    if v is None:
        return None
    sa, sb = g.param(Vertex(v), a.edge), g.param(Vertex(v), b.edge)
    ta = _zero(a.param_at(lo) - sa, a.param_at(hi) - sa, lo, hi)
    if ta is None:
        return None
    tb = _zero(b.param_at(lo) - sb, b.param_at(hi) - sb, lo, hi)
    return ta if ta == tb else None


def _overlaps(xs: Sequence[Segment], ys: Sequence[Segment]):
    """Yield (x, y, lo, hi) over the common refinement of two segment lists."""
    i = j = 0
    while i < len(xs) and j < len(ys):
        x, y = xs[i], ys[j]
        lo, hi = max(x.t0, y.t0), min(x.t1, y.t1)
        yield x, y, lo, hi
        if x.t1 <= y.t1:
            i += 1
        if y.t1 <= x.t1:
            j += 1


def check_collision_free(tr: Trajectory) -> CollisionCertificate:
    """Exact check that no two agents ever occupy the same point.

    Returns the earliest collision found (ties broken by agent pair).
    """
    g = tr.graph
    segs = tr.segments
    first: tuple[Fraction, tuple[int, int]] | None = None
    for i, j in itertools.combinations(range(tr.n), 2):
        for x, y, lo, hi in _overlaps(segs[i], segs[j]):
            if first is not None and lo > first[0]:
                break
            if x.edge is None and y.edge is None and x.p0 != y.p0:
                continue
            t = _coincidence(g, x, y, lo, hi)
            if t is not None:
                if first is None or (t, (i, j)) < first:
                    first = (t, (i, j))
                break
    if first is None:
        return CollisionCertificate("clear")
    t, pair = first
    return CollisionCertificate("collision", t, pair, tr.position(pair[0], t))


# -- distances between trajectories ---------------------------------------------


def _anchor_values(g: Graph, seg: Segment, lo: Fraction, hi: Fraction):
    """(vertex, distance at lo, distance at hi) for the routes out of a moving point."""
    if seg.edge is None:
        return [(v, d, d) for v, d in g.anchors(seg.p0)]
    e = g.edges[seg.edge]
    slo, shi = seg.param_at(lo), seg.param_at(hi)
    return [(e.u, slo * e.length, shi * e.length), (e.v, (1 - slo) * e.length, (1 - shi) * e.length)]


def _edge_of(seg: Segment) -> str | None:
    if seg.edge is not None:
        return seg.edge
    return seg.p0.edge if isinstance(seg.p0, EdgePoint) else None


def sup_distance(a: Trajectory, b: Trajectory) -> Fraction:
    """Largest distance between simultaneous positions of the same agent, exactly.

    On each common piece the distance is the minimum of finitely many linear
    functions of time (one per route), so its maximum sits at a piece end or
    where two of those functions cross.
    """
    if a.n != b.n:
        raise AgentCountMismatch(f"{a.n} agents vs {b.n} agents")
    g = a.graph
    dist = g.vertex_distances
    best = Fraction(0)
    for i in range(a.n):
        for x, y, lo, hi in _overlaps(a.segments[i], b.segments[i]):
            funcs = [
                (dlo + dist[u][v] + elo, dhi + dist[u][v] + ehi)
                for u, dlo, dhi in _anchor_values(g, x, lo, hi)
                for v, elo, ehi in _anchor_values(g, y, lo, hi)
            ]
            ex, ey = _edge_of(x), _edge_of(y)
            times = {lo, hi}
            if ex is not None and ex == ey:
                length = g.edges[ex].length
                xlo, xhi = _params(g, x, ex, lo, hi)
                ylo, yhi = _params(g, y, ex, lo, hi)
                funcs.append(((xlo - ylo) * length, (xhi - yhi) * length))
                funcs.append(((ylo - xlo) * length, (yhi - xhi) * length))
            if hi > lo:
                for (f0, f1), (h0, h1) in itertools.combinations(funcs, 2):
                    t = _zero(f0 - h0, f1 - h1, lo, hi)
                    if t is not None:
                        times.add(t)
            for t in times:
                d = graph_distance(g, _point_at(g, x, t), _point_at(g, y, t))
                if d > best:
                    best = d
    return best


def _params(g: Graph, seg: Segment, edge: str, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    if seg.edge == edge:
        return seg.param_at(lo), seg.param_at(hi)
    s = g.param(seg.p0, edge)
    return s, s


# -- documents ----------------------------------------------------------------------


def trajectory_to_dict(tr: Trajectory) -> dict:
    return {
        "agents": [
            [{"time": str(bp.time), "time_float": float(bp.time), "point": point_to_dict(bp.point)} for bp in sched]
            for sched in tr.agents
        ]
    }


def parse_trajectory(g: Graph, doc: Mapping, *, source: str | None = None) -> Trajectory:
    agents = doc.get("agents") if isinstance(doc, Mapping) else None
    if not isinstance(agents, list):
        raise ParseError("trajectory document needs an 'agents' list", source=source)
    scheds = []
    for i, sched in enumerate(agents):
        if not isinstance(sched, list):
            raise ParseError(f"agent {i} schedule must be a list", source=source)
        rows = []
        for k, item in enumerate(sched):
            where = f"{source or '<input>'}:agents[{i}][{k}]"
            try:
                t = to_fraction(item["time"])
            except (KeyError, TypeError, ValueError, ZeroDivisionError):
                raise ParseError("breakpoint needs a numeric 'time'", source=where) from None
            rows.append((t, parse_point(g, item.get("point"), source=where)))
        scheds.append(rows)
    return Trajectory(g, scheds)
