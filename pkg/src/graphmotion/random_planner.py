"""Random motion planners with ``2m + 1`` states built from the tree planner.

For a pair of configurations the planner returns ``2m + 1`` paths, path
``k`` planned after snapping agents onto or off essential vertices so that
exactly ``k`` essential vertices are occupied in total, together with
probabilities that vary continuously with the input. The probabilities come
from bump functions: an essential vertex ``v`` counts as occupied with
weight ``max(0, 1 - d/eps)``, ``d`` being the distance from ``v`` to the
nearest agent, and vertices are treated as independent.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import SnapInfeasible, ValidationError
from .graph import Configuration, Graph, GraphPoint, RootedTree, Vertex, essential_vertices, graph_distance, subdivide
from .motion import Trajectory, check_collision_free, concat_many, normalize_time, reverse, sup_distance, trajectory_to_dict
from .planner import Sequencer, _require_essential, plan
from .sampling import at_essential, order_preserving_guard, perturb, random_configuration

DELTAS = (Fraction(1, 100), Fraction(1, 1000), Fraction(1, 10000))


@dataclass(frozen=True)
class BumpParams:
    epsilon: Fraction

    @classmethod
    def default(cls, g: Graph) -> "BumpParams":
        return cls(g.shortest_edge / 10)

    def check(self, g: Graph) -> None:
        if not 0 < self.epsilon < g.shortest_edge / 2:
            raise ValidationError(
                f"epsilon must lie in (0, {g.shortest_edge / 2}) so bumps at different vertices stay disjoint"
            )


def _bump(eps: BumpParams, d: Fraction) -> Fraction:
    return max(Fraction(0), 1 - d / eps.epsilon)


def _params(t: RootedTree, eps: BumpParams | None) -> BumpParams:
    eps = eps or BumpParams.default(t.graph)
    eps.check(t.graph)
    return eps


def vertex_proximity(t: RootedTree, c: Sequence[GraphPoint], eps: BumpParams | None = None) -> list[Fraction]:
    """Per agent, ``1 - d/eps`` clipped at 0 for the distance ``d`` to the nearest essential vertex."""
    eps = _params(t, eps)
    ess = [Vertex(v) for v in essential_vertices(t.graph)]
    return [_bump(eps, min(graph_distance(t.graph, p, v) for v in ess)) for p in c]


def vertex_occupancy(
    t: RootedTree, c: Sequence[GraphPoint], eps: BumpParams | None = None
) -> list[tuple[str, Fraction, int | None]]:
    """Per essential vertex: (vertex, occupancy weight, nearest agent within eps or None)."""
    eps = _params(t, eps)
    out = []
    for v in essential_vertices(t.graph):
        dists = [(graph_distance(t.graph, p, Vertex(v)), i) for i, p in enumerate(c)]
        d, i = min(dists)
        w = _bump(eps, d)
        out.append((v, w, i if w > 0 else None))
    return out


def occupancy_weights(b: Sequence[Fraction]) -> list[Fraction]:
    """Distribution of the number of successes among independent events with probabilities ``b``."""
    q = [Fraction(1)]
    for x in b:
        x = Fraction(x)
        if not 0 <= x <= 1:
            raise ValueError(f"probability {x} outside [0, 1]")
        nxt = [Fraction(0)] * (len(q) + 1)
        for i, w in enumerate(q):
            nxt[i] += w * (1 - x)
            nxt[i + 1] += w * x
        q = nxt
    return q


@dataclass(frozen=True)
class RandomPlan:
    entries: tuple[tuple[Fraction, Trajectory], ...]
    snapped: tuple[bool, ...] = field(default=())

    @property
    def probabilities(self) -> list[Fraction]:
        return [p for p, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def to_dict(self) -> dict:
        return {
            "entries": [
                {"k": k, "p": str(p), "p_float": float(p), "trajectory": trajectory_to_dict(tr)}
                for k, (p, tr) in enumerate(self.entries)
            ]
        }


def _snap_choice(occ_a, occ_b, k: int) -> tuple[dict[str, int], dict[str, int]]:
    """Vertices to occupy on each side so that exactly ``k`` are occupied in total.

    Candidates are taken by decreasing weight (ties: start side, then vertex id).
    """
    cands = [(-w, 0, v, i) for v, w, i in occ_a if w > 0] + [(-w, 1, v, i) for v, w, i in occ_b if w > 0]
    cands.sort()
    if k > len(cands):
        raise SnapInfeasible(f"only {len(cands)} vertices can be occupied, {k} requested")
    dropped = cands[k:]
    if any(w == -1 for w, *_ in dropped):
        raise SnapInfeasible("an agent already on a vertex would have to leave it")
    chosen: tuple[dict[str, int], dict[str, int]] = ({}, {})
    for _, side, v, i in cands[:k]:
        chosen[side][v] = i
    return chosen


def _snap(t: RootedTree, c: Configuration, chosen: dict[str, int]) -> Sequencer:
    seq = Sequencer(t, c)
    for v in sorted(chosen):
        seq.move(chosen[v], Vertex(v))
    return seq


def snapped_plan(t: RootedTree, a: Configuration, b: Configuration, k: int, eps: BumpParams | None = None) -> Trajectory:
    """Plan from ``a`` to ``b`` routed through a pair with ``k`` occupied essential vertices.

    The snapping moves take time in proportion to their length, so the path
    tends to the unsnapped plan of the snapped pair as the snaps shrink.
    """
    eps = _params(t, eps)
    chosen_a, chosen_b = _snap_choice(vertex_occupancy(t, a, eps), vertex_occupancy(t, b, eps), k)
    seq_a, seq_b = _snap(t, a, chosen_a), _snap(t, b, chosen_b)
    core = plan(t, seq_a.config, seq_b.config).combined
    if not seq_a.moves and not seq_b.moves:
        return core
    parts = [core]
    if seq_a.moves:
        parts.insert(0, seq_a.trajectory())
    if seq_b.moves:
        parts.append(reverse(seq_b.trajectory()))
    lengths = [p.arc_length() for p in parts]
    keep = [(p, w) for p, w in zip(parts, lengths) if w > 0]
    return normalize_time(concat_many([p for p, _ in keep], [w for _, w in keep]))


def random_plan(t: RootedTree, a: Sequence[GraphPoint], b: Sequence[GraphPoint], eps: BumpParams | None = None) -> RandomPlan:
    m = len(_require_essential(t))
    eps = _params(t, eps)
    a, b = Configuration(a), Configuration(b)
    qa = occupancy_weights([w for _, w, _ in vertex_occupancy(t, a, eps)])
    qb = occupancy_weights([w for _, w, _ in vertex_occupancy(t, b, eps)])
    probs = [Fraction(0)] * (2 * m + 1)
    for i, x in enumerate(qa):
        for j, y in enumerate(qb):
            probs[min(i + j, 2 * m)] += x * y
    fallback = None
    entries = []
    snapped = []
    for k, p in enumerate(probs):
        if p == 0:
            if fallback is None:
                fallback = plan(t, a, b).combined
            entries.append((p, fallback))
            snapped.append(False)
            continue
        entries.append((p, snapped_plan(t, a, b, k, eps)))
        snapped.append(True)
    return RandomPlan(tuple(entries), tuple(snapped))


# -- continuity probes ----------------------------------------------------------------


@dataclass
class ProbeReport:
    deltas: tuple[Fraction, ...]
    deviations: list[list[Fraction]]  # per trial, one value per delta

    @property
    def maxima(self) -> list[Fraction]:
        return [max((row[k] for row in self.deviations), default=Fraction(0)) for k in range(len(self.deltas))]

    @property
    def monotone(self) -> bool:
        """Worst-case deviation never grows as delta shrinks, and shrinks overall unless it is zero."""
        mx = self.maxima
        steps = all(x >= y for x, y in zip(mx, mx[1:]))
        return steps and (mx[-1] < mx[0] or mx[0] == 0)

    def to_dict(self) -> dict:
        return {
            "deltas": [float(d) for d in self.deltas],
            "max_deviation": [float(x) for x in self.maxima],
            "monotone": self.monotone,
            "per_trial": [[float(x) for x in row] for row in self.deviations],
        }


def random_plan_deviation(x: RandomPlan, y: RandomPlan) -> Fraction:
    """Total variation of the probabilities plus path distances weighted by shared probability."""
    tv = sum((abs(p - q) for p, q in zip(x.probabilities, y.probabilities)), Fraction(0)) / 2
    drift = Fraction(0)
    for (p, px), (q, py) in zip(x.entries, y.entries):
        w = min(p, q)
        if w > 0:
            drift += w * sup_distance(px, py)
    return tv + drift


def continuity_probe(
    t: RootedTree,
    seed: int,
    trials: int,
    eps: BumpParams | None = None,
    *,
    agents: int = 2,
    deltas: Sequence[Fraction] = DELTAS,
) -> ProbeReport:
    """Perturb random pairs by each ``delta`` and measure how far the random plan moves."""
    eps = _params(t, eps)
    g = t.graph
    rows = []
    for trial in range(trials):
        rng = random.Random(f"{seed}:{trial}")
        a = random_configuration(g, agents, rng, vertex_rate=0.15, near_rate=0.35, eps=eps.epsilon)
        b = random_configuration(g, agents, rng, vertex_rate=0.15, near_rate=0.35, eps=eps.epsilon)
        base = random_plan(t, a, b, eps)
        row = []
        for delta in deltas:
            prng = random.Random(f"{seed}:{trial}:perturb")
            a2 = perturb(g, a, delta, prng)
            b2 = perturb(g, b, delta, prng)
            row.append(random_plan_deviation(base, random_plan(t, a2, b2, eps)))
        rows.append(row)
    return ProbeReport(tuple(deltas), rows)


def check_random_plan(t: RootedTree, a: Sequence[GraphPoint], b: Sequence[GraphPoint], rp: RandomPlan) -> list[str]:
    """Problems found in a random plan (empty when it satisfies every guarantee)."""
    problems = []
    m = len(essential_vertices(t.graph))
    if len(rp) != 2 * m + 1:
        problems.append(f"{len(rp)} entries, expected {2 * m + 1}")
    if sum(rp.probabilities) != 1:
        problems.append(f"probabilities sum to {sum(rp.probabilities)}")
    for k, (p, tr) in enumerate(rp.entries):
        if not 0 <= p <= 1:
            problems.append(f"entry {k}: probability {p}")
        if p > 0:
            if tr.start != tuple(a) or tr.end != tuple(b):
                problems.append(f"entry {k}: wrong endpoints")
            cert = check_collision_free(tr)
            if not cert.clear:
                problems.append(f"entry {k}: collision {cert.to_dict()}")
    return problems


def plan_continuity_probe(
    t: RootedTree,
    seed: int,
    trials: int,
    *,
    agents: int = 2,
    deltas: Sequence[Fraction] = DELTAS,
) -> ProbeReport:
    """Same probe for the deterministic planner, staying inside one stratum.

    Agents on essential vertices stay put and no move changes how two agents
    compare in the root order.
    """
    g = t.graph
    skip, guard = at_essential(t), order_preserving_guard(t)
    rows = []
    for trial in range(trials):
        rng = random.Random(f"{seed}:{trial}")
        a = random_configuration(g, agents, rng)
        b = random_configuration(g, agents, rng)
        base = plan(t, a, b).combined
        row = []
        for delta in deltas:
            prng = random.Random(f"{seed}:{trial}:perturb")
            a2 = perturb(g, a, delta, prng, skip=skip, guard=guard)
            b2 = perturb(g, b, delta, prng, skip=skip, guard=guard)
            row.append(sup_distance(base, plan(t, a2, b2).combined))
        rows.append(row)
    return ProbeReport(tuple(deltas), rows)


def degree_two_probe(
    t: RootedTree,
    seed: int,
    trials: int,
    *,
    agents: int = 2,
    deltas: Sequence[Fraction] = DELTAS,
) -> ProbeReport:
    """Plans must not notice degree-2 vertices.

    Every edge of ``t`` is split in two, one agent of the start configuration
    is placed on a new midpoint vertex and then nudged off it; the plan must
    move by an amount that vanishes with the nudge.
    """
    fine = RootedTree(subdivide(t.graph, 2), t.root)
    g = fine.graph
    mids = sorted(v for v in g.vertices if g.degree(v) == 2)
    rows = []
    for trial in range(trials):
        rng = random.Random(f"{seed}:{trial}")
        b = random_configuration(g, agents, rng, vertex_rate=0)
        while True:
            a = list(random_configuration(g, agents, rng, vertex_rate=0))
            a[0] = Vertex(rng.choice(mids))
            if len(set(a)) == agents:
                break
        base = plan(fine, a, b).combined
        row = []
        for delta in deltas:
            prng = random.Random(f"{seed}:{trial}:perturb")
            a2 = perturb(g, a, delta, prng, skip=lambda i, p: i != 0, guard=order_preserving_guard(fine))
            row.append(sup_distance(base, plan(fine, a2, b).combined))
        rows.append(row)
    return ProbeReport(tuple(deltas), rows)
