"""Command-line interface.

Exit status: 0 on success, 1 when the input is rejected, 2 when an internal
guarantee fails (a bug). Errors are written to stderr as a JSON object with
``code``, ``message`` and, when known, ``source``.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import catalog
from .errors import GraphMotionError, InvariantViolation, NoEssentialVertex, ValidationError
from .graph import (
    RootedTree,
    configuration_to_dict,
    essential_vertices,
    parse_configuration,
    parse_graph,
    to_fraction,
)
from .invariants import (
    build_Y_complex,
    circle_count_B2,
    circle_count_F2,
    tc_configuration_space,
    tc_graph,
)
from .motion import check_collision_free, trajectory_to_dict
from .oracle import betti1_via_euler, build_complex, connected_components, summary
from .planner import plan
from .random_planner import BumpParams, random_plan

CIRCLE_COUNT_NOTE = {
    "ordered": "F(T, 2) is a wedge of sum (deg v - 1)(deg v - 2) - 1 circles",
    "unordered": "B(T, 2) is a wedge of sum (deg v - 1)(deg v - 2) / 2 circles",
}


def _read(path: str, what: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {what}: {exc.strerror}", source=path) from None


def _graph(args):
    return parse_graph(_read(args.graph, "graph"), source=args.graph)


def _tree(args) -> RootedTree:
    g = _graph(args)
    try:
        return RootedTree(g, args.root)
    except ValidationError as exc:
        exc.source = exc.source or args.graph
        raise


def _pair(args, t: RootedTree):
    a = parse_configuration(t.graph, _read(args.source, "start configuration"), source=args.source)
    b = parse_configuration(t.graph, _read(args.target, "goal configuration"), source=args.target)
    return a, b


def _recheck(trajectories) -> None:
    for label, tr in trajectories:
        cert = check_collision_free(tr)
        if not cert.clear:
            raise InvariantViolation(f"{label}: emitted path is not collision free: {cert.to_dict()}")


def cmd_plan(args) -> dict:
    t = _tree(args)
    a, b = _pair(args, t)
    stages = plan(t, a, b)
    if args.recheck:
        _recheck(stages.stages().items())
    return {
        "from": configuration_to_dict(a),
        "to": configuration_to_dict(b),
        "domain_index": stages.domain_index,
        "stages": {name: trajectory_to_dict(tr) for name, tr in stages.stages().items()},
        "citations": {
            "domain_index": "one domain per total number of agents on essential vertices, 2m + 1 in all",
        },
    }


def cmd_random_plan(args) -> dict:
    t = _tree(args)
    a, b = _pair(args, t)
    eps = BumpParams(to_fraction(args.eps)) if args.eps is not None else None
    rp = random_plan(t, a, b, eps)
    if args.recheck:
        _recheck((f"entry {k}", tr) for k, (p, tr) in enumerate(rp.entries) if p > 0)
    doc = rp.to_dict()
    doc["epsilon"] = str((eps or BumpParams.default(t.graph)).epsilon)
    doc["citations"] = {"entries": "2m + 1 paths, the upper bound for TC of configuration spaces of trees"}
    return doc


def cmd_tc(args) -> dict:
    g = _graph(args)
    doc = {"graph": tc_graph(g).to_dict()}
    if args.agents is not None:
        try:
            doc["configuration_space"] = tc_configuration_space(g, args.agents).to_dict()
        except NoEssentialVertex as exc:
            doc["configuration_space"] = {"kind": "unknown", "reason": str(exc)}
    return doc


def cmd_analyze(args) -> dict:
    t = _tree(args)
    ess = essential_vertices(t.graph)
    if not ess:
        raise NoEssentialVertex("the tree has no essential vertex", source=args.graph)
    return {
        "essential_vertices": ess,
        "m": len(ess),
        "degrees": {v: t.graph.degree(v) for v in ess},
        "circle_count_ordered": circle_count_F2(t),
        "circle_count_unordered": circle_count_B2(t),
        "y_complex": build_Y_complex(t).to_dict(),
        "citations": CIRCLE_COUNT_NOTE,
    }


def cmd_discretize(args) -> dict:
    g = _graph(args)
    c = build_complex(g, args.agents, args.subdivision, ordered=not args.unordered)
    return summary(c)


# -- verify ---------------------------------------------------------------------------


def _suite_rows() -> list[tuple[str, str, str, int]]:
    """(graph name, check, kind, expected) for the default suite."""
    rows = []
    for name, (factory, root) in catalog.TREE_SUITE.items():
        t = RootedTree(factory(), root)
        rows.append((name, "b1 ordered n=2", "==", circle_count_F2(t)))
        rows.append((name, "b1 unordered n=2", "==", circle_count_B2(t)))
        rows.append((name, "components n=2", "==", 1))
        rows.append((name, "components n=3", "==", 1))
    rows.append(("interval", "components n=2", "==", 2))
    rows.append(("circle", "components n=3", ">=", 2))
    return rows


def _suite_graph(name: str):
    if name in catalog.TREE_SUITE:
        return catalog.TREE_SUITE[name][0]()
    return {"interval": catalog.interval, "circle": catalog.cycle}[name]()


def _run_row(row: tuple[str, str, str, int]) -> dict:
    name, check, kind, expected = row
    what, rest = check.rsplit(" n=", 1)
    n = int(rest)
    c = build_complex(_suite_graph(name), n, ordered=what != "b1 unordered")
    got = betti1_via_euler(c) if what.startswith("b1") else connected_components(c)
    ok = got == expected if kind == "==" else got >= expected
    return {"graph": name, "check": check, "expected": f"{kind} {expected}", "observed": got, "pass": ok}


def cmd_verify(args) -> dict:
    if args.suite != "default":
        raise ValidationError(f"unknown suite {args.suite!r}")
    rows = _suite_rows()
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_run_row, rows))
    else:
        results = [_run_row(r) for r in rows]
    return {
        "rows": results,
        "all_pass": all(r["pass"] for r in results),
        "citations": {
            **CIRCLE_COUNT_NOTE,
            "components": "configuration spaces of trees with an essential vertex are connected; "
            "two points on an interval or three on a circle cannot be reordered",
        },
    }


# -- entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphmotion", description="Collision-free motion of labelled points on graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def tree_args(sp, pair: bool) -> None:
        sp.add_argument("--graph", required=True, help="graph JSON document")
        sp.add_argument("--root", required=True, help="univalent root vertex")
        if pair:
            sp.add_argument("--from", dest="source", required=True, help="start configuration JSON")
            sp.add_argument("--to", dest="target", required=True, help="goal configuration JSON")
            sp.add_argument("--recheck", action="store_true", help="re-run the collision check on every emitted path")

    sp = sub.add_parser("plan", help="deterministic plan between two configurations")
    tree_args(sp, True)
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("random-plan", help="plan with 2m + 1 weighted paths")
    tree_args(sp, True)
    sp.add_argument("--eps", help="bump radius, e.g. 0.05 or 1/20 (default: shortest edge / 10)")
    sp.set_defaults(func=cmd_random_plan)

    sp = sub.add_parser("tc", help="topological complexity of the graph and its configuration space")
    sp.add_argument("--graph", required=True, help="graph JSON document")
    sp.add_argument("--agents", type=int, help="number of agents for the configuration space")
    sp.set_defaults(func=cmd_tc)

    sp = sub.add_parser("analyze", help="essential vertices, circle counts and the two-point complex")
    tree_args(sp, False)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("verify", help="cross-check closed forms against the discrete complex")
    sp.add_argument("--suite", default="default", help="suite name (only 'default')")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("discretize", help="cell counts of the discretized configuration complex")
    sp.add_argument("--graph", required=True, help="graph JSON document")
    sp.add_argument("--agents", type=int, required=True, help="number of agents")
    sp.add_argument("--subdivision", type=int, help="pieces per edge (default agents + 1)")
    sp.add_argument("--unordered", action="store_true", help="count unordered configurations")
    sp.set_defaults(func=cmd_discretize)

    for sp in sub.choices.values():
        sp.add_argument("--out", help="write the document here instead of stdout")
    return p


def _fail(exc: GraphMotionError) -> int:
    print(json.dumps({"error": exc.to_dict()}), file=sys.stderr)
    return 2 if isinstance(exc, InvariantViolation) else 1


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = args.func(args)
    except GraphMotionError as exc:
        return _fail(exc)
    except ValueError as exc:
        return _fail(ValidationError(str(exc)))
    text = json.dumps(doc, indent=2, sort_keys=False, default=_default) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if doc.get("all_pass") is False:
        return 2
    return 0


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


if __name__ == "__main__":
    sys.exit(main())
