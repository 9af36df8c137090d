"""Closed-form topological complexity values and circle counts.

``TC(X)`` is the least number of open sets covering ``X x X`` each of which
carries a continuous motion planner; for a graph ``G`` it is determined by
the first Betti number, and for configuration spaces of trees by the number
``m`` of essential vertices (at least for enough agents).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial

import networkx as nx

from .errors import NoEssentialVertex, NotATree
from .graph import Graph, RootedTree, essential_vertices, first_betti

# Justification tags
GRAPH_FORMULA = "graph-formula"
TREE_PAIR_FORMULA = "tree-pair-formula"
MAIN_THEOREM = "main-theorem"
UPPER_BOUND_ONLY = "upper-bound-only"
KNOWN_SURFACE_VALUE = "known-surface-value"

_NOTES = {
    GRAPH_FORMULA: "TC of a connected graph is 1, 2 or 3 for b1 = 0, 1, >= 2",
    TREE_PAIR_FORMULA: "TC(F(T, 2)) of a tree is 2 for a Y-shaped tree and 3 otherwise",
    MAIN_THEOREM: "TC(F(T, n)) = 2m + 1 for a tree with m essential vertices once n >= 2m "
    "(and 3 whenever m = 1, excluding the Y-shaped tree with two agents)",
    UPPER_BOUND_ONLY: "TC(F(G, n)) <= 2m + 1 since F(G, n) is homotopy equivalent to a complex of dimension <= m",
    KNOWN_SURFACE_VALUE: "F(K5, 2) and F(K33, 2) are closed orientable surfaces of genus 6 and 4",
}


@dataclass(frozen=True)
class TCReport:
    lower: int
    upper: int
    justification: str
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")

    @property
    def kind(self) -> str:
        return "exact" if self.lower == self.upper else "interval"

    @property
    def value(self) -> int | None:
        return self.lower if self.lower == self.upper else None

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "justification": self.justification}
        if self.kind == "exact":
            out["value"] = self.lower
        else:
            out["lower"], out["upper"] = self.lower, self.upper
        out["citation"] = _NOTES[self.justification]
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def exact(value: int, justification: str, *notes: str) -> TCReport:
    return TCReport(value, value, justification, notes)


def tc_graph(g: Graph) -> TCReport:
    b1 = first_betti(g)
    return exact(min(b1, 2) + 1, GRAPH_FORMULA, f"b1 = {b1}")


def _essential_count(g: Graph) -> int:
    m = len(essential_vertices(g))
    if m == 0:
        raise NoEssentialVertex("graph has no essential vertex")
    return m


def tc_conf_upper(g: Graph, n: int) -> int:
    if n < 1:
        raise ValueError("need at least one agent")
    return 2 * _essential_count(g) + 1


def is_y_shaped(g: Graph) -> bool:
    """True when ``g`` is homeomorphic to the letter Y (a tree with 3 leaves after suppressing degree 2)."""
    if not g.is_tree():
        return False
    ess = essential_vertices(g)
    return len(ess) == 1 and g.degree(ess[0]) == 3


def tc_conf_tree(g: Graph | RootedTree, n: int) -> TCReport:
    """TC of the configuration space of ``n`` labelled points on a tree.

    Outside the range where the value is known the result is the interval
    ``[3, 2m + 1]``.
    """
    if isinstance(g, RootedTree):
        g = g.graph
    if not g.is_tree():
        raise NotATree("configuration-space formula needs a tree")
    m = _essential_count(g)
    if n < 2:
        raise ValueError("need at least two agents")
    if n == 2:
        if is_y_shaped(g):
            return exact(2, TREE_PAIR_FORMULA, "F(Y, 2) is homotopy equivalent to a circle")
        return exact(3, TREE_PAIR_FORMULA)
    if m == 1:
        return exact(3, MAIN_THEOREM, "one essential vertex: F is a wedge of more than one circle")
    if n >= 2 * m:
        return exact(2 * m + 1, MAIN_THEOREM)
    return TCReport(3, 2 * m + 1, UPPER_BOUND_ONLY, (f"n = {n} < 2m = {2 * m}: value not determined",))


def _sigma(g: Graph) -> int:
    return sum((g.degree(v) - 1) * (g.degree(v) - 2) for v in g.vertices)


def _require_tree_with_essential(g: Graph | RootedTree) -> Graph:
    if isinstance(g, RootedTree):
        g = g.graph
    if not g.is_tree():
        raise NotATree("circle counts are for trees")
    _essential_count(g)
    return g


def circle_count_F2(g: Graph | RootedTree) -> int:
    """Number of circles in the wedge that F(T, 2) is homotopy equivalent to."""
    return _sigma(_require_tree_with_essential(g)) - 1


def circle_count_B2(g: Graph | RootedTree) -> int:
    """Number of circles for the unordered space B(T, 2) = F(T, 2)/Z2."""
    return _sigma(_require_tree_with_essential(g)) // 2


@dataclass(frozen=True)
class YCell:
    vertex: str
    pair: tuple[str, str]

    def swapped(self) -> "YCell":
        return YCell(self.vertex, (self.pair[1], self.pair[0]))


@dataclass(frozen=True)
class YComplex:
    """Two vertices A and B joined by one edge per ordered pair of distinct
    ascending edges at an essential vertex, with the free involution that
    swaps A and B and reverses each pair."""

    cells: tuple[YCell, ...]
    vertices: tuple[str, str] = ("A", "B")

    def involution(self, cell: YCell) -> YCell:
        return cell.swapped()

    def involution_on_vertex(self, v: str) -> str:
        return {"A": "B", "B": "A"}[v]

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.cells)

    @property
    def rank(self) -> int:
        """First Betti number (number of circles in the wedge)."""
        return 1 - self.euler_characteristic

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "cells": [{"vertex": c.vertex, "pair": list(c.pair)} for c in self.cells],
            "rank": self.rank,
        }


def build_Y_complex(t: RootedTree) -> YComplex:
    ess = essential_vertices(t.graph)
    if not ess:
        raise NoEssentialVertex("tree has no essential vertex")
    cells = [
        YCell(v, pair) for v in ess for pair in itertools.permutations(t.ascending[v], 2)
    ]
    return YComplex(tuple(cells))


def ghrist_wedge_count(eta: int, n: int, variant: str = "corrected") -> int:
    """Circles in the wedge homotopy equivalent to F(star with eta prongs, n).

    ``corrected`` uses ``1 + ((n-1)(eta-2) - 1) (n+eta-2)! / (eta-1)!``, which
    agrees with the two-particle count for every eta. ``printed`` uses
    ``(n+eta+2)!`` in place of ``(n+eta-2)!``; it already disagrees at
    ``eta = 4, n = 2`` (6721 against 5) and is kept only for comparison.
    """
    if eta < 3 or n < 2:
        raise ValueError("need eta >= 3 and n >= 2")
    if variant == "corrected":
        top = factorial(n + eta - 2)
    elif variant == "printed":
        top = factorial(n + eta + 2)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    q, r = divmod(((n - 1) * (eta - 2) - 1) * top, factorial(eta - 1))
    if r:
        raise AssertionError("factorial ratio is not an integer")
    return 1 + q


_KNOWN = {
    ("K5", 2): (5, "F(K5, 2) is homotopy equivalent to a closed orientable surface of genus 6"),
    ("K3,3", 2): (5, "F(K3,3, 2) is homotopy equivalent to a closed orientable surface of genus 4"),
}


def known_values() -> dict[tuple[str, int], int]:
    return {key: value for key, (value, _) in _KNOWN.items()}


def known_value_note(name: str, n: int) -> str | None:
    entry = _KNOWN.get((name, n))
    return entry[1] if entry else None


def identify_known_graph(g: Graph) -> str | None:
    """Name of the table entry isomorphic to ``g`` (ignoring lengths), if any."""
    if nx.is_isomorphic(g.nx, nx.complete_graph(5)):
        return "K5"
    if nx.is_isomorphic(g.nx, nx.complete_bipartite_graph(3, 3)):
        return "K3,3"
    return None


def tc_configuration_space(g: Graph, n: int) -> TCReport:
    """Best available statement about TC(F(g, n)) for any connected graph."""
    if n < 1:
        raise ValueError("need at least one agent")
    if n == 1:
        return tc_graph(g)
    name = identify_known_graph(g)
    if name is not None and (name, n) in _KNOWN:
        value, note = _KNOWN[(name, n)]
        return exact(value, KNOWN_SURFACE_VALUE, note)
    if g.is_tree():
        return tc_conf_tree(g, n)
    upper = tc_conf_upper(g, n)
    return TCReport(1, upper, UPPER_BOUND_ONLY)

