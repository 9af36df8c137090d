import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphmotion import catalog
from graphmotion.errors import ParseError, PointNotOnGraph, RootNotUnivalent, ValidationError
from graphmotion.graph import (
    Configuration,
    Edge,
    EdgePoint,
    Graph,
    RootedTree,
    Vertex,
    configuration_to_dict,
    essential_vertices,
    first_betti,
    graph_distance,
    graph_to_dict,
    parse_configuration,
    parse_graph,
    parse_point,
    precedes,
    root_tree,
    subdivide,
    to_fraction,
)

from helpers import ep, points

Y_DOC = {
    "vertices": ["c", "a", "b", "r"],
    "edges": [{"ends": ["c", "a"]}, {"ends": ["c", "b"]}, {"ends": ["c", "r"]}],
}


def test_parse_y_document():
    g = parse_graph(json.dumps(Y_DOC))
    assert len(g.vertices) == 4 and len(g.edges) == 3
    assert all(e.length == 1 for e in g.edges.values())
    assert "c-a" in g.edges


def test_single_edge_has_no_cycle():
    assert first_betti(catalog.interval()) == 0


def test_two_components_rejected():
    doc = {"vertices": ["a", "b", "c", "d"], "edges": [{"ends": ["a", "b"]}, {"ends": ["c", "d"]}]}
    with pytest.raises(ValidationError):
        parse_graph(doc)


@pytest.mark.parametrize(
    "doc, err",
    [
        ("{not json", ParseError),
        ({"vertices": ["a"]}, ParseError),
        ({"vertices": ["a", "b"], "edges": [{"ends": ["a", "a"]}]}, ValidationError),
        ({"vertices": ["a", "b"], "edges": [{"ends": ["a", "b"], "length": 0}]}, ValidationError),
        ({"vertices": ["a", "b"], "edges": [{"ends": ["a", "b"]}, {"id": "x", "ends": ["b", "a"]}]}, ValidationError),
        ({"vertices": ["a", "b"], "edges": [{"ends": ["a", "z"]}]}, ValidationError),
    ],
)
def test_malformed_graphs(doc, err):
    with pytest.raises(err):
        parse_graph(doc if isinstance(doc, str) else json.dumps(doc), source="g.json")


def test_parse_error_reports_location():
    with pytest.raises(ParseError) as info:
        parse_graph('{"vertices": [}', source="g.json")
    assert info.value.source.startswith("g.json:1:")
    assert info.value.to_dict()["code"] == "parse_error"


def test_lengths_are_exact():
    g = parse_graph({"vertices": ["a", "b"], "edges": [{"ends": ["a", "b"], "length": "1/3"}]})
    assert g.edges["a-b"].length == Fraction(1, 3)
    assert to_fraction(0.1) == Fraction(1, 10)
    assert isinstance(Edge("e", "a", "b", 2).length, Fraction)


def test_essential_vertices():
    assert essential_vertices(catalog.y_tree()) == ["c"]
    assert essential_vertices(catalog.h_tree()) == ["v1", "v2"]
    assert essential_vertices(catalog.interval()) == []


def test_first_betti():
    assert first_betti(catalog.y_tree()) == 0
    assert first_betti(catalog.cycle(3)) == 1
    assert first_betti(catalog.complete(5)) == 6
    assert first_betti(catalog.figure_eight()) == 2


def test_root_tree_y():
    t = root_tree(catalog.y_tree(), "r")
    assert t.root_edge == "cr"
    assert t.descending["c"] == "cr"
    assert set(t.ascending["c"]) == {"ca", "cb"}


def test_root_tree_h():
    t = root_tree(catalog.h_tree(), "a")
    assert set(t.ascending["v1"]) == {"v1b", "v1v2"}


def test_root_must_be_univalent():
    with pytest.raises(RootNotUnivalent):
        root_tree(catalog.y_tree(), "c")


def test_root_needs_tree():
    with pytest.raises(ValidationError):
        root_tree(catalog.cycle(3), "x0")


def test_precedes_examples(y):
    x, below = ep("ca", "1/2"), ep("cr", "1/2")
    assert precedes(y, x, below)
    assert not precedes(y, below, x)
    other = ep("cb", "1/2")
    assert not precedes(y, x, other) and not precedes(y, other, x)
    assert not precedes(y, x, x)


def test_precedes_along_one_branch(y):
    far, near = ep("ca", "4/5"), ep("ca", "3/10")
    assert precedes(y, far, near)
    assert precedes(y, Vertex("a"), Vertex("c"))
    assert precedes(y, Vertex("c"), Vertex("r"))


def test_distance_examples():
    g = catalog.y_tree()
    assert graph_distance(g, Vertex("a"), Vertex("b")) == 2
    assert graph_distance(g, ep("ca", "1/4"), ep("ca", "1/4")) == 0
    assert graph_distance(g, ep("ca", "1/4"), ep("cb", "1/2")) == Fraction(3, 4)


def test_distance_on_a_cycle_takes_the_short_way():
    g = catalog.cycle(3)
    p, q = ep("x0x1", "1/10"), ep("x0x1", "9/10")
    assert graph_distance(g, p, q) == Fraction(4, 5)
    long = Graph(["a", "b", "c"], [Edge("ab", "a", "b", 10), Edge("bc", "b", "c"), Edge("ca", "c", "a")])
    assert graph_distance(long, ep("ab", "1/10"), ep("ab", "9/10")) == 4


def test_subdivide_examples():
    s = subdivide(catalog.interval(), 2)
    assert (len(s.vertices), len(s.edges)) == (3, 2)
    s = subdivide(catalog.y_tree(), 3)
    assert (len(s.vertices), len(s.edges)) == (10, 9)
    assert len(essential_vertices(s)) == 1
    g = catalog.h_tree()
    assert subdivide(g, 1) == g


def test_points_are_canonical():
    g = catalog.y_tree()
    assert g.point_on_edge("ca", 0) == Vertex("c")
    assert g.point_on_edge("ca", 1) == Vertex("a")
    with pytest.raises(ValueError):
        EdgePoint("ca", 1)
    with pytest.raises(PointNotOnGraph):
        g.check_point(Vertex("zz"))


def test_point_documents_round_trip():
    g = catalog.y_tree()
    c = Configuration([Vertex("a"), ep("cb", "1/3")])
    assert parse_configuration(g, configuration_to_dict(c)) == c
    assert parse_point(g, {"edge": "ca", "t": 1 - 1e-13}) == Vertex("a")
    with pytest.raises(ValidationError):
        parse_configuration(g, {"points": [{"vertex": "a"}, {"edge": "ca", "t": 1}]})
    assert parse_graph(graph_to_dict(g)) == g


def _sub_point(p, k):
    """Same physical point as ``p`` expressed on ``subdivide(g, k)``."""
    if isinstance(p, Vertex):
        return p
    j = int(p.t * k)
    s = p.t * k - j
    if s == 0:
        return Vertex(p.edge + f":{j}") if 0 < j < k else p
    return EdgePoint(f"{p.edge}:{j}", s)


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_metric_axioms(data):
    g = catalog.h_tree()
    x, y_, z = (data.draw(points(g)) for _ in range(3))
    d = lambda p, q: graph_distance(g, p, q)
    assert d(x, y_) == d(y_, x) >= 0
    assert (d(x, y_) == 0) == (x == y_)
    assert d(x, z) <= d(x, y_) + d(y_, z)


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_subdivision_preserves_distances(data):
    g = catalog.h_tree()
    s = subdivide(g, 2)
    x, y_ = data.draw(points(g)), data.draw(points(g))
    assert graph_distance(s, _sub_point(x, 2), _sub_point(y_, 2)) == graph_distance(g, x, y_)


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_root_order_is_a_strict_partial_order(data):
    t = RootedTree(catalog.caterpillar(), "a")
    x, y_, z = (data.draw(points(t.graph)) for _ in range(3))
    assert not t.precedes(x, x)
    assert not (t.precedes(x, y_) and t.precedes(y_, x))
    if t.precedes(x, y_) and t.precedes(y_, z):
        assert t.precedes(x, z)


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_root_order_matches_path_definition(data):
    t = RootedTree(catalog.h_tree(), "a")
    x, y_ = data.draw(points(t.graph)), data.draw(points(t.graph))
    root = Vertex(t.root)
    d = lambda p, q: graph_distance(t.graph, p, q)
    on_path = x != y_ and d(x, y_) + d(y_, root) == d(x, root)
    assert t.precedes(x, y_) == on_path
