import random
from fractions import Fraction

import pytest

from graphmotion import catalog
from graphmotion.errors import NoEssentialVertex, ValidationError
from graphmotion.graph import Configuration, RootedTree, Vertex
from graphmotion.planner import domain_index, plan
from graphmotion.random_planner import (
    BumpParams,
    check_random_plan,
    continuity_probe,
    occupancy_weights,
    random_plan,
    snapped_plan,
    vertex_occupancy,
    vertex_proximity,
)
from graphmotion.sampling import near_vertex_on, random_configuration

from helpers import ep

EPS = BumpParams(Fraction(1, 10))


def test_bump_params():
    g = catalog.y_tree()
    assert BumpParams.default(g).epsilon == Fraction(1, 10)
    with pytest.raises(ValidationError):
        BumpParams(Fraction(1, 2)).check(g)
    with pytest.raises(ValidationError):
        BumpParams(Fraction(0)).check(g)


def test_proximity(y):
    near = near_vertex_on(y.graph, "c", "ca", Fraction(1, 20))
    assert vertex_proximity(y, [Vertex("c"), ep("ca", "1/2"), near], EPS) == [1, 0, Fraction(1, 2)]
    assert vertex_proximity(y, [Vertex("a")], EPS) == [0]


def test_occupancy_uses_the_nearest_agent(y):
    near = near_vertex_on(y.graph, "c", "ca", Fraction(1, 20))
    nearer = near_vertex_on(y.graph, "c", "cb", Fraction(1, 40))
    assert vertex_occupancy(y, [near, nearer], EPS) == [("c", Fraction(3, 4), 1)]
    assert vertex_occupancy(y, [ep("ca", "1/2")], EPS) == [("c", 0, None)]


def test_occupancy_weights():
    assert occupancy_weights([0, 0, 0]) == [1, 0, 0, 0]
    assert occupancy_weights([1, 0]) == [0, 1, 0]
    h = Fraction(1, 2)
    assert occupancy_weights([h, h]) == [Fraction(1, 4), h, Fraction(1, 4)]
    rng = random.Random(0)
    for _ in range(50):
        b = [Fraction(rng.randint(0, 7), 7) for _ in range(rng.randint(0, 5))]
        assert sum(occupancy_weights(b)) == 1


def test_far_from_vertices(y):
    a = Configuration([ep("ca", "1/2"), ep("cb", "1/2")])
    b = Configuration([ep("cb", "1/2"), ep("ca", "1/2")])
    rp = random_plan(y, a, b, EPS)
    assert rp.probabilities == [1, 0, 0]
    assert rp.entries[0][1] == plan(y, a, b).combined
    assert check_random_plan(y, a, b, rp) == []


def test_agent_on_the_vertex(y):
    a = Configuration([Vertex("c"), ep("cb", "1/2")])
    b = Configuration([ep("cb", "1/2"), ep("ca", "1/2")])
    rp = random_plan(y, a, b, EPS)
    assert rp.probabilities == [0, 1, 0]
    assert rp.entries[1][1] == plan(y, a, b).combined


def test_half_way_into_the_bump(y):
    a = Configuration([near_vertex_on(y.graph, "c", "ca", Fraction(1, 20)), ep("cb", "1/2")])
    b = Configuration([ep("cb", "1/2"), ep("ca", "1/2")])
    rp = random_plan(y, a, b, EPS)
    assert rp.probabilities == [Fraction(1, 2), Fraction(1, 2), 0]
    assert check_random_plan(y, a, b, rp) == []
    snapped = rp.entries[1][1]
    assert snapped.configuration_at(snapped.agents[0][1].time)[0] == Vertex("c")


def test_both_sides_near_vertices(h):
    g = h.graph
    a = Configuration([near_vertex_on(g, "v1", "v1b", Fraction(1, 50)), near_vertex_on(g, "v2", "v2c", Fraction(3, 50))])
    b = Configuration([Vertex("v2"), near_vertex_on(g, "v1", "v1v2", Fraction(1, 25))])
    rp = random_plan(h, a, b, EPS)
    assert len(rp) == 5
    assert sum(rp.probabilities) == 1
    assert rp.probabilities[0] == 0
    assert all(p > 0 for p in rp.probabilities[1:])
    assert check_random_plan(h, a, b, rp) == []
    assert domain_index(h, a, b) == 1


def test_snapped_plan_reaches_its_stratum(h):
    a = Configuration([near_vertex_on(h.graph, "v1", "v1b", Fraction(1, 50)), ep("v2d", "1/2")])
    b = Configuration([ep("v2c", "1/2"), ep("v1b", "1/2")])
    tr = snapped_plan(h, a, b, 1, EPS)
    assert (tr.start, tr.end) == (a, b)
    assert Vertex("v1") in {bp.point for bp in tr.agents[0]}


def test_vertex_exact_pairs_are_one_hot(h):
    rng = random.Random(3)
    for _ in range(30):
        a = random_configuration(h.graph, 3, rng, vertex_rate=0.5)
        b = random_configuration(h.graph, 3, rng, vertex_rate=0.5)
        if any(0 < w < 1 for _, w, _ in vertex_occupancy(h, a) + vertex_occupancy(h, b)):
            continue
        rp = random_plan(h, a, b)
        k = domain_index(h, a, b)
        assert rp.probabilities == [int(j == k) for j in range(5)]
        assert rp.entries[k][1] == plan(h, a, b).combined


def test_needs_an_essential_vertex():
    t = RootedTree(catalog.path(2), "p0")
    with pytest.raises(NoEssentialVertex):
        random_plan(t, [Vertex("p1")], [Vertex("p2")])


def test_document_has_exact_probabilities(y):
    a = Configuration([near_vertex_on(y.graph, "c", "ca", Fraction(1, 30)), ep("cb", "1/2")])
    b = Configuration([ep("cb", "1/2"), ep("ca", "1/2")])
    doc = random_plan(y, a, b, EPS).to_dict()
    assert [e["p"] for e in doc["entries"]] == ["1/3", "2/3", "0"]


def test_probe_on_y(y):
    report = continuity_probe(y, seed=0, trials=15)
    assert report.monotone
    assert report.maxima[-1] < report.maxima[0] / 10
