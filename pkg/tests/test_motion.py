import random
from fractions import Fraction

import pytest

from graphmotion import catalog
from graphmotion.errors import EndpointMismatch, MalformedTrajectory
from graphmotion.graph import Configuration, EdgePoint, RootedTree, Vertex, graph_distance
from graphmotion.motion import (
    Trajectory,
    check_collision_free,
    concat,
    concat_many,
    endpoints,
    normalize_time,
    parse_trajectory,
    reverse,
    sup_distance,
    trajectory_to_dict,
)
from graphmotion.planner import plan
from graphmotion.sampling import random_configuration

from helpers import ep

Y = catalog.y_tree()


def walk(*points):
    """One agent visiting ``points`` at evenly spaced times."""
    k = len(points) - 1
    return Trajectory(Y, [[(Fraction(i, k), p) for i, p in enumerate(points)]])


def random_plans(count, seed=0, n=3):
    rng = random.Random(seed)
    t = RootedTree(catalog.h_tree(), "a")
    for _ in range(count):
        a = random_configuration(t.graph, n, rng)
        b = random_configuration(t.graph, n, rng)
        yield plan(t, a, b)


def test_constant_endpoints():
    c = Configuration([Vertex("a"), ep("cb", "1/2")])
    tr = Trajectory.constant(Y, c)
    assert endpoints(tr) == (c, c)
    assert reverse(tr) == tr
    assert concat(tr, tr) == Trajectory(Y, [[(0, p), (Fraction(1, 2), p), (1, p)] for p in c])
    assert normalize_time(concat(tr, tr)) == tr


def test_single_agent_walk():
    tr = walk(Vertex("a"), Vertex("c"))
    assert endpoints(tr) == ((Vertex("a"),), (Vertex("c"),))
    assert reverse(tr) == walk(Vertex("c"), Vertex("a"))
    assert tr.position(0, Fraction(1, 4)) == ep("ca", "3/4")


def test_concat_passes_through_the_hub():
    tr = concat(walk(Vertex("a"), Vertex("c")), walk(Vertex("c"), Vertex("b")))
    assert endpoints(tr) == ((Vertex("a"),), (Vertex("b"),))
    assert tr.position(0, Fraction(1, 2)) == Vertex("c")
    assert tr.arc_length() == 2


def test_concat_needs_matching_ends():
    with pytest.raises(EndpointMismatch):
        concat(walk(Vertex("a"), Vertex("c")), walk(Vertex("b"), Vertex("c")))


def test_steps_must_stay_on_one_edge():
    with pytest.raises(MalformedTrajectory):
        walk(Vertex("a"), Vertex("b"))
    with pytest.raises(MalformedTrajectory):
        Trajectory(Y, [[(0, Vertex("a")), (0, Vertex("c")), (1, Vertex("c"))]])


def test_normalize_drops_duplicates_and_collinear_points():
    tr = Trajectory(
        Y,
        [[(0, Vertex("a")), (Fraction(1, 4), ep("ca", "3/4")), (Fraction(1, 2), ep("ca", "1/2")), (1, ep("ca", "1/2"))]],
    )
    out = normalize_time(tr)
    assert [bp.point for bp in out.agents[0]] == [Vertex("a"), ep("ca", "1/2"), ep("ca", "1/2")]
    assert normalize_time(out) == out


def test_crossing_on_an_edge_collides_halfway():
    g = catalog.interval()
    tr = Trajectory(g, [[(0, Vertex("p")), (1, Vertex("q"))], [(0, Vertex("q")), (1, Vertex("p"))]])
    cert = check_collision_free(tr)
    assert not cert.clear
    assert cert.time == Fraction(1, 2)
    assert cert.position == ep("pq", "1/2")
    assert cert.agents == (0, 1)


def test_parked_agents_are_clear():
    assert check_collision_free(Trajectory.constant(Y, [Vertex("a"), Vertex("b")])).clear


def test_meeting_at_a_vertex_collides():
    tr = Trajectory(Y, [[(0, Vertex("a")), (1, Vertex("c"))], [(0, Vertex("b")), (1, Vertex("c"))]])
    cert = check_collision_free(tr)
    assert cert.time == 1 and cert.position == Vertex("c")


def test_following_is_clear_but_touching_is_not():
    chase = Trajectory(Y, [[(0, Vertex("a")), (1, ep("ca", "1/4"))], [(0, ep("ca", "1/2")), (1, Vertex("c"))]])
    assert check_collision_free(chase).clear
    catch = Trajectory(Y, [[(0, Vertex("a")), (1, Vertex("c"))], [(0, ep("ca", "1/2")), (1, ep("ca", "1/4"))]])
    assert check_collision_free(catch).time == Fraction(2, 3)


def test_sup_distance_basics():
    tr = walk(Vertex("a"), Vertex("c"), Vertex("b"))
    assert sup_distance(tr, tr) == 0
    x, y = Trajectory.constant(Y, [Vertex("a")]), Trajectory.constant(Y, [ep("cb", "1/2")])
    assert sup_distance(x, y) == Fraction(3, 2)
    assert sup_distance(tr, Trajectory.constant(Y, [Vertex("c")])) == 1


def test_sup_distance_sees_interior_maxima():
    there = walk(Vertex("a"), Vertex("c"))
    back = walk(Vertex("c"), Vertex("a"))
    assert sup_distance(there, back) == 1
    out_and_back = walk(Vertex("a"), Vertex("c"), Vertex("a"))
    still = Trajectory.constant(Y, [Vertex("a")])
    assert sup_distance(out_and_back, still) == 1


def test_document_round_trip():
    (stages,) = random_plans(1, seed=3)
    tr = stages.combined
    assert parse_trajectory(tr.graph, trajectory_to_dict(tr)) == tr


def test_reverse_properties_on_plans():
    for stages in random_plans(15):
        tr = stages.combined
        a, b = endpoints(tr)
        assert endpoints(reverse(tr)) == (b, a)
        assert reverse(reverse(tr)) == tr
        assert check_collision_free(reverse(tr)).clear
        assert check_collision_free(normalize_time(tr)).clear


def test_concat_of_stages_chains_endpoints():
    for stages in random_plans(10, seed=1):
        tr = concat(stages.descent_a, stages.permute)
        assert endpoints(tr) == (stages.descent_a.start, stages.permute.end)


def test_weighted_concat_is_associative():
    for stages in random_plans(10, seed=2):
        x, y, z = stages.descent_a, stages.permute, stages.slide
        wx, wy, wz = Fraction(2), Fraction(3), Fraction(5)
        left = concat(concat(x, y, wx / (wx + wy)), z, (wx + wy) / 10)
        right = concat(x, concat(y, z, wy / (wy + wz)), wx / 10)
        assert normalize_time(left) == normalize_time(right) == normalize_time(concat_many([x, y, z], [wx, wy, wz]))


def test_sup_distance_is_a_metric_on_plans():
    trs = [s.combined for s in random_plans(6, seed=4)]
    d = sup_distance
    for a in trs:
        for b in trs:
            assert d(a, b) == d(b, a)
            assert (d(a, b) == 0) == (a == b)
            for c in trs[:3]:
                assert d(a, c) <= d(a, b) + d(b, c)


def test_sup_distance_of_constants_is_graph_distance():
    g = catalog.h_tree()
    rng = random.Random(5)
    for _ in range(20):
        a = random_configuration(g, 1, rng)
        b = random_configuration(g, 1, rng)
        assert sup_distance(Trajectory.constant(g, a), Trajectory.constant(g, b)) == graph_distance(g, a[0], b[0])


def test_collision_time_is_exact_mid_edge():
    g = catalog.interval()
    tr = Trajectory(
        g,
        [[(0, Vertex("p")), (1, ep("pq", "2/3"))], [(0, Vertex("q")), (Fraction(1, 3), Vertex("q")), (1, ep("pq", "1/3"))]],
    )
    cert = check_collision_free(tr)
    # 2t/3 = 1 - (t - 1/3), t in [1/3, 1]
    assert cert.time == Fraction(4, 5)
    assert cert.position == EdgePoint("pq", Fraction(8, 15))
