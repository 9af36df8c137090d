from fractions import Fraction

from hypothesis import strategies as st

from graphmotion.graph import EdgePoint, Vertex


def points(g):
    """Hypothesis strategy for points of ``g`` (vertices and edge interiors)."""
    vertex = st.sampled_from(g.vertices).map(Vertex)
    interior = st.builds(
        EdgePoint,
        st.sampled_from(sorted(g.edges)),
        st.fractions(min_value=0, max_value=1, max_denominator=64).filter(lambda t: 0 < t < 1),
    )
    return st.one_of(vertex, interior)


def ep(edge, t):
    return EdgePoint(edge, Fraction(t))
