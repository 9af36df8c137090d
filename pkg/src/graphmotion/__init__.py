"""Collision-free motion planning for labelled points on metric trees.

Exact rational geometry throughout: a deterministic planner with ``2m + 1``
continuity domains, its random counterpart with ``2m + 1`` weighted paths,
closed-form topological complexity values, and a discretized configuration
complex that cross-checks them.
"""

from .errors import GraphMotionError, InvariantViolation, ParseError, ValidationError
from .graph import (
    Configuration,
    Edge,
    EdgePoint,
    Graph,
    RootedTree,
    Vertex,
    essential_vertices,
    first_betti,
    graph_distance,
    parse_configuration,
    parse_graph,
    precedes,
    root_tree,
    subdivide,
)
from .invariants import TCReport, circle_count_B2, circle_count_F2, tc_conf_tree, tc_graph
from .motion import Trajectory, check_collision_free, sup_distance
from .oracle import build_complex, connected_components
from .planner import PlanStages, domain_index, plan, stratum
from .random_planner import BumpParams, RandomPlan, random_plan

__version__ = "0.1.0"
