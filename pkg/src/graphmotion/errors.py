"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI reports
alongside the message.
"""

from __future__ import annotations


class GraphMotionError(Exception):
    code = "error"

    def __init__(self, message: str, *, source: str | None = None) -> None:
        super().__init__(message)
        self.source = source

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": str(self)}
        if self.source is not None:
            out["source"] = self.source
        return out


class ParseError(GraphMotionError):
    code = "parse_error"


class ValidationError(GraphMotionError):
    code = "validation_error"


class PointNotOnGraph(ValidationError):
    code = "point_not_on_graph"


class NotATree(ValidationError):
    code = "not_a_tree"


class RootNotUnivalent(ValidationError):
    code = "root_not_univalent"


class NoEssentialVertex(ValidationError):
    code = "no_essential_vertex"


class DimensionMismatch(ValidationError):
    code = "dimension_mismatch"


class NotOnRootEdge(ValidationError):
    code = "not_on_root_edge"


class MalformedTrajectory(ValidationError):
    code = "malformed_trajectory"


class EndpointMismatch(ValidationError):
    code = "endpoint_mismatch"


class AgentCountMismatch(ValidationError):
    code = "agent_count_mismatch"


class SubdivisionTooCoarse(ValidationError):
    code = "subdivision_too_coarse"


class NotConnected(ValidationError):
    code = "not_connected"


class SnapInfeasible(GraphMotionError):
    code = "snap_infeasible"


class InvariantViolation(GraphMotionError):
    """An internal guarantee failed; always a bug, never bad input."""

    code = "invariant_violation"
