"""Exception types shared across the package.

Validation failures carry the offending vertices/edges as data so the CLI
can emit them as structured JSON.
"""

from __future__ import annotations


class LpaError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(LpaError):
    def __init__(
        self,
        kind: str,
        message: str,
        vertices: tuple[str, ...] | list[str] = (),
        edges: tuple[str, ...] | list[str] = (),
    ) -> None:
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.vertices = tuple(sorted(vertices))
        self.edges = tuple(edges)

    def to_dict(self) -> dict:
        return {
            "error": self.kind,
            "message": self.message,
            "vertices": list(self.vertices),
            "edges": list(self.edges),
        }


class UnknownVertexError(ValidationError):
    def __init__(self, vertices) -> None:
        vs = sorted(vertices)
        super().__init__("unknown_vertex", f"unknown vertex: {', '.join(vs)}", vertices=vs)


class UnknownEdgeError(ValidationError):
    def __init__(self, edges) -> None:
        es = list(edges)
        super().__init__("unknown_edge", f"unknown edge: {', '.join(es)}", edges=es)


class GraphMismatchError(ValidationError):
    def __init__(self) -> None:
        super().__init__("graph_mismatch", "operands live on different graphs")


class CapacityError(LpaError):
    def __init__(self, message: str, limit: int, actual: int) -> None:
        super().__init__(message)
        self.message = message
        self.limit = limit
        self.actual = actual

    def to_dict(self) -> dict:
        return {"error": "capacity", "message": self.message, "limit": self.limit, "actual": self.actual}


class ContractViolation(LpaError):
    """An internal postcondition failed; this indicates a bug, not bad input."""
