"""Exception hierarchy shared across the engine."""

from __future__ import annotations


class GraphError(Exception):
    """Base class for all engine errors."""


class GraphSyntaxError(GraphError):
    """Malformed graph file text (not valid JSON)."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, col {col})")
        self.line = line
        self.col = col


class SchemaError(GraphError):
    """Structurally valid JSON that violates the GraphFile schema."""

    def __init__(self, field: str, message: str = ""):
        super().__init__(f"schema violation at {field!r}" + (f": {message}" if message else ""))
        self.field = field


class SemanticError(GraphError):
    """Graph content that violates a domain invariant."""


class DuplicatePathError(SemanticError):
    pass


class DanglingEdgeError(SemanticError):
    pass


class DataToDataEdgeError(SemanticError):
    pass


class DuplicateEdgeError(SemanticError):
    pass


class UnattachedDataNodeError(SemanticError):
    pass


class NotAMetaNodeError(GraphError):
    pass


class NotExpandableError(GraphError):
    pass


class UnknownNodeError(GraphError):
    pass


class UnknownPortError(GraphError):
    pass


class UnknownPileError(GraphError):
    pass


class InvalidFrontierError(GraphError):
    pass


class InvalidSpecError(GraphError):
    pass


class UnresolvedEndpointError(GraphError):
    pass


class StaleRevisionError(GraphError):
    pass
