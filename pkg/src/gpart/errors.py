"""Exception hierarchy shared across the toolkit.

Input-side problems (bad files, malformed graphs, unusable instances)
derive from GraphInputError; algorithmic failures at runtime get their
own classes so callers can map them to distinct exit codes.
"""

from __future__ import annotations


class GPartError(Exception):
    """Base class for all toolkit errors."""


class GraphInputError(GPartError):
    """A graph, partition, or file violates an input contract."""


class ParseError(GraphInputError):
    """A graph or partition file failed to parse."""

    def __init__(self, path: str, line_no: int, message: str) -> None:
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class DisconnectedGraphError(GraphInputError):
    """The operation requires a connected graph."""


class GraphTooLargeError(GPartError):
    """The instance exceeds the exhaustive-enumeration bound."""


class ConvergenceError(GPartError):
    """An iterative solver hit its iteration cap before reaching tolerance."""


class TrainingDivergedError(GPartError):
    """Training produced a non-finite loss."""
