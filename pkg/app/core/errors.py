"""
Error types raised by the graph services.

Every error is a ValueError so routes can keep translating ValueError into
HTTP 400 and the CLI can map the subclasses onto exit codes.
"""

from typing import Optional


class TwinWLError(ValueError):
    """Base class for all domain errors"""


class GraphParseError(TwinWLError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidPartitionError(TwinWLError):
    pass


class ContractionError(TwinWLError):
    def __init__(self, message: str, step: Optional[int] = None):
        self.step = step
        if step is not None:
            message = f"step {step}: {message}"
        super().__init__(message)


class PreconditionError(TwinWLError):
    pass


class BudgetRefusedError(TwinWLError):
    pass


class InvariantViolationError(TwinWLError):
    """Internal consistency check failed; indicates a bug"""
