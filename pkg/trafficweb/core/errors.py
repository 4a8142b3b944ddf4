"""Error types raised across the package.

Everything derives from ValueError so callers that only know about
ValueError keep working.
"""
from typing import Optional


class TrafficWebError(ValueError):
    """Base class for all package errors"""


class ParameterDomainError(TrafficWebError):
    """A parameter, weight or theory argument lies outside its domain"""


class EmptyDistributionError(TrafficWebError):
    """Sampling was requested from an index whose total weight is zero"""


class EmptyInputError(TrafficWebError):
    """An operation received no samples, nodes or edges"""


class UnreliableFitError(TrafficWebError):
    """A fit cannot be trusted: tail too small, no spread, or too few classes"""


class EdgeListParseError(TrafficWebError):
    def __init__(self, message: str, line_no: Optional[int] = None, path: Optional[str] = None):
        self.line_no = line_no
        self.path = path
        location = ""
        if path:
            location += f"{path}:"
        if line_no is not None:
            location += f"line {line_no}: "
        elif location:
            location += " "
        super().__init__(f"{location}{message}")
