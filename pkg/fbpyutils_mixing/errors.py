"""Domain exceptions.

All errors derive from ``ValueError`` so code that guards calls with ``except ValueError`` keeps
working.
"""
from typing import List, Optional, Tuple


class ChainError(ValueError):
    """Base class for every chain analysis error."""


class ChainParseError(ChainError):
    """Malformed chain, multigraph or path file."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ChainValidationError(ChainError):
    """Transition matrix or distribution violates a stochastic invariant."""


class ErgodicityError(ChainError):
    """The digraph of positive transitions is not strongly connected."""


class StationaryError(ChainError):
    """The stationary linear system could not be solved accurately."""

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class EnumerationCapError(ChainError):
    """Subset enumeration was requested for a chain above the configured cap."""


class GroupError(ChainError):
    """Invalid group presentation."""


class PathFamilyError(ChainError):
    """A path family is invalid or could not be built for some ordered pairs."""

    def __init__(self, message: str, pairs: Optional[List[Tuple[int, int]]] = None):
        self.pairs = list(pairs or [])
        super().__init__(message)
