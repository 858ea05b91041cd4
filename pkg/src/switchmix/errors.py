"""Exception types shared across the package."""

from __future__ import annotations


class SwitchmixError(Exception):
    """Base class for all package-specific errors."""


class ParseError(SwitchmixError):
    """Malformed degree-sequence text or graph file."""


class NotGraphical(SwitchmixError):
    """No simple graph realizes the requested degree sequence."""


class CapExceeded(SwitchmixError):
    """An enumeration grew past the configured cap."""

    def __init__(self, cap: int, message: str = ""):
        self.cap = cap
        super().__init__(message or f"enumeration exceeded cap of {cap}")


class ModelMismatch(SwitchmixError):
    """Objects from different graph models were combined."""


class InvalidMove(SwitchmixError):
    """A proposed switch is not applicable to the current graph."""


class Unbalanced(SwitchmixError):
    """Red and blue degrees disagree at some vertex."""


class InvalidMatching(SwitchmixError):
    """A red-blue pairing is not a valid matching of the given graph."""


class InvalidCircuit(SwitchmixError):
    """An edge sequence is not a closed alternating trail."""


class InternalInvariant(SwitchmixError):
    """An internal bookkeeping identity failed; indicates a bug."""


class NoBranch(SwitchmixError):
    """No applicable branch in a case analysis; indicates bad input or a bug."""


class NonTermination(SwitchmixError):
    """An iteration exceeded its proven step bound."""


class ReconstructionMismatch(SwitchmixError):
    """Parameter-bundle inversion did not reproduce the original endpoints."""


class PreconditionViolation(SwitchmixError):
    """A documented precondition of an operation does not hold."""


class ConvergenceFailure(SwitchmixError):
    """A numeric certificate (eigen-residual, chi-square) missed tolerance."""
