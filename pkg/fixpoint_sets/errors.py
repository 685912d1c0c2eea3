"""
Error types for the fixed point set toolkit

Every failure raised by the library derives from FpsError so callers
(the CLI in particular) can map failures onto exit codes.
"""

from dataclasses import dataclass
from typing import Optional


class FpsError(Exception):
    """
    Base exception for library failures

    Attributes:
        message: Error description
        context: The operation or object that raised the error
        original_error: The underlying exception (if any)
    """

    exit_code = 6

    def __init__(
        self,
        message: str,
        context: Optional[str] = None,
        original_error: Optional[Exception] = None
    ):
        self.message = message
        self.context = context
        self.original_error = original_error
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.context:
            return f"[{self.context}] {self.message}"
        return self.message


class ParseError(FpsError):
    """Text does not follow the cycle-notation or set grammar"""
    exit_code = 2


class InvalidSet(FpsError):
    """A PermSet or SqSet invariant does not hold"""
    exit_code = 2


class CapExceeded(FpsError):
    """
    An instance is beyond desk scale

    Attributes:
        cap: The configured limit
        size: The size that was reached when the limit tripped
    """
    exit_code = 3

    def __init__(self, message: str, cap: int, size: int, context: Optional[str] = None):
        self.cap = cap
        self.size = size
        super().__init__(f"{message} (cap {cap}, reached {size})", context=context)


class ActionNotClosed(FpsError):
    """A generator maps the acted-on set outside itself"""


class NotPGroup(FpsError):
    """A group expected to be a p-group has order that is not a p-power"""


class DecompositionInconclusive(FpsError):
    """Budgets ran out before indecomposability could be confirmed"""
    exit_code = 4


class TheoremViolation(FpsError):
    """A proven structural statement failed on a concrete instance"""
    exit_code = 5


@dataclass(frozen=True)
class BudgetExhausted:
    """
    Verdict for kappa when every tested wreath power still has a projective summand

    Attributes:
        u_max: Largest exponent tested; kappa is strictly greater
        reason: Which budget stopped the search
    """
    u_max: int
    reason: str = "u budget"

    def __str__(self) -> str:
        return f">{self.u_max} ({self.reason})"
