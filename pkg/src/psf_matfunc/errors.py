"""Exception types shared across the package.

Precondition violations and numerical failures are kept distinct so the CLI
can map them to different exit codes (2 and 3 respectively).
"""


class PrecondError(ValueError):
    """An input violates a documented precondition or invariant."""


class NumericalError(RuntimeError):
    """A computation failed numerically (solver breakdown, non-finite values,
    eigendecomposition that does not reconstruct the input)."""
