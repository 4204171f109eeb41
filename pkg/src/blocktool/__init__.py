"""Exact-arithmetic workbench for p-blocks of small finite groups.

Everything here is computed over exact cyclotomic numbers, truncated p-adic
rings, and finite fields; no floating point is used anywhere. The verifiers
emit machine-checkable certificates with explicit witnesses on failure.
"""

__version__ = "0.1.0"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT_ERROR = 3


class BlocktoolError(Exception):
    """Base class for all errors raised by this package."""


class InputError(BlocktoolError):
    """Malformed or out-of-contract user input (exit code 3)."""


class GroupTooLargeError(InputError):
    """Group or Sylow subgroup exceeds the configured cap."""


class NotIntegralError(BlocktoolError):
    """A value required to be integral at the chosen prime is not."""


class InconclusiveError(BlocktoolError):
    """Precision escalation exhausted without a decision (exit code 2)."""


class InternalCheckError(BlocktoolError):
    """An internal cross-check failed; indicates a bug, not bad input."""
