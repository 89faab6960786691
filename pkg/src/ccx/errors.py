"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: ParameterError/PromiseViolation -> 2,
I/O and transport problems -> 3, InternalInvariantError -> 4.
"""


class CcxError(Exception):
    """Base class for all package errors."""


class ParameterError(CcxError, ValueError):
    """Invalid or unachievable parameters / malformed input."""


class PromiseViolation(CcxError):
    """Protocol inputs do not satisfy the promise of the problem."""


class TransportError(CcxError):
    """Connection or framing failure on the wire transport."""


class HandshakeError(TransportError):
    """Peer disagreed on protocol descriptor, seed, or input length."""


class NoTransition(CcxError):
    """Predicate has no defined adjacent value change."""


class NoBound(CcxError):
    """No embedding-based bound exists (trivial function)."""


class InternalInvariantError(CcxError):
    """A condition the construction guarantees failed; indicates a bug."""
