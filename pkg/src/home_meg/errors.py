"""Exceptions raised by the home-meg toolkit.

Every error carries the values that triggered it so callers (and the CLI)
can report them without re-parsing the message.
"""

from typing import Any, Optional


class HomeMegError(Exception):
    """Base class for all home-meg domain errors."""


class ParameterDomainError(HomeMegError, ValueError):
    """Raised when a model parameter is outside its domain."""

    def __init__(self, field: str, value: Any, reason: str):
        self.field = field
        self.value = value
        self.reason = reason
        super().__init__(f"Invalid parameter {field}={value!r}: {reason}")


class DegenerateChainError(HomeMegError, ValueError):
    """Raised when p + q = 0, so the edge chain has no stationary distribution."""

    def __init__(self, p: float, q: float):
        self.p = p
        self.q = q
        super().__init__(
            f"Degenerate edge chain: p + q = {p + q} (p={p}, q={q}); "
            f"stationary distribution undefined"
        )


class SnapshotShapeError(HomeMegError, ValueError):
    """Raised when an edge-state vector does not match n(n-1)/2."""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"Edge-state vector has length {actual}, expected {expected}")


class CouplingInapplicableError(HomeMegError):
    """Raised when the sandwich coupling hypotheses p+q <= 1 and gamma <= alpha fail."""

    def __init__(self, hypothesis: str, detail: str):
        self.hypothesis = hypothesis
        self.detail = detail
        super().__init__(f"Coupling not applicable, violated {hypothesis}: {detail}")


class NoContactsError(HomeMegError, ValueError):
    """Raised when p*alpha + q*gamma = 0: contacts never happen at stationarity."""

    def __init__(self, p: float, q: float, alpha: float, gamma: float):
        self.rate = p * alpha + q * gamma
        super().__init__(
            f"Inter-contact time undefined: p*alpha + q*gamma = 0 "
            f"(p={p}, q={q}, alpha={alpha}, gamma={gamma})"
        )


class InsufficientDataError(HomeMegError):
    """Raised when a simulation observed too few inter-contact gaps."""

    def __init__(self, observed: int, required: int):
        self.observed = observed
        self.required = required
        super().__init__(
            f"Only {observed} inter-contact gaps observed, at least {required} required; "
            f"increase the number of steps"
        )


class TraceValidationError(HomeMegError, ValueError):
    """Raised when a CCDF trace row is malformed."""

    def __init__(self, row: int, reason: str, source: Optional[str] = None):
        self.row = row
        self.reason = reason
        self.source = source
        where = f"{source}, " if source else ""
        super().__init__(f"Invalid trace ({where}row {row}): {reason}")


class FitFailedError(HomeMegError):
    """Raised when every evaluated parameter point was infeasible."""

    def __init__(self, evaluated: int):
        self.evaluated = evaluated
        super().__init__(f"Fit failed: all {evaluated} evaluated parameter points were infeasible")


class LambdaUndefinedError(HomeMegError, ValueError):
    """Raised when p*alpha = 0, so Lambda = 4(p+q)/(p*alpha) is undefined."""

    def __init__(self, p: float, alpha: float):
        self.p = p
        self.alpha = alpha
        super().__init__(f"Lambda undefined: p*alpha = 0 (p={p}, alpha={alpha})")


class BoundPreconditionError(HomeMegError, ValueError):
    """Raised when a bound is evaluated outside its hypothesis."""

    def __init__(self, inequality: str, value: float, cap: float):
        self.inequality = inequality
        self.value = value
        self.cap = cap
        super().__init__(f"Bound precondition violated: {inequality} ({value} > {cap})")


class CapacityError(HomeMegError):
    """Raised when the exact oracle is asked for too many nodes."""

    def __init__(self, n: int, limit: int):
        self.n = n
        self.limit = limit
        super().__init__(f"Exact oracle supports n <= {limit}, got n={n}")
