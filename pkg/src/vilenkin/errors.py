"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument violates a documented precondition."""


class CapExceededError(RuntimeError):
    """A computation would exceed a configured resource cap."""


class VerificationError(RuntimeError):
    """An exact verification step failed, or was attempted on unverified input."""
