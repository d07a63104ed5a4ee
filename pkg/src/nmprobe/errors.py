"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad user-supplied configuration or out-of-contract input."""


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


class FormatError(ValidationError):
    """A dataset or model file does not match the expected schema."""
