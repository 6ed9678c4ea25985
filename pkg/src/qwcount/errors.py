"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """Raised when a requested computation exceeds the built-in size guards."""
