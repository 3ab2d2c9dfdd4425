"""Exception types shared by the library and mapped to CLI exit codes."""


class DomainError(ValueError):
    """An input lies outside the domain of the requested operation."""


class ResourceError(RuntimeError):
    """A computation would exceed a configured size cap."""
