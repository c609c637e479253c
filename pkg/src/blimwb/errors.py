class BlimwbError(Exception):
    """Base class for workbench errors."""


class InputError(BlimwbError, ValueError):
    """Malformed or inconsistent input data."""


class CapExceeded(BlimwbError):
    """An enumeration would exceed the configured size cap."""


class InfiniteGroupError(BlimwbError):
    """A computation needing a finite group was handed an infinite one."""
