class HopfError(Exception):
    """Base class for toolkit errors."""


class DomainError(HopfError, ValueError):
    """Argument outside the domain where the quantity is defined."""


class SizeError(HopfError, ValueError):
    """Requested degree/order above the configured guard."""


class SingularityError(DomainError):
    """Kernel evaluated on (or numerically too close to) its diagonal."""
