"""Exception types shared across the package."""


class SimpctxError(Exception):
    """Base class for library errors."""


class DimensionError(SimpctxError, ValueError):
    """An operator or simplex was used at an incompatible dimension."""


class PresentationError(SimpctxError, ValueError):
    """A space presentation, subspace or gluing request is malformed."""


class DistributionError(SimpctxError, ValueError):
    """A distribution table is malformed (unnormalized, negative, missing)."""


class ResourceCapError(SimpctxError):
    """An enumeration would exceed the configured size cap."""
