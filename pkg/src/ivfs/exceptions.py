"""Exception hierarchy shared by every module."""


class IvfsError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(IvfsError, ValueError):
    """A value violates a domain invariant (e.g. an interval with lo > hi)."""


class FormatError(IvfsError, ValueError):
    """An input stream does not follow its documented layout."""


class DimensionError(IvfsError, ValueError):
    """Two interval vectors that must be aligned have different lengths."""


class ConfigurationError(IvfsError, ValueError):
    """A parameter is outside the domain accepted by an operation."""


class SplitError(IvfsError, ValueError):
    """A dataset cannot be split into non-empty train and test parts."""
