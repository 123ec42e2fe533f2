"""Exception types shared across the package."""


class TVDistError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(TVDistError, ValueError):
    """Inputs have incompatible lengths or shapes."""


class ParameterError(TVDistError, ValueError):
    """A numeric parameter lies outside its allowed range."""


class ValidityError(TVDistError, ValueError):
    """A distribution or ratio table violates its invariants."""


class SizeError(TVDistError, RuntimeError):
    """An enumeration or support-size cap would be exceeded."""


class ParseError(TVDistError, ValueError):
    """An instance or report document is malformed."""
