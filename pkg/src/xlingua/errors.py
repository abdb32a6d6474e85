"""Exception types shared across the package."""


class XlinguaError(Exception):
    """Base class for all package errors."""


class ParseError(XlinguaError):
    """A file could not be parsed (malformed line or record)."""


class ValidationError(XlinguaError):
    """Parsed input violates a structural invariant."""


class ConfigError(XlinguaError):
    """Missing or inconsistent configuration (e.g. unknown language pair)."""
