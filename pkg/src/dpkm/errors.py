"""Exception types shared across the package."""


class DpKmError(Exception):
    """Base class for all errors raised by this package."""


class DataError(DpKmError):
    """Invalid or malformed input data (records, files, curves)."""


class ConfigError(DpKmError):
    """Invalid mechanism, evaluation, or ingestion configuration."""
