"""Exception types shared across the package."""


class PvmetricError(Exception):
    """Base class for all errors raised by this package."""


class DataError(PvmetricError):
    """Bad or inconsistent input data (files, specs, CSV records)."""


class NumericalError(PvmetricError):
    """A computation produced non-finite or otherwise unusable values."""
