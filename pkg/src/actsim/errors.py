"""Exception types shared across the package."""


class ActsimError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(ActsimError):
    """An input file could not be parsed (bad CSV/XES/XML content)."""


class EmptyLogError(ActsimError):
    """An operation that needs events was given a log without any."""


class ParameterError(ActsimError):
    """An argument violates a documented precondition."""


class DataError(ActsimError):
    """Inputs are well-formed but inconsistent with each other."""


class ExportError(ActsimError):
    """Writing an output file failed; the message carries the path."""
