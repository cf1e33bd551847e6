"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: ``ConfigError`` and ``ParseError`` give 2,
``TruncationError`` gives 3, everything else that signals a failed check gives 1.
"""


class EngineError(Exception):
    """Base class for all errors raised by the engine."""


class ConfigError(EngineError):
    """Inconsistent run parameters (mismatched truncation orders, bad dimensions)."""


class ParseError(ConfigError):
    """Expression text outside the accepted grammar."""

    def __init__(self, message, text=None, pos=None):
        self.text = text
        self.pos = pos
        if text is not None and pos is not None:
            message = f"{message} at position {pos}\n  {text}\n  {' ' * pos}^"
        super().__init__(message)


class OutOfRangeError(EngineError):
    """A coefficient beyond the certified truncation order was requested."""


class TruncationError(EngineError):
    """The truncation audit could not certify the requested coefficient."""


class OrderError(EngineError):
    """Order of the zero operator, or a violated order bound."""


class MembershipError(EngineError):
    """An element failed its trace-bimodule certificate."""


class InvalidConnection(ConfigError):
    """Christoffel data that is not symmetric in its lower indices."""


class DomainError(EngineError):
    """Inputs outside the domain of an operation (parity, degree, precondition)."""
