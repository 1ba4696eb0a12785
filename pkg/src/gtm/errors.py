"""Exception hierarchy shared by all modules."""


class GTMError(Exception):
    """Base class for every error raised by this package."""


class AlphabetError(GTMError, ValueError):
    pass


class DecodeError(GTMError, ValueError):
    """A symbol sequence does not follow the expected name grammar."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class NotAName(DecodeError):
    """The input is well-formed but names no object."""

    def __init__(self, message, offset=None, record=None):
        super().__init__(message, offset)
        self.record = record


class StreamExhausted(GTMError):
    """A stream producer stopped; streams are infinite by contract."""


class ClassViolation(GTMError):
    """A word function broke its declared monotonicity class."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MachineError(GTMError):
    pass


class KindError(MachineError, TypeError):
    """A value does not belong to the carrier set of its tape."""


class SubroutineError(MachineError):
    pass


class LoweringError(GTMError):
    pass


class RepresentationError(GTMError):
    pass


class InvariantBreach(GTMError, ValueError):
    pass


class PrecisionError(GTMError):
    """Not enough precision could be obtained within the probe budget."""


class ReductionError(GTMError):
    pass
