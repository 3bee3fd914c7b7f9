"""Exception types raised across the package."""


class ImpulseGraphError(Exception):
    """Base class for all package errors."""


class PnmError(ImpulseGraphError):
    """Malformed or unsupported PNM stream."""


class PnmParseError(PnmError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class UnsupportedFormatError(PnmError):
    pass


class PnmLengthError(PnmError):
    pass


class DegenerateGraphError(ImpulseGraphError, ValueError):
    """Raised when a weight matrix has zero total weight."""


class GraphSizeError(ImpulseGraphError, ValueError):
    """Raised when a dense graph would exceed the vertex cap."""


class UndefinedImprovementError(ImpulseGraphError, ValueError):
    """Relative improvement is undefined when the noisy image equals the original."""
