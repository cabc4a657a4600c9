"""Exception types raised by gsmkit."""


class GSMError(ValueError):
    """Base class for all library errors."""


class DimensionError(GSMError):
    pass


class NotHermitianError(GSMError):
    pass


class InvalidStateError(GSMError):
    pass


class BasisError(GSMError):
    """Operators fail the traceless orthonormality requirements."""


class PositivityError(GSMError):
    """A construction parameter produces a non-positive measurement operator."""

    def __init__(self, message, *, block=None, element=None, eigenvalue=None, t_range=None):
        super().__init__(message)
        self.block = block
        self.element = element
        self.eigenvalue = eigenvalue
        self.t_range = t_range


class NotInformationallyCompleteError(GSMError):
    def __init__(self, message, *, rank=None, required=None):
        super().__init__(message)
        self.rank = rank
        self.required = required


class NotRClassError(GSMError):
    """The closed-form coincidence bound needs a constant x - y across POVMs."""
